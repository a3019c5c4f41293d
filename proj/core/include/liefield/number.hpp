#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace liefield {

// Numeric literal: exact int64 rational when it fits, otherwise a double.
class Number {
public:
    Number() = default;
    Number(std::int64_t value) : num_(value) {}  // NOLINT(google-explicit-constructor)

    static Number rational(std::int64_t num, std::int64_t den);
    static Number real(double value);

    // Decimal literal text (digits, optional fraction, optional exponent).
    // Exact when the value has at most nine fractional digits and fits in 64 bits.
    static Number from_literal(const std::string& text);

    [[nodiscard]] bool exact() const noexcept { return exact_; }
    [[nodiscard]] std::int64_t num() const noexcept { return num_; }
    [[nodiscard]] std::int64_t den() const noexcept { return den_; }
    [[nodiscard]] double value() const noexcept;

    [[nodiscard]] bool is_zero() const noexcept;
    [[nodiscard]] bool is_one() const noexcept;
    [[nodiscard]] bool is_integer() const noexcept { return exact_ && den_ == 1; }
    [[nodiscard]] bool negative() const noexcept;

    [[nodiscard]] Number operator-() const;
    friend Number operator+(const Number& a, const Number& b);
    friend Number operator-(const Number& a, const Number& b);
    friend Number operator*(const Number& a, const Number& b);
    // Returns nullopt on division by zero.
    friend std::optional<Number> divide(const Number& a, const Number& b);
    // Exact for rational base and small integer exponent; nullopt when undefined.
    friend std::optional<Number> power(const Number& a, const Number& b);

    // Exact pairs compare as rationals, anything else by double value.
    friend bool operator==(const Number& a, const Number& b) noexcept;

    // Canonical text: integers and p/q for exact values, shortest round-trip
    // decimal for doubles.
    [[nodiscard]] std::string str() const;

private:
    bool exact_ = true;
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
    double real_ = 0.0;
};

}  // namespace liefield
