#include "liefield/number.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

namespace liefield {

namespace {

bool checked_mul(std::int64_t a, std::int64_t b, std::int64_t& out) {
    return !__builtin_mul_overflow(a, b, &out);
}

bool checked_add(std::int64_t a, std::int64_t b, std::int64_t& out) {
    return !__builtin_add_overflow(a, b, &out);
}

std::optional<Number> make_rational(std::int64_t num, std::int64_t den) {
    if (den == 0) return std::nullopt;
    if (num == INT64_MIN || den == INT64_MIN) return std::nullopt;
    return Number::rational(num, den);
}

}  // namespace

Number Number::rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    if (num == INT64_MIN || den == INT64_MIN) {
        return real(static_cast<double>(num) / static_cast<double>(den));
    }
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    Number n;
    n.num_ = g ? num / g : 0;
    n.den_ = g ? den / g : 1;
    return n;
}

Number Number::real(double value) {
    Number n;
    n.exact_ = false;
    n.real_ = value;
    n.num_ = 0;
    n.den_ = 1;
    return n;
}

Number Number::from_literal(const std::string& text) {
    std::int64_t mantissa = 0;
    int frac_digits = 0;
    bool seen_dot = false;
    bool overflow = false;
    std::size_t i = 0;
    for (; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '.') {
            seen_dot = true;
            continue;
        }
        if (c < '0' || c > '9') break;
        if (!checked_mul(mantissa, 10, mantissa) || !checked_add(mantissa, c - '0', mantissa)) {
            overflow = true;
        }
        if (seen_dot) ++frac_digits;
    }
    int exponent = 0;
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        exponent = std::atoi(text.c_str() + i + 1);
    }
    const int scale = frac_digits - exponent;
    if (!overflow && scale <= 9 && scale >= -18) {
        std::int64_t factor = 1;
        bool ok = true;
        for (int s = 0; s < std::abs(scale) && ok; ++s) ok = checked_mul(factor, 10, factor);
        if (ok) {
            if (scale >= 0) return rational(mantissa, factor);
            std::int64_t scaled = 0;
            if (checked_mul(mantissa, factor, scaled)) return Number(scaled);
        }
    }
    return real(std::strtod(text.c_str(), nullptr));
}

double Number::value() const noexcept {
    return exact_ ? static_cast<double>(num_) / static_cast<double>(den_) : real_;
}

bool Number::is_zero() const noexcept { return exact_ ? num_ == 0 : real_ == 0.0; }

bool Number::is_one() const noexcept { return exact_ ? (num_ == 1 && den_ == 1) : real_ == 1.0; }

bool Number::negative() const noexcept { return exact_ ? num_ < 0 : std::signbit(real_); }

Number Number::operator-() const {
    if (exact_) {
        if (num_ == INT64_MIN) return real(-value());
        Number n = *this;
        n.num_ = -num_;
        return n;
    }
    return real(-real_);
}

Number operator+(const Number& a, const Number& b) {
    if (a.exact_ && b.exact_) {
        std::int64_t l = 0, r = 0, n = 0, d = 0;
        if (checked_mul(a.num_, b.den_, l) && checked_mul(b.num_, a.den_, r) && checked_add(l, r, n) &&
            checked_mul(a.den_, b.den_, d)) {
            if (auto q = make_rational(n, d)) return *q;
        }
    }
    return Number::real(a.value() + b.value());
}

Number operator-(const Number& a, const Number& b) { return a + (-b); }

Number operator*(const Number& a, const Number& b) {
    if (a.exact_ && b.exact_) {
        std::int64_t n = 0, d = 0;
        if (checked_mul(a.num_, b.num_, n) && checked_mul(a.den_, b.den_, d)) {
            if (auto q = make_rational(n, d)) return *q;
        }
    }
    return Number::real(a.value() * b.value());
}

std::optional<Number> divide(const Number& a, const Number& b) {
    if (b.is_zero()) return std::nullopt;
    if (a.exact_ && b.exact_) {
        std::int64_t n = 0, d = 0;
        if (checked_mul(a.num_, b.den_, n) && checked_mul(a.den_, b.num_, d)) {
            if (auto q = make_rational(n, d)) return *q;
        }
    }
    return Number::real(a.value() / b.value());
}

std::optional<Number> power(const Number& a, const Number& b) {
    if (a.exact_ && b.is_integer() && b.num_ >= -64 && b.num_ <= 64) {
        if (a.is_zero() && b.num_ < 0) return std::nullopt;
        Number result(1);
        Number base = a;
        std::int64_t e = b.num_ < 0 ? -b.num_ : b.num_;
        for (std::int64_t i = 0; i < e; ++i) result = result * base;
        if (b.num_ < 0) return divide(Number(1), result);
        return result;
    }
    const double v = std::pow(a.value(), b.value());
    if (!std::isfinite(v)) return std::nullopt;
    return Number::real(v);
}

bool operator==(const Number& a, const Number& b) noexcept {
    if (a.exact_ && b.exact_) return a.num_ == b.num_ && a.den_ == b.den_;
    return a.value() == b.value();
}

std::string Number::str() const {
    if (exact_) {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }
    if (std::isnan(real_)) return "nan";
    if (std::isinf(real_)) return real_ > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, real_);
    std::string s(buf, res.ptr);
    // Keep doubles visibly non-integral so the literal re-parses to the same value.
    if (s.find_first_of(".e") == std::string::npos) s += ".0";
    return s;
}

}  // namespace liefield
