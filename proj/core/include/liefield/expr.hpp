#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "liefield/number.hpp"

namespace liefield {

enum class Op { Constant, Pi, Variable, Add, Sub, Mul, Div, Neg, Pow, Call };
enum class Func { Sin, Cos, Exp, Ln, Sqrt };

struct Node;  // defined in expr.cpp

// Immutable expression handle. Copies share the underlying tree.
class Expr {
public:
    Expr();                      // constant 0
    Expr(std::int64_t value);    // NOLINT(google-explicit-constructor)
    Expr(int value) : Expr(static_cast<std::int64_t>(value)) {}  // NOLINT
    explicit Expr(Number value);
    explicit Expr(double value);

    static Expr var(std::string name);
    static Expr pi();

    // Raw constructors: build exactly the requested node, no folding.
    static Expr raw_add(Expr a, Expr b);
    static Expr raw_sub(Expr a, Expr b);
    static Expr raw_mul(Expr a, Expr b);
    static Expr raw_div(Expr a, Expr b);
    static Expr raw_neg(Expr a);
    static Expr raw_pow(Expr a, Expr b);
    static Expr raw_call(Func f, Expr a);

    [[nodiscard]] Op op() const;
    [[nodiscard]] const Number& number() const;      // Constant only
    [[nodiscard]] const std::string& name() const;   // Variable only
    [[nodiscard]] Func func() const;                 // Call only
    [[nodiscard]] Expr lhs() const;                  // binary ops, and the operand of Neg/Call
    [[nodiscard]] Expr rhs() const;                  // binary ops
    [[nodiscard]] const Node* node() const noexcept { return node_.get(); }

    [[nodiscard]] bool is_constant() const;
    [[nodiscard]] bool is_zero() const;
    [[nodiscard]] bool is_one() const;
    [[nodiscard]] std::size_t size() const;  // node count

private:
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
    friend struct ExprAccess;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& what)
        : std::runtime_error(what), offset_(offset), expected_(std::move(expected)) {}
    [[nodiscard]] std::size_t offset() const noexcept { return offset_; }
    [[nodiscard]] const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnboundVariable : public EvalError {
public:
    explicit UnboundVariable(const std::string& name)
        : EvalError("unbound variable '" + name + "'"), name_(name) {}
    [[nodiscard]] const std::string& variable() const noexcept { return name_; }

private:
    std::string name_;
};

class DomainError : public EvalError {
public:
    using EvalError::EvalError;
};

using Env = std::unordered_map<std::string, double>;

// Simplifying arithmetic. Results are folded with the same rules as simplify().
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& a, const Expr& b);
Expr call(Func f, const Expr& a);
inline Expr sin(const Expr& a) { return call(Func::Sin, a); }
inline Expr cos(const Expr& a) { return call(Func::Cos, a); }
inline Expr exp(const Expr& a) { return call(Func::Exp, a); }
inline Expr ln(const Expr& a) { return call(Func::Ln, a); }
inline Expr sqrt(const Expr& a) { return call(Func::Sqrt, a); }
inline Expr& operator+=(Expr& a, const Expr& b) { return a = a + b; }
inline Expr& operator-=(Expr& a, const Expr& b) { return a = a - b; }
inline Expr& operator*=(Expr& a, const Expr& b) { return a = a * b; }

Expr sum(const std::vector<Expr>& terms);

[[nodiscard]] bool structurally_equal(const Expr& a, const Expr& b);
inline bool operator==(const Expr& a, const Expr& b) { return structurally_equal(a, b); }

[[nodiscard]] Expr parse(const std::string& text);

enum class PrintStyle { Text, Latex };

// Maps a variable name to its LaTeX rendering; used only for PrintStyle::Latex.
using LatexNamer = std::string (*)(const std::string&);

[[nodiscard]] std::string print(const Expr& e, PrintStyle style = PrintStyle::Text, LatexNamer namer = nullptr);
[[nodiscard]] std::string to_string(const Expr& e);

[[nodiscard]] double eval(const Expr& e, const Env& env);
[[nodiscard]] Expr diff(const Expr& e, const std::string& var);
[[nodiscard]] Expr simplify(const Expr& e);
[[nodiscard]] Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings);

[[nodiscard]] bool depends_on(const Expr& e, const std::string& var);
[[nodiscard]] std::set<std::string> free_variables(const Expr& e);

[[nodiscard]] const char* func_name(Func f);

}  // namespace liefield
