#pragma once

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "liefield/expr.hpp"

namespace liefield {

// Ordered variable layout shared by a batch of compiled expressions.
class VarLayout {
public:
    VarLayout() = default;
    explicit VarLayout(std::vector<std::string> names);

    void add(const std::string& name);
    [[nodiscard]] std::size_t size() const noexcept { return names_.size(); }
    [[nodiscard]] const std::vector<std::string>& names() const noexcept { return names_; }
    [[nodiscard]] bool contains(const std::string& name) const { return index_.count(name) != 0; }
    [[nodiscard]] std::size_t at(const std::string& name) const;

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, std::size_t> index_;
};

// Postfix program for fast repeated evaluation against a fixed layout.
// Domain errors raise DomainError exactly as eval() does.
class CompiledExpr {
public:
    CompiledExpr() = default;
    CompiledExpr(const Expr& e, const VarLayout& layout);  // throws UnboundVariable

    [[nodiscard]] double operator()(std::span<const double> values) const;
    [[nodiscard]] bool is_zero() const noexcept { return code_.size() == 1 && code_[0].op == Code::Const && code_[0].value == 0.0; }

private:
    enum class Code : unsigned char { Const, Load, Add, Sub, Mul, Div, Neg, Pow, Sin, Cos, Exp, Ln, Sqrt };
    struct Instr {
        Code op;
        std::size_t slot = 0;
        double value = 0.0;
    };
    void emit(const Expr& e, const VarLayout& layout, std::size_t depth);

    std::vector<Instr> code_{Instr{Code::Const, 0, 0.0}};
    std::size_t max_depth_ = 1;
};

std::vector<CompiledExpr> compile_all(const std::vector<Expr>& exprs, const VarLayout& layout);

}  // namespace liefield
