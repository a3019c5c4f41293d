#pragma once

#include <memory>
#include <string>

#include "liefield/expr.hpp"

namespace liefield {

struct Node {
    Op op = Op::Constant;
    Number value;
    std::string name;
    Func func = Func::Sin;
    std::shared_ptr<const Node> a;
    std::shared_ptr<const Node> b;
    std::size_t size = 1;
};

struct ExprAccess {
    static Expr wrap(std::shared_ptr<const Node> n) { return Expr(std::move(n)); }
    static const std::shared_ptr<const Node>& ptr(const Expr& e) { return e.node_; }
};

// Precedence classes shared by the text and LaTeX printers.
int precedence(const Expr& e);

}  // namespace liefield
