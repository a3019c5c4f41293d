#include "expr_node.hpp"

namespace liefield {

// 1: sums, 2: products and quotients, 3: unary minus, 4: powers, 5: atoms.
int precedence(const Expr& e) {
    switch (e.op()) {
        case Op::Add:
        case Op::Sub: return 1;
        case Op::Mul:
        case Op::Div: return 2;
        case Op::Neg: return 3;
        case Op::Pow: return 4;
        case Op::Constant: {
            const Number& n = e.number();
            if (n.exact() && !n.is_integer()) return 2;
            return n.negative() ? 3 : 5;
        }
        default: return 5;
    }
}

namespace {

class Printer {
public:
    Printer(PrintStyle style, LatexNamer namer) : latex_(style == PrintStyle::Latex), namer_(namer) {}

    std::string operator()(const Expr& e) const { return print(e); }

private:
    std::string wrap(const Expr& e, int min_prec) const {
        std::string s = print(e);
        if (effective_prec(e) < min_prec) {
            return latex_ ? "\\left(" + s + "\\right)" : "(" + s + ")";
        }
        return s;
    }

    int effective_prec(const Expr& e) const {
        // \frac groups its operands, so a quotient behaves like an atom.
        if (latex_ && e.op() == Op::Div) return 5;
        if (latex_ && e.op() == Op::Constant && e.number().exact() && !e.number().is_integer()) {
            return e.number().negative() ? 3 : 5;
        }
        return precedence(e);
    }

    std::string number(const Number& n) const {
        if (latex_ && n.exact() && !n.is_integer()) {
            const bool neg = n.num() < 0;
            return std::string(neg ? "-" : "") + "\\frac{" + std::to_string(neg ? -n.num() : n.num()) + "}{" +
                   std::to_string(n.den()) + "}";
        }
        return n.str();
    }

    std::string print(const Expr& e) const {
        switch (e.op()) {
            case Op::Constant: return number(e.number());
            case Op::Pi: return latex_ ? "\\pi" : "pi";
            case Op::Variable: return latex_ && namer_ ? namer_(e.name()) : e.name();
            case Op::Add: return wrap(e.lhs(), 1) + " + " + wrap(e.rhs(), 2);
            case Op::Sub: return wrap(e.lhs(), 1) + " - " + wrap(e.rhs(), 2);
            case Op::Mul: return wrap(e.lhs(), 2) + (latex_ ? " \\cdot " : "*") + wrap(e.rhs(), 3);
            case Op::Div:
                if (latex_) return "\\frac{" + print(e.lhs()) + "}{" + print(e.rhs()) + "}";
                return wrap(e.lhs(), 2) + "/" + wrap(e.rhs(), 3);
            case Op::Neg: {
                const Expr c = e.lhs();
                // A bare literal after '-' would re-parse as a negative constant.
                if (c.op() == Op::Constant && !c.number().negative()) {
                    return latex_ ? "-\\left(" + print(c) + "\\right)" : "-(" + print(c) + ")";
                }
                return "-" + wrap(c, 3);
            }
            case Op::Pow:
                if (latex_) return "{" + wrap(e.lhs(), 5) + "}^{" + print(e.rhs()) + "}";
                return wrap(e.lhs(), 5) + "^" + wrap(e.rhs(), 3);
            case Op::Call:
                if (latex_) {
                    if (e.func() == Func::Sqrt) return "\\sqrt{" + print(e.lhs()) + "}";
                    return std::string("\\") + func_name(e.func()) + "\\left(" + print(e.lhs()) + "\\right)";
                }
                return std::string(func_name(e.func())) + "(" + print(e.lhs()) + ")";
        }
        return {};
    }

    bool latex_;
    LatexNamer namer_;
};

}  // namespace

std::string print(const Expr& e, PrintStyle style, LatexNamer namer) { return Printer(style, namer)(e); }

std::string to_string(const Expr& e) { return print(e); }

}  // namespace liefield
