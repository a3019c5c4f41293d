#include <cmath>
#include <numbers>

#include "expr_node.hpp"

namespace liefield {

namespace {

using NodePtr = std::shared_ptr<const Node>;

Expr make(Node n) {
    std::size_t size = 1;
    if (n.a) size += n.a->size;
    if (n.b) size += n.b->size;
    n.size = size;
    return ExprAccess::wrap(std::make_shared<const Node>(std::move(n)));
}

Expr make_binary(Op op, const Expr& a, const Expr& b) {
    Node n;
    n.op = op;
    n.a = ExprAccess::ptr(a);
    n.b = ExprAccess::ptr(b);
    return make(std::move(n));
}

const NodePtr& zero_node() {
    static const NodePtr z = [] {
        auto n = std::make_shared<Node>();
        n->op = Op::Constant;
        n->value = Number(0);
        return NodePtr(n);
    }();
    return z;
}

bool is_negative_constant(const Expr& e) { return e.op() == Op::Constant && e.number().negative(); }

std::optional<Number> fold_call(Func f, const Number& x) {
    if (x.exact()) {
        if (x.is_zero()) {
            switch (f) {
                case Func::Sin: return Number(0);
                case Func::Cos: return Number(1);
                case Func::Exp: return Number(1);
                case Func::Sqrt: return Number(0);
                case Func::Ln: return std::nullopt;
            }
        }
        if (x.is_one()) {
            if (f == Func::Ln) return Number(0);
            if (f == Func::Sqrt) return Number(1);
        }
    }
    const double v = x.value();
    double r = 0.0;
    switch (f) {
        case Func::Sin: r = std::sin(v); break;
        case Func::Cos: r = std::cos(v); break;
        case Func::Exp: r = std::exp(v); break;
        case Func::Ln:
            if (v <= 0.0) return std::nullopt;
            r = std::log(v);
            break;
        case Func::Sqrt:
            if (v < 0.0) return std::nullopt;
            r = std::sqrt(v);
            break;
    }
    if (!std::isfinite(r)) return std::nullopt;
    return Number::real(r);
}

}  // namespace

Expr::Expr() : node_(zero_node()) {}

Expr::Expr(std::int64_t value) : Expr(Number(value)) {}

Expr::Expr(Number value) {
    Node n;
    n.op = Op::Constant;
    n.value = value;
    node_ = std::make_shared<const Node>(std::move(n));
}

Expr::Expr(double value) : Expr(Number::real(value)) {}

Expr Expr::var(std::string name) {
    Node n;
    n.op = Op::Variable;
    n.name = std::move(name);
    return make(std::move(n));
}

Expr Expr::pi() {
    Node n;
    n.op = Op::Pi;
    return make(std::move(n));
}

Expr Expr::raw_add(Expr a, Expr b) { return make_binary(Op::Add, a, b); }
Expr Expr::raw_sub(Expr a, Expr b) { return make_binary(Op::Sub, a, b); }
Expr Expr::raw_mul(Expr a, Expr b) { return make_binary(Op::Mul, a, b); }
Expr Expr::raw_div(Expr a, Expr b) { return make_binary(Op::Div, a, b); }
Expr Expr::raw_pow(Expr a, Expr b) { return make_binary(Op::Pow, a, b); }

Expr Expr::raw_neg(Expr a) {
    Node n;
    n.op = Op::Neg;
    n.a = a.node_;
    return make(std::move(n));
}

Expr Expr::raw_call(Func f, Expr a) {
    Node n;
    n.op = Op::Call;
    n.func = f;
    n.a = a.node_;
    return make(std::move(n));
}

Op Expr::op() const { return node_->op; }
const Number& Expr::number() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
Func Expr::func() const { return node_->func; }
Expr Expr::lhs() const { return Expr(node_->a); }
Expr Expr::rhs() const { return Expr(node_->b); }
bool Expr::is_constant() const { return node_->op == Op::Constant; }
bool Expr::is_zero() const { return is_constant() && node_->value.is_zero(); }
bool Expr::is_one() const { return is_constant() && node_->value.is_one(); }
std::size_t Expr::size() const { return node_->size; }

const char* func_name(Func f) {
    switch (f) {
        case Func::Sin: return "sin";
        case Func::Cos: return "cos";
        case Func::Exp: return "exp";
        case Func::Ln: return "ln";
        case Func::Sqrt: return "sqrt";
    }
    return "?";
}

bool structurally_equal(const Expr& a, const Expr& b) {
    if (a.node() == b.node()) return true;
    if (a.op() != b.op() || a.size() != b.size()) return false;
    switch (a.op()) {
        case Op::Constant: return a.number() == b.number();
        case Op::Pi: return true;
        case Op::Variable: return a.name() == b.name();
        case Op::Neg: return structurally_equal(a.lhs(), b.lhs());
        case Op::Call: return a.func() == b.func() && structurally_equal(a.lhs(), b.lhs());
        default: return structurally_equal(a.lhs(), b.lhs()) && structurally_equal(a.rhs(), b.rhs());
    }
}

Expr operator-(const Expr& a) {
    if (a.is_constant()) return Expr(-a.number());
    if (a.op() == Op::Neg) return a.lhs();
    return Expr::raw_neg(a);
}

Expr operator+(const Expr& a, const Expr& b) {
    if (a.is_constant() && b.is_constant()) return Expr(a.number() + b.number());
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (b.op() == Op::Neg) return a - b.lhs();
    if (is_negative_constant(b)) return a - Expr(-b.number());
    if (a.op() == Op::Neg) return b - a.lhs();
    if (structurally_equal(a, b)) return Expr(2) * a;
    return Expr::raw_add(a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
    if (a.is_constant() && b.is_constant()) return Expr(a.number() - b.number());
    if (b.is_zero()) return a;
    if (a.is_zero()) return -b;
    if (structurally_equal(a, b)) return Expr(0);
    if (b.op() == Op::Neg) return a + b.lhs();
    if (is_negative_constant(b)) return a + Expr(-b.number());
    return Expr::raw_sub(a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
    if (a.is_constant() && b.is_constant()) return Expr(a.number() * b.number());
    if (a.is_zero() || b.is_zero()) return Expr(0);
    if (a.is_one()) return b;
    if (b.is_one()) return a;
    if (a.is_constant() && a.number() == Number(-1)) return -b;
    if (b.is_constant() && b.number() == Number(-1)) return -a;
    if (a.op() == Op::Neg) return -(a.lhs() * b);
    if (b.op() == Op::Neg) return -(a * b.lhs());
    if (b.is_constant()) return b * a;
    if (a.is_constant() && b.op() == Op::Mul && b.lhs().is_constant()) {
        return Expr(a.number() * b.lhs().number()) * b.rhs();
    }
    return Expr::raw_mul(a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
    if (b.is_zero()) return Expr::raw_div(a, b);
    if (a.is_constant() && b.is_constant()) {
        if (auto q = divide(a.number(), b.number())) return Expr(*q);
    }
    if (a.is_zero()) return Expr(0);
    if (b.is_one()) return a;
    if (b.is_constant() && b.number() == Number(-1)) return -a;
    if (a.op() == Op::Neg) return -(a.lhs() / b);
    if (b.op() == Op::Neg) return -(a / b.lhs());
    return Expr::raw_div(a, b);
}

Expr pow(const Expr& a, const Expr& b) {
    if (b.is_zero()) return Expr(1);
    if (b.is_one()) return a;
    if (a.is_one()) return Expr(1);
    if (a.is_constant() && b.is_constant()) {
        if (auto p = power(a.number(), b.number())) return Expr(*p);
    }
    if (a.is_zero() && b.is_constant() && !b.number().negative()) return Expr(0);
    return Expr::raw_pow(a, b);
}

Expr call(Func f, const Expr& a) {
    if (a.is_constant()) {
        if (auto v = fold_call(f, a.number())) return Expr(*v);
    }
    return Expr::raw_call(f, a);
}

Expr sum(const std::vector<Expr>& terms) {
    Expr total;
    for (const auto& t : terms) total = total + t;
    return total;
}

Expr simplify(const Expr& e) {
    switch (e.op()) {
        case Op::Constant:
        case Op::Pi:
        case Op::Variable: return e;
        case Op::Add: return simplify(e.lhs()) + simplify(e.rhs());
        case Op::Sub: return simplify(e.lhs()) - simplify(e.rhs());
        case Op::Mul: return simplify(e.lhs()) * simplify(e.rhs());
        case Op::Div: return simplify(e.lhs()) / simplify(e.rhs());
        case Op::Pow: return pow(simplify(e.lhs()), simplify(e.rhs()));
        case Op::Neg: return -simplify(e.lhs());
        case Op::Call: return call(e.func(), simplify(e.lhs()));
    }
    return e;
}

Expr diff(const Expr& e, const std::string& v) {
    switch (e.op()) {
        case Op::Constant:
        case Op::Pi: return Expr(0);
        case Op::Variable: return Expr(e.name() == v ? 1 : 0);
        case Op::Add: return diff(e.lhs(), v) + diff(e.rhs(), v);
        case Op::Sub: return diff(e.lhs(), v) - diff(e.rhs(), v);
        case Op::Neg: return -diff(e.lhs(), v);
        case Op::Mul: {
            const Expr a = e.lhs(), b = e.rhs();
            return diff(a, v) * b + a * diff(b, v);
        }
        case Op::Div: {
            const Expr a = e.lhs(), b = e.rhs();
            const Expr da = diff(a, v), db = diff(b, v);
            if (db.is_zero()) return da / b;
            return (da * b - a * db) / pow(b, Expr(2));
        }
        case Op::Pow: {
            const Expr a = e.lhs(), b = e.rhs();
            const Expr da = diff(a, v), db = diff(b, v);
            if (db.is_zero()) return b * pow(a, b - Expr(1)) * da;
            if (da.is_zero()) return pow(a, b) * ln(a) * db;
            return pow(a, b) * (db * ln(a) + b * da / a);
        }
        case Op::Call: {
            const Expr a = e.lhs();
            const Expr da = diff(a, v);
            if (da.is_zero()) return Expr(0);
            switch (e.func()) {
                case Func::Sin: return cos(a) * da;
                case Func::Cos: return -(sin(a) * da);
                case Func::Exp: return e * da;
                case Func::Ln: return da / a;
                case Func::Sqrt: return da / (Expr(2) * e);
            }
        }
    }
    return Expr(0);
}

Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings) {
    switch (e.op()) {
        case Op::Constant:
        case Op::Pi: return e;
        case Op::Variable: {
            auto it = bindings.find(e.name());
            return it == bindings.end() ? e : it->second;
        }
        case Op::Add: return substitute(e.lhs(), bindings) + substitute(e.rhs(), bindings);
        case Op::Sub: return substitute(e.lhs(), bindings) - substitute(e.rhs(), bindings);
        case Op::Mul: return substitute(e.lhs(), bindings) * substitute(e.rhs(), bindings);
        case Op::Div: return substitute(e.lhs(), bindings) / substitute(e.rhs(), bindings);
        case Op::Pow: return pow(substitute(e.lhs(), bindings), substitute(e.rhs(), bindings));
        case Op::Neg: return -substitute(e.lhs(), bindings);
        case Op::Call: return call(e.func(), substitute(e.lhs(), bindings));
    }
    return e;
}

double eval(const Expr& e, const Env& env) {
    switch (e.op()) {
        case Op::Constant: return e.number().value();
        case Op::Pi: return std::numbers::pi;
        case Op::Variable: {
            auto it = env.find(e.name());
            if (it == env.end()) throw UnboundVariable(e.name());
            return it->second;
        }
        case Op::Add: return eval(e.lhs(), env) + eval(e.rhs(), env);
        case Op::Sub: return eval(e.lhs(), env) - eval(e.rhs(), env);
        case Op::Mul: return eval(e.lhs(), env) * eval(e.rhs(), env);
        case Op::Div: {
            const double num = eval(e.lhs(), env);
            const double den = eval(e.rhs(), env);
            if (den == 0.0) throw DomainError("division by zero");
            return num / den;
        }
        case Op::Neg: return -eval(e.lhs(), env);
        case Op::Pow: {
            const double a = eval(e.lhs(), env);
            const double b = eval(e.rhs(), env);
            const double r = std::pow(a, b);
            if (!std::isfinite(r) && std::isfinite(a) && std::isfinite(b)) {
                throw DomainError("power undefined for base " + std::to_string(a));
            }
            return r;
        }
        case Op::Call: {
            const double x = eval(e.lhs(), env);
            switch (e.func()) {
                case Func::Sin: return std::sin(x);
                case Func::Cos: return std::cos(x);
                case Func::Exp: return std::exp(x);
                case Func::Ln:
                    if (x <= 0.0) throw DomainError("ln of non-positive argument");
                    return std::log(x);
                case Func::Sqrt:
                    if (x < 0.0) throw DomainError("sqrt of negative argument");
                    return std::sqrt(x);
            }
        }
    }
    return 0.0;
}

bool depends_on(const Expr& e, const std::string& var) {
    switch (e.op()) {
        case Op::Constant:
        case Op::Pi: return false;
        case Op::Variable: return e.name() == var;
        case Op::Neg:
        case Op::Call: return depends_on(e.lhs(), var);
        default: return depends_on(e.lhs(), var) || depends_on(e.rhs(), var);
    }
}

namespace {
void collect(const Expr& e, std::set<std::string>& out) {
    switch (e.op()) {
        case Op::Constant:
        case Op::Pi: return;
        case Op::Variable: out.insert(e.name()); return;
        case Op::Neg:
        case Op::Call: collect(e.lhs(), out); return;
        default:
            collect(e.lhs(), out);
            collect(e.rhs(), out);
    }
}
}  // namespace

std::set<std::string> free_variables(const Expr& e) {
    std::set<std::string> out;
    collect(e, out);
    return out;
}

}  // namespace liefield
