#include "liefield/compiled.hpp"

#include <cmath>
#include <numbers>

namespace liefield {

VarLayout::VarLayout(std::vector<std::string> names) {
    for (auto& n : names) add(n);
}

void VarLayout::add(const std::string& name) {
    if (index_.count(name)) return;
    index_.emplace(name, names_.size());
    names_.push_back(name);
}

std::size_t VarLayout::at(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw UnboundVariable(name);
    return it->second;
}

CompiledExpr::CompiledExpr(const Expr& e, const VarLayout& layout) {
    code_.clear();
    max_depth_ = 0;
    emit(e, layout, 1);
}

void CompiledExpr::emit(const Expr& e, const VarLayout& layout, std::size_t depth) {
    max_depth_ = std::max(max_depth_, depth);
    switch (e.op()) {
        case Op::Constant: code_.push_back({Code::Const, 0, e.number().value()}); return;
        case Op::Pi: code_.push_back({Code::Const, 0, std::numbers::pi}); return;
        case Op::Variable: code_.push_back({Code::Load, layout.at(e.name()), 0.0}); return;
        case Op::Neg:
            emit(e.lhs(), layout, depth);
            code_.push_back({Code::Neg});
            return;
        case Op::Call: {
            emit(e.lhs(), layout, depth);
            static constexpr Code map[] = {Code::Sin, Code::Cos, Code::Exp, Code::Ln, Code::Sqrt};
            code_.push_back({map[static_cast<int>(e.func())]});
            return;
        }
        default: break;
    }
    emit(e.lhs(), layout, depth);
    emit(e.rhs(), layout, depth + 1);
    Code c = Code::Add;
    switch (e.op()) {
        case Op::Add: c = Code::Add; break;
        case Op::Sub: c = Code::Sub; break;
        case Op::Mul: c = Code::Mul; break;
        case Op::Div: c = Code::Div; break;
        case Op::Pow: c = Code::Pow; break;
        default: break;
    }
    code_.push_back({c});
}

double CompiledExpr::operator()(std::span<const double> values) const {
    double small[64] = {};
    std::vector<double> big;
    double* st = small;
    if (max_depth_ > 64) {
        big.resize(max_depth_);
        st = big.data();
    }
    std::size_t sp = 0;
    for (const Instr& in : code_) {
        switch (in.op) {
            case Code::Const: st[sp++] = in.value; break;
            case Code::Load: st[sp++] = values[in.slot]; break;
            case Code::Add: --sp; st[sp - 1] += st[sp]; break;
            case Code::Sub: --sp; st[sp - 1] -= st[sp]; break;
            case Code::Mul: --sp; st[sp - 1] *= st[sp]; break;
            case Code::Div:
                --sp;
                if (st[sp] == 0.0) throw DomainError("division by zero");
                st[sp - 1] /= st[sp];
                break;
            case Code::Pow: {
                --sp;
                const double a = st[sp - 1], b = st[sp];
                const double r = std::pow(a, b);
                if (!std::isfinite(r) && std::isfinite(a) && std::isfinite(b)) {
                    throw DomainError("power undefined for base " + std::to_string(a));
                }
                st[sp - 1] = r;
                break;
            }
            case Code::Neg: st[sp - 1] = -st[sp - 1]; break;
            case Code::Sin: st[sp - 1] = std::sin(st[sp - 1]); break;
            case Code::Cos: st[sp - 1] = std::cos(st[sp - 1]); break;
            case Code::Exp: st[sp - 1] = std::exp(st[sp - 1]); break;
            case Code::Ln:
                if (st[sp - 1] <= 0.0) throw DomainError("ln of non-positive argument");
                st[sp - 1] = std::log(st[sp - 1]);
                break;
            case Code::Sqrt:
                if (st[sp - 1] < 0.0) throw DomainError("sqrt of negative argument");
                st[sp - 1] = std::sqrt(st[sp - 1]);
                break;
        }
    }
    return st[0];
}

std::vector<CompiledExpr> compile_all(const std::vector<Expr>& exprs, const VarLayout& layout) {
    std::vector<CompiledExpr> out;
    out.reserve(exprs.size());
    for (const auto& e : exprs) out.emplace_back(e, layout);
    return out;
}

}  // namespace liefield
