#pragma once

#include <random>
#include <string>
#include <vector>

#include "liefield/fields.hpp"
#include "liefield/presets.hpp"

namespace liefield::testing {

// Layout over x, u, y, yd, then ud.
inline VarLayout full_layout(const FibrationDims& d) {
    VarLayout lay = jet_layout(d, true);
    for (std::size_t A = 0; A < d.nu; ++A)
        for (std::size_t i = 0; i < d.nx; ++i) lay.add(ud_name(A, i));
    return lay;
}

inline std::vector<double> random_values(const VarLayout& lay, const SampleBox& box, std::mt19937_64& rng) {
    return box.sample(lay.names(), rng);
}

inline double eval_at(const Expr& e, const VarLayout& lay, const std::vector<double>& v) {
    return CompiledExpr(e, lay)(v);
}

inline SecondJetPoint random_second_jet(const FibrationDims& d, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> U(lo, hi);
    SecondJetPoint p{{std::vector<double>(d.nx), std::vector<double>(d.nu), Tensor<double>({d.k, d.r})},
                     Tensor<double>({d.k, d.r, d.r})};
    for (auto& v : p.j1.x) v = U(rng);
    for (auto& v : p.j1.u) v = U(rng);
    for (auto& v : p.j1.y) v = U(rng);
    for (auto& v : p.y2) v = U(rng);
    return p;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

}  // namespace liefield::testing

namespace liefield::testing {

// Random expression over vars, total on the whole real line (guarded ln, sqrt and division).
// Literals stay below 3 in magnitude so central differences with h = 1e-5 remain accurate.
inline Expr random_expr(std::mt19937_64& rng, const std::vector<std::string>& vars, int depth) {
    std::uniform_int_distribution<int> pick(0, 99);
    const auto leaf = [&]() -> Expr {
        const int r = pick(rng);
        if (r < 60) return Expr::var(vars[static_cast<std::size_t>(pick(rng)) % vars.size()]);
        if (r < 80) return Expr(static_cast<std::int64_t>(pick(rng) % 7 - 3));
        if (r < 95) return parse(std::to_string(pick(rng) % 3) + "." + std::to_string(pick(rng) % 100));
        return Expr::pi();
    };
    if (depth <= 0) return leaf();
    const auto sub = [&] { return random_expr(rng, vars, depth - 1); };
    const auto positive = [&](const Expr& e) { return Expr::raw_add(Expr(1), Expr::raw_pow(e, Expr(2))); };
    switch (pick(rng) % 13) {
        case 0: return Expr::raw_add(sub(), sub());
        case 1: return Expr::raw_sub(sub(), sub());
        case 2: return Expr::raw_mul(sub(), sub());
        case 3: return Expr::raw_div(sub(), positive(sub()));
        case 4: return Expr::raw_neg(sub());
        case 5: return Expr::raw_pow(sub(), Expr(static_cast<std::int64_t>(pick(rng) % 3 + 2)));
        case 6: return Expr::raw_pow(positive(sub()), parse("0.5"));
        case 7: return Expr::raw_call(Func::Sin, sub());
        case 8: return Expr::raw_call(Func::Cos, sub());
        case 9: return Expr::raw_call(Func::Exp, Expr::raw_call(Func::Sin, sub()));
        case 10: return Expr::raw_call(Func::Ln, positive(sub()));
        case 11: return Expr::raw_call(Func::Sqrt, positive(sub()));
        default: return leaf();
    }
}

}  // namespace liefield::testing
