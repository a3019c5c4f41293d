#include "liefield/anchored_basis.hpp"

#include <algorithm>
#include <cmath>

namespace liefield {

AnchoredBasisSpec::AnchoredBasisSpec(std::vector<std::string> coordinates, std::size_t basis_rank)
    : coords(std::move(coordinates)),
      rank(basis_rank),
      anchor({basis_rank, coords.size()}),
      C({basis_rank, basis_rank, basis_rank}) {}

void AnchoredBasisSpec::check() const {
    if (anchor.shape() != std::vector<std::size_t>{rank, coords.size()}) throw ShapeError("anchor has wrong shape");
    if (C.shape() != std::vector<std::size_t>{rank, rank, rank}) throw ShapeError("bracket coefficients have wrong shape");
    const VarLayout lay = layout();
    const auto known = [&](const Expr& e, const char* what) {
        for (const auto& v : free_variables(e)) {
            if (!lay.contains(v)) throw ShapeError(std::string(what) + " uses undeclared variable '" + v + "'");
        }
    };
    for (const auto& e : anchor) known(e, "anchor");
    for (const auto& e : C) known(e, "bracket coefficient");
}

Expr anchor_derivative(const AnchoredBasisSpec& spec, std::size_t A, const Expr& f) {
    Expr out;
    for (std::size_t j = 0; j < spec.ncoords(); ++j) {
        const Expr& rho = spec.anchor(A, j);
        if (rho.is_zero()) continue;
        out += rho * diff(f, spec.coords[j]);
    }
    return out;
}

Expr anchor_derivative(const AnchoredBasisSpec& spec, const SectionExpr& s, const Expr& f) {
    Expr out;
    for (std::size_t A = 0; A < spec.rank; ++A) {
        if (s[A].is_zero()) continue;
        out += s[A] * anchor_derivative(spec, A, f);
    }
    return out;
}

SectionExpr bracket(const AnchoredBasisSpec& spec, const SectionExpr& s, const SectionExpr& t) {
    if (s.size() != spec.rank || t.size() != spec.rank) throw ShapeError("section has wrong length");
    SectionExpr out(spec.rank);
    for (std::size_t D = 0; D < spec.rank; ++D) {
        Expr v = anchor_derivative(spec, s, t[D]) - anchor_derivative(spec, t, s[D]);
        for (std::size_t A = 0; A < spec.rank; ++A) {
            if (s[A].is_zero()) continue;
            for (std::size_t B = 0; B < spec.rank; ++B) {
                if (t[B].is_zero() || spec.C(A, B, D).is_zero()) continue;
                v += s[A] * t[B] * spec.C(A, B, D);
            }
        }
        out[D] = v;
    }
    return out;
}

double StructureResiduals::max_anchor() const { return max_abs(anchor); }
double StructureResiduals::max_jacobi() const { return max_abs(jacobi); }
double StructureResiduals::max_antisym() const { return max_abs(antisym); }

StructureChecker::StructureChecker(const AnchoredBasisSpec& spec) : rank_(spec.rank), n_(spec.ncoords()) {
    spec.check();
    const VarLayout lay = spec.layout();
    for (const auto& e : spec.anchor) {
        rho_.emplace_back(e, lay);
        for (const auto& x : spec.coords) drho_.emplace_back(diff(e, x), lay);
    }
    for (const auto& e : spec.C) {
        c_.emplace_back(e, lay);
        for (const auto& x : spec.coords) dc_.emplace_back(diff(e, x), lay);
    }
}

StructureResiduals StructureChecker::at(std::span<const double> p) const {
    const std::size_t R = rank_, n = n_;
    std::vector<double> rho(R * n), drho(R * n * n), c(R * R * R), dc(R * R * R * n);
    for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = rho_[i](p);
    for (std::size_t i = 0; i < drho.size(); ++i) drho[i] = drho_[i].is_zero() ? 0.0 : drho_[i](p);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = c_[i](p);
    for (std::size_t i = 0; i < dc.size(); ++i) dc[i] = dc_[i].is_zero() ? 0.0 : dc_[i](p);

    const auto RHO = [&](std::size_t A, std::size_t j) { return rho[A * n + j]; };
    const auto DRHO = [&](std::size_t A, std::size_t i, std::size_t j) { return drho[(A * n + i) * n + j]; };
    const auto CC = [&](std::size_t A, std::size_t B, std::size_t D) { return c[(A * R + B) * R + D]; };
    const auto DC = [&](std::size_t A, std::size_t B, std::size_t D, std::size_t j) {
        return dc[((A * R + B) * R + D) * n + j];
    };

    StructureResiduals out{Tensor<double>({R, R, n}), Tensor<double>({R, R, R, R}), Tensor<double>({R, R, R})};
    for (std::size_t A = 0; A < R; ++A)
        for (std::size_t B = 0; B < R; ++B)
            for (std::size_t i = 0; i < n; ++i) {
                double v = 0.0;
                for (std::size_t j = 0; j < n; ++j) v += RHO(A, j) * DRHO(B, i, j) - RHO(B, j) * DRHO(A, i, j);
                for (std::size_t D = 0; D < R; ++D) v -= RHO(D, i) * CC(A, B, D);
                out.anchor(A, B, i) = v;
            }

    const auto cyclic_term = [&](std::size_t A, std::size_t B, std::size_t Cc, std::size_t mu) {
        double v = 0.0;
        for (std::size_t j = 0; j < n; ++j) v += RHO(A, j) * DC(B, Cc, mu, j);
        for (std::size_t nu = 0; nu < R; ++nu) v += CC(B, Cc, nu) * CC(A, nu, mu);
        return v;
    };
    for (std::size_t A = 0; A < R; ++A)
        for (std::size_t B = 0; B < R; ++B)
            for (std::size_t Cc = 0; Cc < R; ++Cc)
                for (std::size_t mu = 0; mu < R; ++mu) {
                    out.jacobi(A, B, Cc, mu) =
                        cyclic_term(A, B, Cc, mu) + cyclic_term(B, Cc, A, mu) + cyclic_term(Cc, A, B, mu);
                }

    for (std::size_t A = 0; A < R; ++A)
        for (std::size_t B = 0; B < R; ++B)
            for (std::size_t D = 0; D < R; ++D) out.antisym(A, B, D) = CC(A, B, D) + CC(B, A, D);
    return out;
}

}  // namespace liefield
