#pragma once

#include <vector>

#include "liefield/algebroid.hpp"
#include "liefield/exterior.hpp"

namespace liefield {

// Prolonged algebroid over a first jet manifold (or its dual), basis ordered
// {X_a (r), X_alpha (k), V^a_alpha (k*r, alpha-major)}.
// Coordinates are x, u, then the k*r fibre variables (y or mu), then mu0 when extended.
struct ProlongationSpec {
    FibrationDims dims;
    AnchoredBasisSpec basis;
    bool has_mu0 = false;

    [[nodiscard]] std::size_t rank() const noexcept { return basis.rank; }
    [[nodiscard]] std::size_t X(std::size_t a) const noexcept { return a; }
    [[nodiscard]] std::size_t Xv(std::size_t alpha) const noexcept { return dims.r + alpha; }
    [[nodiscard]] std::size_t V(std::size_t alpha, std::size_t a) const noexcept {
        return dims.r + dims.k + alpha * dims.r + a;
    }
    [[nodiscard]] std::size_t P0() const noexcept { return dims.r + dims.k + dims.k * dims.r; }  // extended only
};

[[nodiscard]] ProlongationSpec prolongation(const FibrationSpec& spec);
// Same bracket structure on (x, u, mu); the last block is P^a_alpha = d/dmu^a_alpha.
// With mu0 an extra generator P_0 = d/dmu0 is appended.
[[nodiscard]] ProlongationSpec dual_prolongation(const FibrationSpec& spec, bool with_mu0 = false);

struct JetPoint {
    std::vector<double> x;
    std::vector<double> u;
    Tensor<double> y;  // [alpha][a]
};

struct SecondJetPoint {
    JetPoint j1;
    Tensor<double> y2;  // [beta][b][a]: derivative of y^beta_b in direction a
};

// Variable layouts and value vectors in a fixed order: x, u, y, yd.
[[nodiscard]] VarLayout jet_layout(const FibrationDims& d, bool with_yd);
[[nodiscard]] std::vector<double> jet_values(const JetPoint& p);
[[nodiscard]] std::vector<double> jet_values(const SecondJetPoint& p);

// f'_{|a} = rho^i_a df/dx^i + (rho^A_a + rho^A_alpha y^alpha_a) df/du^A + yd{beta}_{b}_{a} df/dy^beta_b
[[nodiscard]] Expr total_derivative(const FibrationSpec& spec, const Expr& f, std::size_t a);

struct ZFunctions {
    Tensor<Expr> vert;  // [a][gamma][alpha] = Z^alpha_{a gamma}
    Tensor<Expr> mix;   // [a][c][alpha]     = Z^alpha_{a c}
    Tensor<Expr> bas;   // [a][c][b]         = Z^b_{a c}
};
[[nodiscard]] ZFunctions z_functions(const FibrationSpec& spec);

// theta^alpha = X^alpha - y^alpha_a X^a on the prolongation
[[nodiscard]] std::vector<AlgebroidForm> contact_forms(const FibrationSpec& spec, const ProlongationSpec& prol);

// Admissibility of a jet section, in x, u, y and ud{A}_{i}: [A][a]
[[nodiscard]] Tensor<Expr> admissibility_symbolic(const FibrationSpec& spec);
// Morphism condition of a jet section, in x, u, y and yd: [alpha][b][c]
[[nodiscard]] Tensor<Expr> morphism_symbolic(const FibrationSpec& spec);

// M^alpha_{bc}; zero exactly when the second-order jet is holonomic. Equals -morphism.
[[nodiscard]] Tensor<double> holonomy_defect(const FibrationSpec& spec, const SecondJetPoint& p);

// A candidate section x -> (u(x), y(x)).
struct SectionFieldExpr {
    std::vector<Expr> u;  // nu functions of x
    Tensor<Expr> y;       // [alpha][a], functions of x
};

[[nodiscard]] Tensor<double> section_admissibility_residual(const FibrationSpec& spec, const SectionFieldExpr& s,
                                                            const std::vector<double>& x);
[[nodiscard]] Tensor<double> section_morphism_residual(const FibrationSpec& spec, const SectionFieldExpr& s,
                                                       const std::vector<double>& x);

// Complete lift of a vertical section sigma = sigma^alpha(x, u) e_alpha (length k)
// as a section of the prolongation (length r + k + k*r).
[[nodiscard]] SectionExpr complete_lift(const FibrationSpec& spec, const std::vector<Expr>& sigma);

}  // namespace liefield
