#pragma once

#include <Eigen/Dense>
#include <vector>

#include "liefield/jet.hpp"
#include "liefield/model.hpp"

namespace liefield {

// omega = X^1 ^ ... ^ X^r on the prolongation, and omega_a = i_{X_a} omega.
[[nodiscard]] AlgebroidForm volume_form(const ProlongationSpec& prol);
[[nodiscard]] AlgebroidForm volume_form_a(const ProlongationSpec& prol, std::size_t a);

// S^a = theta^alpha (x) V^a_alpha, stored per a as (theta^alpha, index of V^a_alpha).
struct VerticalEndomorphism {
    std::vector<std::vector<std::pair<AlgebroidForm, std::size_t>>> parts;  // [a][alpha]
    [[nodiscard]] SectionExpr apply(std::size_t a, const SectionExpr& v) const;
};
[[nodiscard]] VerticalEndomorphism vertical_endomorphism(const FibrationSpec& spec, const ProlongationSpec& prol);

// S_omega(beta) = beta(V^a_alpha) theta^alpha ^ omega_a for a one-form beta.
[[nodiscard]] AlgebroidForm s_omega(const FibrationSpec& spec, const ProlongationSpec& prol, const AlgebroidForm& beta);

// Theta_L = S_omega(dL) + L omega and Omega_L = -d Theta_L.
[[nodiscard]] AlgebroidForm cartan_form(const ModelSpec& model, const ProlongationSpec& prol);
[[nodiscard]] AlgebroidForm multisymplectic_form(const ModelSpec& model, const ProlongationSpec& prol);

// Euler-Lagrange residuals in x, u, y, yd (length k):
//   (dL/dy^alpha_a)'_{|a} + dL/dy^alpha_a C^b_{ba} - dL/dy^gamma_a Z^gamma_{a alpha} - dL/du^A rho^A_alpha
[[nodiscard]] std::vector<Expr> el_symbolic(const ModelSpec& model);

// The same equations read off Omega_L: Omega_L(X_alpha, H_1, ..., H_r) with the
// horizontal lift H_a = X_a + y^beta_a X_beta + yd{beta}_{b}_{a} V^b_beta.
[[nodiscard]] std::vector<Expr> el_from_multisymplectic(const ModelSpec& model);

[[nodiscard]] std::vector<double> el_residual(const ModelSpec& model, const SecondJetPoint& p);

// d^2 L / dy^alpha_a dy^beta_b, flattened with index alpha * r + a.
[[nodiscard]] Tensor<Expr> hessian_symbolic(const ModelSpec& model);
[[nodiscard]] Eigen::MatrixXd hessian(const ModelSpec& model, const JetPoint& p);

// Regular when |det| exceeds rel_tol times max|H_ij|^n.
[[nodiscard]] bool is_regular(const Eigen::MatrixXd& h, double rel_tol = 1e-12);

// rho^1(sigma^(1)) L for a vertical section sigma (length k).
[[nodiscard]] Expr invariance_defect(const ModelSpec& model, const std::vector<Expr>& sigma);
// i_{sigma^(1)} Theta_L
[[nodiscard]] AlgebroidForm noether_current(const ModelSpec& model, const std::vector<Expr>& sigma);

}  // namespace liefield
