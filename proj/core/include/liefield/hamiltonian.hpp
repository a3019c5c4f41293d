#pragma once

#include <stdexcept>
#include <vector>

#include "liefield/lagrangian.hpp"

namespace liefield {

class SingularHessian : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct MomentumPoint {
    std::vector<double> x;
    std::vector<double> u;
    Tensor<double> mu;  // [alpha][a] = mu^a_alpha
    double mu0 = 0.0;
};

struct NewtonOptions {
    double tol = 1e-12;          // on max|dL/dy - mu|, relative to max(1, max|mu|)
    int max_iter = 100;
    double min_step = 1.0 / 1048576.0;  // 2^-20
    double regular_tol = 1e-12;
};

// Compiles dL/dy, the fibre Hessian and L once for repeated transforms.
class LegendreTransform {
public:
    explicit LegendreTransform(const ModelSpec& model, NewtonOptions opts = {});

    [[nodiscard]] MomentumPoint forward(const JetPoint& p) const;
    // Damped Newton on dL/dy(x, u, y) = mu. The guess defaults to y = 0.
    [[nodiscard]] JetPoint inverse(const MomentumPoint& q, const Tensor<double>* guess = nullptr) const;
    // <mu, y> - L at y = inverse(q)
    [[nodiscard]] double hamiltonian(const MomentumPoint& q, const Tensor<double>* guess = nullptr) const;

    [[nodiscard]] double lagrangian(const JetPoint& p) const;
    [[nodiscard]] Tensor<double> momentum(const JetPoint& p) const;
    [[nodiscard]] Eigen::MatrixXd hessian(const JetPoint& p) const;
    [[nodiscard]] std::vector<double> dL_du(const JetPoint& p) const;

private:
    FibrationDims dims_;
    NewtonOptions opts_;
    VarLayout layout_;
    CompiledExpr L_;
    std::vector<CompiledExpr> P_, hess_, Lu_;
};

[[nodiscard]] MomentumPoint legendre(const ModelSpec& model, const JetPoint& p);
[[nodiscard]] JetPoint legendre_inverse(const ModelSpec& model, const MomentumPoint& q, const NewtonOptions& opts = {});
[[nodiscard]] double hamiltonian_from_L(const ModelSpec& model, const MomentumPoint& q);

struct CanonicalForms {
    AlgebroidForm theta;  // mu^a_alpha X^alpha ^ omega_a - H omega
    AlgebroidForm omega;  // -d theta
};
[[nodiscard]] CanonicalForms canonical_forms(const ModelSpec& model, const ProlongationSpec& dual);

// Theta = mu0 omega + mu^a_alpha X^alpha ^ omega_a on the extended dual prolongation.
[[nodiscard]] AlgebroidForm extended_canonical_form(const ProlongationSpec& extended);
// Extended Legendre map from the prolongation of J(pi) into the extended dual prolongation.
[[nodiscard]] BundleMapExpr extended_legendre_map(const ModelSpec& model, const ProlongationSpec& prol,
                                                  const ProlongationSpec& extended);

template <class T>
struct HamiltonSystem {
    Tensor<T> admissibility;  // [A][a]
    Tensor<T> compatibility;  // [alpha][b][c], zero on the diagonal
    Tensor<T> dynamics;       // [alpha]
};

// Hamilton's equations as residuals in x, u, mu, ud{A}_{i}, mud{alpha}_{a}_{i}.
[[nodiscard]] HamiltonSystem<Expr> hamilton_symbolic(const ModelSpec& model);
[[nodiscard]] VarLayout hamilton_layout(const FibrationDims& d);

struct HamiltonPoint {
    std::vector<double> x;
    std::vector<double> u;
    Tensor<double> mu;   // [alpha][a]
    Tensor<double> ud;   // [A][i]
    Tensor<double> mud;  // [alpha][a][i]
};
[[nodiscard]] std::vector<double> hamilton_values(const HamiltonPoint& p);

[[nodiscard]] HamiltonSystem<double> hamilton_residual(const ModelSpec& model, const HamiltonPoint& p);

// H entering only through its derivatives at the point, e.g. when H is defined
// implicitly by the Legendre transform.
struct HamiltonDerivatives {
    std::vector<double> H_u;  // [A]
    Tensor<double> H_mu;      // [alpha][a]
    Tensor<double> DH_mu;     // [alpha][a][b]: derivative of H_mu^alpha_a along the field in direction b
};
[[nodiscard]] HamiltonSystem<double> hamilton_residual(const FibrationSpec& spec, const HamiltonPoint& p,
                                                       const HamiltonDerivatives& h);

// Reusable numeric evaluator behind the overload above.
class HamiltonNumeric {
public:
    explicit HamiltonNumeric(const FibrationSpec& spec);
    [[nodiscard]] HamiltonSystem<double> operator()(const HamiltonPoint& p, const HamiltonDerivatives& h) const;

private:
    FibrationDims dims_;
    VarLayout layout_;
    std::vector<CompiledExpr> rho_F_, rho_Ea_, rho_Ealpha_, C_bas_, C_mix0_, C_mix1_, C_vert_;
};

}  // namespace liefield
