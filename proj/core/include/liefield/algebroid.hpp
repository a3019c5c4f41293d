#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "liefield/anchored_basis.hpp"

namespace liefield {

struct FibrationDims {
    std::size_t nx = 0;  // base coordinates x^i
    std::size_t nu = 0;  // fibre coordinates u^A
    std::size_t r = 0;   // rank of F (indices a, b, c)
    std::size_t k = 0;   // rank of the vertical part K (indices alpha, beta, gamma)

    friend bool operator==(const FibrationDims&, const FibrationDims&) = default;
};

// Variable naming used everywhere (all indices 1-based in names):
//   x{i}, u{A}, y{alpha}_{a}, yd{alpha}_{a}_{b}, mu{alpha}_{a}, mu0,
//   ud{A}_{i}, mud{alpha}_{a}_{i}
std::string x_name(std::size_t i);
std::string u_name(std::size_t A);
std::string y_name(std::size_t alpha, std::size_t a);
std::string yd_name(std::size_t alpha, std::size_t a, std::size_t b);
std::string mu_name(std::size_t alpha, std::size_t a);
std::string ud_name(std::size_t A, std::size_t i);
std::string mud_name(std::size_t alpha, std::size_t a, std::size_t i);

// Local presentation of a Lie algebroid fibration E -> F over pi: M -> N.
// Bracket arrays are indexed [lower][lower][upper]:
//   C_bas(a, b, c)         = C^c_{ab}
//   C_mix0(a, b, alpha)    = C^alpha_{ab}
//   C_mix1(a, beta, alpha) = C^alpha_{a beta}
//   C_vert(beta, gamma, alpha) = C^alpha_{beta gamma}
// C^a_{b gamma} and C^a_{beta gamma} vanish; C^alpha_{beta c} = -C^alpha_{c beta}.
struct FibrationSpec {
    std::string name;
    FibrationDims dims;
    Tensor<Expr> rho_F;       // r x nx, functions of x
    Tensor<Expr> rho_Ea;      // r x nu
    Tensor<Expr> rho_Ealpha;  // k x nu
    Tensor<Expr> C_bas;       // r x r x r, functions of x
    Tensor<Expr> C_mix0;      // r x r x k
    Tensor<Expr> C_mix1;      // r x k x k
    Tensor<Expr> C_vert;      // k x k x k

    FibrationSpec() = default;
    explicit FibrationSpec(FibrationDims d);  // all arrays zero

    [[nodiscard]] std::vector<std::string> x_names() const;
    [[nodiscard]] std::vector<std::string> u_names() const;
    [[nodiscard]] std::vector<std::string> base_coords() const;  // x then u

    // Shape and variable-dependence invariants; throws ShapeError.
    void check() const;

    // Total-basis views, index A in [0, r+k): a = A for A < r, alpha = A - r otherwise.
    [[nodiscard]] Expr total_C(std::size_t A, std::size_t B, std::size_t D) const;
    [[nodiscard]] Expr total_anchor(std::size_t A, std::size_t j) const;  // j over x then u
};

// The whole of E as a single anchored basis over M.
[[nodiscard]] AnchoredBasisSpec total_basis(const FibrationSpec& spec);

struct BasePoint {
    std::vector<double> x;
    std::vector<double> u;
    [[nodiscard]] std::vector<double> coords() const;
};

[[nodiscard]] StructureResiduals structure_residuals(const FibrationSpec& spec, const BasePoint& p);

// Per-variable sampling interval; variables without an entry use [-1, 1].
class SampleBox {
public:
    SampleBox() = default;
    void set(const std::string& var, double lo, double hi);
    [[nodiscard]] std::pair<double, double> range(const std::string& var) const;
    [[nodiscard]] const std::map<std::string, std::pair<double, double>>& entries() const noexcept { return ranges_; }
    [[nodiscard]] std::vector<double> sample(const std::vector<std::string>& vars, std::mt19937_64& rng) const;

private:
    std::map<std::string, std::pair<double, double>> ranges_;
};

struct ValidationOptions {
    std::size_t points = 50;
    std::uint64_t seed = 0;
    double tol = 1e-8;
    SampleBox box;
};

struct ValidationReport {
    double max_anchor = 0.0;
    double max_jacobi = 0.0;
    double max_antisym = 0.0;
    std::size_t points = 0;
    double tol = 0.0;
    [[nodiscard]] bool pass() const { return max_anchor < tol && max_jacobi < tol && max_antisym < tol; }
};

[[nodiscard]] ValidationReport validate(const FibrationSpec& spec, const ValidationOptions& opts = {});
[[nodiscard]] ValidationReport validate(const AnchoredBasisSpec& spec, const ValidationOptions& opts = {});

[[nodiscard]] SectionExpr bracket(const FibrationSpec& spec, const SectionExpr& s, const SectionExpr& t);

// rho(s) at p as components on (x, u).
[[nodiscard]] std::vector<double> anchor_apply(const FibrationSpec& spec, const std::vector<double>& s, const BasePoint& p);

}  // namespace liefield
