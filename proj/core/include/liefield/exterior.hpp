#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "liefield/anchored_basis.hpp"

namespace liefield {

// Strictly increasing basis indices of a wedge monomial e^{i1} ^ ... ^ e^{ip}.
using MultiIndex = std::vector<std::uint16_t>;

// Sparse form over a dual basis {e^A}; zero coefficients are never stored.
class AlgebroidForm {
public:
    AlgebroidForm() = default;
    AlgebroidForm(std::size_t rank, std::size_t degree) : rank_(rank), degree_(degree) {}

    static AlgebroidForm function(std::size_t rank, const Expr& f);
    static AlgebroidForm basis(std::size_t rank, std::size_t index);  // e^index
    static AlgebroidForm one_form(std::size_t rank, const std::vector<Expr>& coeffs);

    [[nodiscard]] std::size_t rank() const noexcept { return rank_; }
    [[nodiscard]] std::size_t degree() const noexcept { return degree_; }
    [[nodiscard]] const std::map<MultiIndex, Expr>& terms() const noexcept { return terms_; }
    [[nodiscard]] bool is_zero() const noexcept { return terms_.empty(); }
    [[nodiscard]] Expr coefficient(const MultiIndex& idx) const;

    // Adds coeff * e^{idx[0]} ^ ... ; idx may be unsorted (sign applied) or repeat (ignored).
    void add(const std::vector<std::uint16_t>& idx, const Expr& coeff);

    AlgebroidForm& operator+=(const AlgebroidForm& o);
    AlgebroidForm& operator-=(const AlgebroidForm& o);
    friend AlgebroidForm operator+(AlgebroidForm a, const AlgebroidForm& b) { return a += b; }
    friend AlgebroidForm operator-(AlgebroidForm a, const AlgebroidForm& b) { return a -= b; }
    friend AlgebroidForm operator*(const Expr& f, const AlgebroidForm& w);
    AlgebroidForm operator-() const;

    [[nodiscard]] AlgebroidForm map_coefficients(const std::function<Expr(const Expr&)>& fn) const;

private:
    std::size_t rank_ = 0;
    std::size_t degree_ = 0;
    std::map<MultiIndex, Expr> terms_;
};

// Sign of the permutation sorting idx, 0 when an index repeats. Sorts in place.
int sort_with_sign(std::vector<std::uint16_t>& idx);

[[nodiscard]] AlgebroidForm wedge(const AlgebroidForm& a, const AlgebroidForm& b);
[[nodiscard]] AlgebroidForm differential(const AnchoredBasisSpec& spec, const AlgebroidForm& w);
[[nodiscard]] AlgebroidForm contraction(const SectionExpr& s, const AlgebroidForm& w);
[[nodiscard]] AlgebroidForm lie_derivative(const AnchoredBasisSpec& spec, const SectionExpr& s, const AlgebroidForm& w);

// w(v_1, ..., v_p) with symbolic vectors.
[[nodiscard]] Expr apply(const AlgebroidForm& w, const std::vector<SectionExpr>& vectors);

// Largest |coefficient| at a point given in the layout's order.
[[nodiscard]] double max_abs_coefficient(const AlgebroidForm& w, const VarLayout& layout, std::span<const double> point);

// Local bundle map Phi between anchored bases over coordinate patches.
//   base(i)           = phi^i, target coordinate i as a function of source coordinates
//   fiber(beta, alpha) = phi^beta_alpha, so Phi^* e'^beta = phi^beta_alpha e^alpha
struct BundleMapExpr {
    std::vector<Expr> base;
    Tensor<Expr> fiber;
};

[[nodiscard]] AlgebroidForm pullback(const BundleMapExpr& phi, const AnchoredBasisSpec& target, const AlgebroidForm& w);

// [alpha][i]: rho^j_alpha d phi^i/dx^j - rho'^i_beta(phi) phi^beta_alpha
[[nodiscard]] Tensor<Expr> admissibility_residual(const BundleMapExpr& phi, const AnchoredBasisSpec& src,
                                                  const AnchoredBasisSpec& tgt);
// [beta][alpha][delta]: (rho_alpha phi^beta_delta - rho_delta phi^beta_alpha)
//   + C'^beta_{theta sigma}(phi) phi^theta_alpha phi^sigma_delta - phi^beta_gamma C^gamma_{alpha delta}
[[nodiscard]] Tensor<Expr> morphism_residual(const BundleMapExpr& phi, const AnchoredBasisSpec& src,
                                             const AnchoredBasisSpec& tgt);

[[nodiscard]] Tensor<double> evaluate(const Tensor<Expr>& t, const VarLayout& layout, std::span<const double> point);

}  // namespace liefield
