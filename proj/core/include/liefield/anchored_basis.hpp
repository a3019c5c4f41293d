#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "liefield/compiled.hpp"
#include "liefield/expr.hpp"
#include "liefield/tensor.hpp"

namespace liefield {

class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Section coefficients in a local basis {e_A}.
using SectionExpr = std::vector<Expr>;

// A Lie algebroid (or a candidate) presented by a local basis over coordinates.
//   anchor(A, j) = rho^j_A, the j-th component of rho(e_A)
//   C(A, B, D)   = C^D_{AB}, the e_D coefficient of [e_A, e_B]
struct AnchoredBasisSpec {
    std::vector<std::string> coords;
    std::size_t rank = 0;
    Tensor<Expr> anchor;
    Tensor<Expr> C;

    AnchoredBasisSpec() = default;
    AnchoredBasisSpec(std::vector<std::string> coordinates, std::size_t basis_rank);

    [[nodiscard]] std::size_t ncoords() const noexcept { return coords.size(); }
    [[nodiscard]] VarLayout layout() const { return VarLayout(coords); }
    void check() const;
};

// rho(e_A) f
[[nodiscard]] Expr anchor_derivative(const AnchoredBasisSpec& spec, std::size_t A, const Expr& f);
// rho(s) f
[[nodiscard]] Expr anchor_derivative(const AnchoredBasisSpec& spec, const SectionExpr& s, const Expr& f);
// [s, t]^D = s^A t^B C^D_{AB} + rho(s) t^D - rho(t) s^D
[[nodiscard]] SectionExpr bracket(const AnchoredBasisSpec& spec, const SectionExpr& s, const SectionExpr& t);

struct StructureResiduals {
    Tensor<double> anchor;    // [A][B][i]
    Tensor<double> jacobi;    // [A][B][C][mu]
    Tensor<double> antisym;   // [A][B][D] = C^D_{AB} + C^D_{BA}

    [[nodiscard]] double max_anchor() const;
    [[nodiscard]] double max_jacobi() const;
    [[nodiscard]] double max_antisym() const;
};

// Compiles rho, C and their first derivatives once; evaluates the structure
// equations numerically at any point of the coordinate domain.
class StructureChecker {
public:
    explicit StructureChecker(const AnchoredBasisSpec& spec);
    [[nodiscard]] StructureResiduals at(std::span<const double> point) const;

private:
    std::size_t rank_;
    std::size_t n_;
    std::vector<CompiledExpr> rho_, drho_, c_, dc_;
};

}  // namespace liefield
