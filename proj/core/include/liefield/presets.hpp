#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "liefield/model.hpp"

namespace liefield {

// A named expression in (x, u, y, yd) that must vanish identically.
struct Identity {
    std::string name;
    Expr residual;
};

struct Preset {
    std::string name;
    ModelSpec model;
    std::string doc;
    std::vector<Identity> identities;
};

class PresetError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// E = TM over N = R^nx, fibre R^nu, L = 1/2 |y|^2 - V.
// With gamma ([A][i], functions of x and u) the basis is e_i = d/dx^i + gamma^A_i d/du^A, e_A = d/du^A.
[[nodiscard]] Preset preset_standard(std::size_t nx, std::size_t nu, const Expr& potential = Expr(0),
                                     const std::optional<Tensor<Expr>>& gamma = std::nullopt);

// Euler equations of a free rigid body: so(3) over a point, time as the single base direction.
[[nodiscard]] Preset preset_so3(double I1, double I2, double I3);

// Poisson sigma model on R^2 with target Poisson tensor lambda ([J][K], functions of u).
[[nodiscard]] Preset preset_poisson_sigma(const Tensor<Expr>& lambda);

// Atiyah algebroid of a trivial principal bundle over R^nx with structure constants c
// ([beta][gamma][alpha] = c^alpha_{beta gamma}), local connection gamma ([alpha][i], functions of x)
// and curvature omega ([alpha][i][j]).
[[nodiscard]] Preset preset_atiyah(const Tensor<Expr>& c, const Tensor<Expr>& gamma, const Tensor<Expr>& omega,
                                   const Expr& lagrangian);

// Curvature that makes the Atiyah bracket satisfy Jacobi for the given connection.
[[nodiscard]] Tensor<Expr> atiyah_curvature(const Tensor<Expr>& c, const Tensor<Expr>& gamma, std::size_t nx);

[[nodiscard]] Tensor<Expr> so3_structure_constants();

// Built-in registry.
[[nodiscard]] std::vector<std::string> preset_names();
[[nodiscard]] Preset make_preset(const std::string& name);  // throws PresetError for unknown names

}  // namespace liefield
