#pragma once

#include <string>
#include <vector>

#include "liefield/hamiltonian.hpp"

namespace liefield {

// A named residual; the field equation is residual = 0.
struct Equation {
    std::string name;  // e.g. "el 2", "morphism 1 1 2", "hamilton_ii 3 1 2"
    Expr residual;
};

// Admissibility [A][a], morphism [alpha][b][c] for b < c, then EL [alpha]. Throws MissingFunction without L.
[[nodiscard]] std::vector<Equation> lagrangian_equations(const ModelSpec& model);
// Hamilton (i) [A][a], (ii) [alpha][b][c] for b < c, (iii) [alpha]. Throws MissingFunction without H.
[[nodiscard]] std::vector<Equation> hamilton_equations(const ModelSpec& model);

// One "name = expression" line per equation, simplified and printed canonically.
[[nodiscard]] std::string format_equations(const std::vector<Equation>& eqs, PrintStyle style = PrintStyle::Text);

// x1 -> x^{1}, y2_1 -> y^{2}_{1}, yd2_1_3 -> y^{2}_{1;3}, ud1_2 -> u^{1}_{,2}, mu2_1 -> \mu_{2}^{1}, ...
[[nodiscard]] std::string latex_name(const std::string& var);

}  // namespace liefield
