#pragma once

#include <map>
#include <optional>
#include <string>

#include "liefield/algebroid.hpp"

namespace liefield {

struct Tolerances {
    double validate = 1e-10;
    double residual = 1e-8;
};

// A fibration together with a Lagrangian L(x, u, y) and/or Hamiltonian H(x, u, mu).
struct ModelSpec {
    FibrationSpec fib;
    std::optional<Expr> lagrangian;
    std::optional<Expr> hamiltonian;
    SampleBox box;
    Tolerances tolerances;
    std::map<std::string, Expr> currents;  // named conserved quantities in (x, u, y)
    std::string description;

    [[nodiscard]] const FibrationDims& dims() const noexcept { return fib.dims; }
    [[nodiscard]] const Expr& L() const;  // throws std::logic_error when absent
    [[nodiscard]] const Expr& H() const;

    // Fibration invariants plus variable checks on L and H; throws ShapeError.
    void check() const;
};

class MissingFunction : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace liefield
