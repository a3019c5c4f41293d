#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "liefield/hamiltonian.hpp"

namespace liefield {

struct Axis {
    double min = 0.0;
    double max = 1.0;
    std::size_t count = 3;
    [[nodiscard]] double h() const { return (max - min) / static_cast<double>(count - 1); }
};

// Regular tensor-product grid; node index is row-major with axis 0 slowest.
class Grid {
public:
    Grid() = default;
    explicit Grid(std::vector<Axis> axes);  // throws ShapeError on count < 3 or empty extent

    [[nodiscard]] const std::vector<Axis>& axes() const noexcept { return axes_; }
    [[nodiscard]] std::size_t ndim() const noexcept { return axes_.size(); }
    [[nodiscard]] std::size_t nodes() const noexcept { return nodes_; }
    [[nodiscard]] std::size_t stride(std::size_t axis) const { return strides_.at(axis); }
    [[nodiscard]] std::vector<std::size_t> multi_index(std::size_t node) const;
    [[nodiscard]] std::vector<double> coords(std::size_t node) const;
    [[nodiscard]] bool interior(std::size_t node) const;

private:
    std::vector<Axis> axes_;
    std::vector<std::size_t> strides_;
    std::size_t nodes_ = 0;
};

enum class FieldSide { Lagrangian, Hamiltonian };

// Nodal values of (u, y) or (u, mu). Fibre arrays are flattened alpha-major: index alpha * r + a.
struct FieldConfiguration {
    Grid grid;
    FieldSide side = FieldSide::Lagrangian;
    std::vector<std::vector<double>> u;      // nu arrays
    std::vector<std::vector<double>> fibre;  // k*r arrays, y or mu

    // Shapes against the grid and dims, finite values; throws ShapeError.
    void check(const FibrationDims& d) const;
    [[nodiscard]] JetPoint jet(std::size_t node, const FibrationDims& d) const;
};

// Samples a symbolic section (u(x), y(x)) on the grid.
[[nodiscard]] FieldConfiguration sample_field(const Grid& grid, const FibrationDims& d, const SectionFieldExpr& s,
                                              FieldSide side = FieldSide::Lagrangian);

// Central differences inside, one-sided 3-point stencils on the boundary; O(h^2) throughout.
[[nodiscard]] std::vector<double> fd_derivative(const Grid& grid, std::span<const double> f, std::size_t axis);

// Per-node second jets with y2[beta][b][a] = rho^i_a d(y^beta_b)/dx^i.
[[nodiscard]] std::vector<SecondJetPoint> prolong_field(const FibrationSpec& spec, const FieldConfiguration& field);

struct ResidualBlock {
    std::string name;
    double max = 0.0;
    double rms = 0.0;
    std::vector<double> per_node;  // max over the block's components, every node
};

struct ResidualReport {
    std::vector<ResidualBlock> blocks;
    double tol = 0.0;
    std::size_t nodes_used = 0;
    [[nodiscard]] bool pass() const;
    [[nodiscard]] const ResidualBlock& block(const std::string& name) const;
};

struct ResidualOptions {
    double tol = 1e-8;
    bool include_boundary = false;
    unsigned threads = 0;  // 0: hardware concurrency
};

// Lagrangian side: admissibility / morphism / el. Hamiltonian side: hamilton_i / hamilton_ii / hamilton_iii.
[[nodiscard]] ResidualReport residual_report(const ModelSpec& model, const FieldConfiguration& field,
                                             const ResidualOptions& opts = {});

struct EquivalenceResult {
    FieldConfiguration hamiltonian_field;  // mu = dL/dy at every node
    ResidualReport lagrangian;
    ResidualReport hamiltonian;
};

// Legendre-maps a Lagrangian-side field and evaluates Hamilton's equations on the image.
// Uses the model's H when present, otherwise H is taken implicitly from L.
[[nodiscard]] EquivalenceResult equivalence_check(const ModelSpec& model, const FieldConfiguration& field,
                                                  const ResidualOptions& opts = {});

// Samples of a mechanics trajectory. Columns: t, u..., y..., energy, currents...
struct Trajectory {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::size_t nu = 0;
    std::size_t k = 0;

    [[nodiscard]] std::vector<double> column(const std::string& name) const;
    void write_csv(std::ostream& os) const;
};

struct IntegrateOptions {
    double t0 = 0.0;
    double t1 = 10.0;
    double dt = 1e-3;
    std::size_t record_every = 1;
    double regular_tol = 1e-12;
};

// RK4 for r = 1, nx = 1 with ydot solved from the EL equation through the fibre Hessian.
// Throws SingularHessian (message carries the time) or std::runtime_error on a non-finite state.
[[nodiscard]] Trajectory integrate_1d(const ModelSpec& model, const std::vector<double>& u0,
                                      const std::vector<double>& y0, const IntegrateOptions& opts = {});

// One node per row: x..., u..., y.../mu..., then one column per residual block.
void write_field_csv(std::ostream& os, const FibrationDims& d, const FieldConfiguration& field,
                     const ResidualReport* report = nullptr);

}  // namespace liefield
