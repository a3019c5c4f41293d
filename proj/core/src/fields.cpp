#include "liefield/fields.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <mutex>
#include <thread>

namespace liefield {

namespace {

template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, n / 256)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex m;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) body(i);
            } catch (...) {
                std::lock_guard lock(m);
                if (!err) err = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

std::vector<CompiledExpr> compile_tensor(const Tensor<Expr>& t, const VarLayout& lay) {
    std::vector<CompiledExpr> out;
    out.reserve(t.size());
    for (const auto& e : t) out.emplace_back(e, lay);
    return out;
}

// Evaluates component blocks node by node and reduces them to a report.
class BlockAccumulator {
public:
    BlockAccumulator(std::vector<std::string> names, std::vector<std::size_t> sizes, std::size_t nodes)
        : names_(std::move(names)), sizes_(std::move(sizes)), nodes_(nodes) {
        for (std::size_t b = 0; b < names_.size(); ++b) values_.emplace_back(nodes_ * sizes_[b], 0.0);
    }
    double* slot(std::size_t block, std::size_t node) { return values_[block].data() + node * sizes_[block]; }

    ResidualReport reduce(const Grid& grid, const ResidualOptions& opts) const {
        ResidualReport rep;
        rep.tol = opts.tol;
        for (std::size_t b = 0; b < names_.size(); ++b) {
            ResidualBlock blk{names_[b], 0.0, 0.0, std::vector<double>(nodes_, 0.0)};
            double sumsq = 0.0;
            std::size_t count = 0, used = 0;
            for (std::size_t n = 0; n < nodes_; ++n) {
                double m = 0.0;
                for (std::size_t c = 0; c < sizes_[b]; ++c) m = std::max(m, std::abs(values_[b][n * sizes_[b] + c]));
                blk.per_node[n] = m;
                if (!opts.include_boundary && !grid.interior(n)) continue;
                ++used;
                blk.max = std::max(blk.max, m);
                for (std::size_t c = 0; c < sizes_[b]; ++c) {
                    const double v = values_[b][n * sizes_[b] + c];
                    sumsq += v * v;
                    ++count;
                }
            }
            blk.rms = count ? std::sqrt(sumsq / static_cast<double>(count)) : 0.0;
            rep.nodes_used = used;
            rep.blocks.push_back(std::move(blk));
        }
        return rep;
    }

private:
    std::vector<std::string> names_;
    std::vector<std::size_t> sizes_;
    std::size_t nodes_;
    std::vector<std::vector<double>> values_;
};

std::vector<std::vector<double>> derivatives(const Grid& g, const std::vector<std::vector<double>>& arrays) {
    std::vector<std::vector<double>> out;  // [array * ndim + i]
    for (const auto& f : arrays)
        for (std::size_t i = 0; i < g.ndim(); ++i) out.push_back(fd_derivative(g, f, i));
    return out;
}

}  // namespace

Grid::Grid(std::vector<Axis> axes) : axes_(std::move(axes)) {
    if (axes_.empty()) throw ShapeError("grid needs at least one axis");
    strides_.assign(axes_.size(), 1);
    nodes_ = 1;
    for (std::size_t i = axes_.size(); i-- > 0;) {
        const Axis& a = axes_[i];
        if (a.count < 3) throw ShapeError("grid axis " + std::to_string(i + 1) + " needs at least 3 nodes");
        if (!(a.max > a.min)) throw ShapeError("grid axis " + std::to_string(i + 1) + " has empty extent");
        strides_[i] = nodes_;
        nodes_ *= a.count;
    }
}

std::vector<std::size_t> Grid::multi_index(std::size_t node) const {
    std::vector<std::size_t> m(axes_.size());
    for (std::size_t i = 0; i < axes_.size(); ++i) m[i] = (node / strides_[i]) % axes_[i].count;
    return m;
}

std::vector<double> Grid::coords(std::size_t node) const {
    std::vector<double> x(axes_.size());
    for (std::size_t i = 0; i < axes_.size(); ++i) {
        const std::size_t m = (node / strides_[i]) % axes_[i].count;
        x[i] = m + 1 == axes_[i].count ? axes_[i].max : axes_[i].min + static_cast<double>(m) * axes_[i].h();
    }
    return x;
}

bool Grid::interior(std::size_t node) const {
    for (std::size_t i = 0; i < axes_.size(); ++i) {
        const std::size_t m = (node / strides_[i]) % axes_[i].count;
        if (m == 0 || m + 1 == axes_[i].count) return false;
    }
    return true;
}

void FieldConfiguration::check(const FibrationDims& d) const {
    if (grid.ndim() != d.nx)
        throw ShapeError("field grid has " + std::to_string(grid.ndim()) + " axes, spec has nx = " + std::to_string(d.nx));
    if (u.size() != d.nu) throw ShapeError("field has " + std::to_string(u.size()) + " u arrays, expected " + std::to_string(d.nu));
    if (fibre.size() != d.k * d.r)
        throw ShapeError("field has " + std::to_string(fibre.size()) + " fibre arrays, expected " + std::to_string(d.k * d.r));
    const auto arr = [&](const std::vector<double>& a, const std::string& what) {
        if (a.size() != grid.nodes()) throw ShapeError(what + " has wrong length");
        for (double v : a)
            if (!std::isfinite(v)) throw ShapeError(what + " has non-finite values");
    };
    for (std::size_t A = 0; A < u.size(); ++A) arr(u[A], u_name(A));
    for (std::size_t i = 0; i < fibre.size(); ++i) {
        const std::size_t al = i / d.r, a = i % d.r;
        arr(fibre[i], side == FieldSide::Lagrangian ? y_name(al, a) : mu_name(al, a));
    }
}

JetPoint FieldConfiguration::jet(std::size_t node, const FibrationDims& d) const {
    JetPoint p{grid.coords(node), std::vector<double>(d.nu), Tensor<double>({d.k, d.r})};
    for (std::size_t A = 0; A < d.nu; ++A) p.u[A] = u[A][node];
    for (std::size_t i = 0; i < d.k * d.r; ++i) p.y.flat(i) = fibre[i][node];
    return p;
}

FieldConfiguration sample_field(const Grid& grid, const FibrationDims& d, const SectionFieldExpr& s, FieldSide side) {
    if (s.u.size() != d.nu || s.y.shape() != std::vector<std::size_t>{d.k, d.r})
        throw ShapeError("section does not match dims");
    VarLayout lay;
    for (std::size_t i = 0; i < d.nx; ++i) lay.add(x_name(i));
    const auto cu = compile_all(s.u, lay);
    const auto cy = compile_tensor(s.y, lay);
    FieldConfiguration f{grid, side, std::vector<std::vector<double>>(d.nu, std::vector<double>(grid.nodes())),
                         std::vector<std::vector<double>>(d.k * d.r, std::vector<double>(grid.nodes()))};
    for (std::size_t n = 0; n < grid.nodes(); ++n) {
        const auto x = grid.coords(n);
        for (std::size_t A = 0; A < d.nu; ++A) f.u[A][n] = cu[A](x);
        for (std::size_t i = 0; i < cy.size(); ++i) f.fibre[i][n] = cy[i](x);
    }
    return f;
}

std::vector<double> fd_derivative(const Grid& grid, std::span<const double> f, std::size_t axis) {
    if (axis >= grid.ndim()) throw ShapeError("derivative axis out of range");
    if (f.size() != grid.nodes()) throw ShapeError("array length does not match grid");
    const std::size_t s = grid.stride(axis), n = grid.axes()[axis].count;
    const double inv2h = 1.0 / (2.0 * grid.axes()[axis].h());
    std::vector<double> out(f.size());
    for (std::size_t node = 0; node < f.size(); ++node) {
        const std::size_t m = (node / s) % n;
        if (m == 0)
            out[node] = (-3.0 * f[node] + 4.0 * f[node + s] - f[node + 2 * s]) * inv2h;
        else if (m + 1 == n)
            out[node] = (3.0 * f[node] - 4.0 * f[node - s] + f[node - 2 * s]) * inv2h;
        else
            out[node] = (f[node + s] - f[node - s]) * inv2h;
    }
    return out;
}

std::vector<SecondJetPoint> prolong_field(const FibrationSpec& spec, const FieldConfiguration& field) {
    const FibrationDims& d = spec.dims;
    field.check(d);
    if (field.side != FieldSide::Lagrangian) throw ShapeError("prolongation needs a Lagrangian-side field");
    const VarLayout lay(spec.base_coords());
    const auto rho = compile_tensor(spec.rho_F, lay);
    const auto dy = derivatives(field.grid, field.fibre);
    std::vector<SecondJetPoint> out(field.grid.nodes());
    for (std::size_t n = 0; n < out.size(); ++n) {
        SecondJetPoint& p = out[n];
        p.j1 = field.jet(n, d);
        p.y2 = Tensor<double>({d.k, d.r, d.r});
        std::vector<double> base = p.j1.x;
        base.insert(base.end(), p.j1.u.begin(), p.j1.u.end());
        std::vector<double> rv(rho.size());
        for (std::size_t i = 0; i < rho.size(); ++i) rv[i] = rho[i](base);
        for (std::size_t be = 0; be < d.k; ++be)
            for (std::size_t b = 0; b < d.r; ++b)
                for (std::size_t a = 0; a < d.r; ++a) {
                    double v = 0.0;
                    for (std::size_t i = 0; i < d.nx; ++i) v += rv[a * d.nx + i] * dy[(be * d.r + b) * d.nx + i][n];
                    p.y2(be, b, a) = v;
                }
    }
    return out;
}

bool ResidualReport::pass() const {
    return std::all_of(blocks.begin(), blocks.end(), [&](const ResidualBlock& b) { return b.max < tol; });
}

const ResidualBlock& ResidualReport::block(const std::string& name) const {
    for (const auto& b : blocks)
        if (b.name == name) return b;
    throw std::out_of_range("no residual block '" + name + "'");
}

namespace {

ResidualReport lagrangian_report(const ModelSpec& model, const FieldConfiguration& field, const ResidualOptions& opts) {
    const FibrationSpec& spec = model.fib;
    const FibrationDims& d = spec.dims;
    VarLayout lay = jet_layout(d, true);
    for (std::size_t A = 0; A < d.nu; ++A)
        for (std::size_t i = 0; i < d.nx; ++i) lay.add(ud_name(A, i));
    const auto adm = compile_tensor(admissibility_symbolic(spec), lay);
    const auto mor = compile_tensor(morphism_symbolic(spec), lay);
    const auto el = compile_all(el_symbolic(model), lay);

    const auto jets = prolong_field(spec, field);
    const auto du = derivatives(field.grid, field.u);
    const std::size_t N = field.grid.nodes();
    BlockAccumulator acc({"admissibility", "morphism", "el"}, {adm.size(), mor.size(), el.size()}, N);
    parallel_for(N, opts.threads, [&](std::size_t n) {
        std::vector<double> v = jet_values(jets[n]);
        for (std::size_t j = 0; j < d.nu * d.nx; ++j) v.push_back(du[j][n]);
        double* a = acc.slot(0, n);
        for (std::size_t i = 0; i < adm.size(); ++i) a[i] = adm[i](v);
        double* m = acc.slot(1, n);
        for (std::size_t i = 0; i < mor.size(); ++i) m[i] = mor[i](v);
        double* e = acc.slot(2, n);
        for (std::size_t i = 0; i < el.size(); ++i) e[i] = el[i](v);
    });
    return acc.reduce(field.grid, opts);
}

void fill_hamilton(BlockAccumulator& acc, std::size_t n, const HamiltonSystem<double>& s) {
    std::copy(s.admissibility.begin(), s.admissibility.end(), acc.slot(0, n));
    std::copy(s.compatibility.begin(), s.compatibility.end(), acc.slot(1, n));
    std::copy(s.dynamics.begin(), s.dynamics.end(), acc.slot(2, n));
}

HamiltonPoint hamilton_point(const FieldConfiguration& field, const FibrationDims& d, std::size_t n,
                             const std::vector<std::vector<double>>& du, const std::vector<std::vector<double>>& dmu) {
    HamiltonPoint p{field.grid.coords(n), std::vector<double>(d.nu), Tensor<double>({d.k, d.r}),
                    Tensor<double>({d.nu, d.nx}), Tensor<double>({d.k, d.r, d.nx})};
    for (std::size_t A = 0; A < d.nu; ++A) p.u[A] = field.u[A][n];
    for (std::size_t i = 0; i < d.k * d.r; ++i) p.mu.flat(i) = field.fibre[i][n];
    for (std::size_t j = 0; j < d.nu * d.nx; ++j) p.ud.flat(j) = du[j][n];
    for (std::size_t j = 0; j < d.k * d.r * d.nx; ++j) p.mud.flat(j) = dmu[j][n];
    return p;
}

ResidualReport hamiltonian_report(const ModelSpec& model, const FieldConfiguration& field, const ResidualOptions& opts) {
    const FibrationDims& d = model.dims();
    const HamiltonSystem<Expr> sys = hamilton_symbolic(model);
    const VarLayout lay = hamilton_layout(d);
    const auto c1 = compile_tensor(sys.admissibility, lay);
    const auto c2 = compile_tensor(sys.compatibility, lay);
    const auto c3 = compile_tensor(sys.dynamics, lay);
    const auto du = derivatives(field.grid, field.u);
    const auto dmu = derivatives(field.grid, field.fibre);
    const std::size_t N = field.grid.nodes();
    BlockAccumulator acc({"hamilton_i", "hamilton_ii", "hamilton_iii"}, {c1.size(), c2.size(), c3.size()}, N);
    parallel_for(N, opts.threads, [&](std::size_t n) {
        const auto v = hamilton_values(hamilton_point(field, d, n, du, dmu));
        HamiltonSystem<double> s{Tensor<double>(sys.admissibility.shape()), Tensor<double>(sys.compatibility.shape()),
                                 Tensor<double>(sys.dynamics.shape())};
        for (std::size_t i = 0; i < c1.size(); ++i) s.admissibility.flat(i) = c1[i](v);
        for (std::size_t i = 0; i < c2.size(); ++i) s.compatibility.flat(i) = c2[i](v);
        for (std::size_t i = 0; i < c3.size(); ++i) s.dynamics.flat(i) = c3[i](v);
        fill_hamilton(acc, n, s);
    });
    return acc.reduce(field.grid, opts);
}

}  // namespace

ResidualReport residual_report(const ModelSpec& model, const FieldConfiguration& field, const ResidualOptions& opts) {
    model.check();
    field.check(model.dims());
    return field.side == FieldSide::Lagrangian ? lagrangian_report(model, field, opts)
                                               : hamiltonian_report(model, field, opts);
}

EquivalenceResult equivalence_check(const ModelSpec& model, const FieldConfiguration& field,
                                    const ResidualOptions& opts) {
    const FibrationDims& d = model.dims();
    model.check();
    field.check(d);
    if (field.side != FieldSide::Lagrangian) throw ShapeError("equivalence check starts from a Lagrangian-side field");
    const LegendreTransform leg(model);
    EquivalenceResult res;
    res.lagrangian = residual_report(model, field, opts);

    FieldConfiguration& h = res.hamiltonian_field;
    h = field;
    h.side = FieldSide::Hamiltonian;
    const std::size_t N = field.grid.nodes();
    for (std::size_t n = 0; n < N; ++n) {
        const Tensor<double> mu = leg.momentum(field.jet(n, d));
        for (std::size_t i = 0; i < mu.size(); ++i) h.fibre[i][n] = mu.flat(i);
    }
    if (model.hamiltonian) {
        res.hamiltonian = residual_report(model, h, opts);
        return res;
    }

    // H implicit in L: dH/dmu = y, dH/du = -dL/du, and the field derivative of dH/dmu is y2.
    const HamiltonNumeric eval(model.fib);
    const auto jets = prolong_field(model.fib, field);
    const auto du = derivatives(h.grid, h.u);
    const auto dmu = derivatives(h.grid, h.fibre);
    BlockAccumulator acc({"hamilton_i", "hamilton_ii", "hamilton_iii"}, {d.nu * d.r, d.k * d.r * d.r, d.k}, N);
    parallel_for(N, opts.threads, [&](std::size_t n) {
        const HamiltonPoint p = hamilton_point(h, d, n, du, dmu);
        HamiltonDerivatives hd{leg.dL_du(jets[n].j1), jets[n].j1.y, jets[n].y2};
        for (double& v : hd.H_u) v = -v;
        fill_hamilton(acc, n, eval(p, hd));
    });
    res.hamiltonian = acc.reduce(h.grid, opts);
    return res;
}

std::vector<double> Trajectory::column(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw std::out_of_range("no trajectory column '" + name + "'");
    const auto c = static_cast<std::size_t>(it - columns.begin());
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[c]);
    return out;
}

void Trajectory::write_csv(std::ostream& os) const {
    for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
    os << '\n';
    const auto prec = os.precision(17);
    for (const auto& r : rows) {
        for (std::size_t c = 0; c < r.size(); ++c) os << (c ? "," : "") << r[c];
        os << '\n';
    }
    os.precision(prec);
}

Trajectory integrate_1d(const ModelSpec& model, const std::vector<double>& u0, const std::vector<double>& y0,
                        const IntegrateOptions& opts) {
    model.check();
    const FibrationSpec& spec = model.fib;
    const auto [nx, nu, r, k] = spec.dims;
    if (nx != 1 || r != 1) throw ShapeError("integrate_1d needs nx = 1 and r = 1");
    if (u0.size() != nu || y0.size() != k) throw ShapeError("initial state does not match dims");
    if (!(opts.dt > 0.0) || !(opts.t1 >= opts.t0)) throw std::invalid_argument("bad time span");

    const VarLayout lay = jet_layout(spec.dims, true);
    const VarLayout base(spec.base_coords());
    const std::vector<Expr> el = el_symbolic(model);
    std::vector<CompiledExpr> el_c = compile_all(el, lay), coef;
    for (std::size_t al = 0; al < k; ++al)
        for (std::size_t be = 0; be < k; ++be) coef.emplace_back(diff(el[al], yd_name(be, 0, 0)), lay);
    const CompiledExpr rho(spec.rho_F(0, 0), base);
    std::vector<CompiledExpr> rho_a, rho_al;
    for (std::size_t A = 0; A < nu; ++A) {
        rho_a.emplace_back(spec.rho_Ea(0, A), base);
        for (std::size_t al = 0; al < k; ++al) rho_al.emplace_back(spec.rho_Ealpha(al, A), base);
    }
    const Expr& L = model.L();
    Expr energy_e = -L;
    for (std::size_t al = 0; al < k; ++al) energy_e += diff(L, y_name(al, 0)) * Expr::var(y_name(al, 0));
    const CompiledExpr energy(energy_e, lay);
    std::vector<std::string> cur_names;
    std::vector<CompiledExpr> cur;
    for (const auto& [name, e] : model.currents) {
        cur_names.push_back(name);
        cur.emplace_back(e, lay);
    }

    // state: x, u..., y...; values: x, u, y, yd
    const std::size_t ns = 1 + nu + k;
    std::vector<double> vals(lay.size());
    const auto load = [&](const std::vector<double>& s) {
        std::copy(s.begin(), s.end(), vals.begin());
        std::fill(vals.begin() + static_cast<std::ptrdiff_t>(ns), vals.end(), 0.0);
    };
    const auto rhs = [&](const std::vector<double>& s) {
        load(s);
        const std::span<const double> bp(vals.data(), 1 + nu);
        const double r11 = rho(bp);
        if (r11 == 0.0 || !std::isfinite(r11)) throw SingularHessian("degenerate anchor at t = " + std::to_string(s[0]));
        std::vector<double> ds(ns);
        ds[0] = 1.0;
        for (std::size_t A = 0; A < nu; ++A) {
            double v = rho_a[A](bp);
            for (std::size_t al = 0; al < k; ++al) v += rho_al[A * k + al](bp) * s[1 + nu + al];
            ds[1 + A] = v / r11;
        }
        Eigen::MatrixXd M(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
        Eigen::VectorXd rhs0(static_cast<Eigen::Index>(k));
        for (std::size_t al = 0; al < k; ++al) {
            rhs0(static_cast<Eigen::Index>(al)) = -el_c[al](vals);
            for (std::size_t be = 0; be < k; ++be)
                M(static_cast<Eigen::Index>(al), static_cast<Eigen::Index>(be)) = coef[al * k + be](vals);
        }
        if (k > 0) {
            if (!is_regular(M, opts.regular_tol)) {
                std::ostringstream msg;
                msg << "singular Hessian at t = " << s[0];
                throw SingularHessian(msg.str());
            }
            const Eigen::VectorXd yd = M.partialPivLu().solve(rhs0);
            for (std::size_t al = 0; al < k; ++al) ds[1 + nu + al] = yd(static_cast<Eigen::Index>(al)) / r11;
        }
        return ds;
    };

    Trajectory tr;
    tr.nu = nu;
    tr.k = k;
    tr.columns.push_back("t");
    for (std::size_t A = 0; A < nu; ++A) tr.columns.push_back(u_name(A));
    for (std::size_t al = 0; al < k; ++al) tr.columns.push_back(y_name(al, 0));
    tr.columns.push_back("energy");
    for (const auto& n : cur_names) tr.columns.push_back(n);

    std::vector<double> s(ns);
    s[0] = opts.t0;
    std::copy(u0.begin(), u0.end(), s.begin() + 1);
    std::copy(y0.begin(), y0.end(), s.begin() + 1 + static_cast<std::ptrdiff_t>(nu));
    const auto record = [&] {
        load(s);
        std::vector<double> row(s);
        row.push_back(energy(vals));
        for (const auto& c : cur) row.push_back(c(vals));
        tr.rows.push_back(std::move(row));
    };

    const auto steps = static_cast<std::size_t>(std::llround((opts.t1 - opts.t0) / opts.dt));
    const double h = steps ? (opts.t1 - opts.t0) / static_cast<double>(steps) : 0.0;
    const std::size_t every = std::max<std::size_t>(1, opts.record_every);
    record();
    std::vector<double> tmp(ns);
    for (std::size_t n = 1; n <= steps; ++n) {
        const auto k1 = rhs(s);
        for (std::size_t i = 0; i < ns; ++i) tmp[i] = s[i] + 0.5 * h * k1[i];
        const auto k2 = rhs(tmp);
        for (std::size_t i = 0; i < ns; ++i) tmp[i] = s[i] + 0.5 * h * k2[i];
        const auto k3 = rhs(tmp);
        for (std::size_t i = 0; i < ns; ++i) tmp[i] = s[i] + h * k3[i];
        const auto k4 = rhs(tmp);
        for (std::size_t i = 0; i < ns; ++i) s[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        s[0] = opts.t0 + static_cast<double>(n) * h;
        for (double v : s)
            if (!std::isfinite(v)) {
                std::ostringstream msg;
                msg << "non-finite state at t = " << s[0];
                throw std::runtime_error(msg.str());
            }
        if (n % every == 0 || n == steps) record();
    }
    return tr;
}

void write_field_csv(std::ostream& os, const FibrationDims& d, const FieldConfiguration& field,
                     const ResidualReport* report) {
    field.check(d);
    std::vector<std::string> cols;
    for (std::size_t i = 0; i < d.nx; ++i) cols.push_back(x_name(i));
    for (std::size_t A = 0; A < d.nu; ++A) cols.push_back(u_name(A));
    for (std::size_t al = 0; al < d.k; ++al)
        for (std::size_t a = 0; a < d.r; ++a)
            cols.push_back(field.side == FieldSide::Lagrangian ? y_name(al, a) : mu_name(al, a));
    if (report)
        for (const auto& b : report->blocks) cols.push_back(b.name);
    for (std::size_t c = 0; c < cols.size(); ++c) os << (c ? "," : "") << cols[c];
    os << '\n';
    const auto prec = os.precision(17);
    for (std::size_t n = 0; n < field.grid.nodes(); ++n) {
        const auto x = field.grid.coords(n);
        bool first = true;
        const auto put = [&](double v) {
            os << (first ? "" : ",") << v;
            first = false;
        };
        for (double v : x) put(v);
        for (const auto& a : field.u) put(a[n]);
        for (const auto& a : field.fibre) put(a[n]);
        if (report)
            for (const auto& b : report->blocks) put(b.per_node[n]);
        os << '\n';
    }
    os.precision(prec);
}

}  // namespace liefield
