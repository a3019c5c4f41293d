#include "liefield/lagrangian.hpp"

#include <cmath>

namespace liefield {

const Expr& ModelSpec::L() const {
    if (!lagrangian) throw MissingFunction("model '" + fib.name + "' has no Lagrangian");
    return *lagrangian;
}

const Expr& ModelSpec::H() const {
    if (!hamiltonian) throw MissingFunction("model '" + fib.name + "' has no Hamiltonian");
    return *hamiltonian;
}

void ModelSpec::check() const {
    fib.check();
    const VarLayout jet = jet_layout(fib.dims, false);
    VarLayout dual(fib.base_coords());
    for (std::size_t al = 0; al < fib.dims.k; ++al)
        for (std::size_t a = 0; a < fib.dims.r; ++a) dual.add(mu_name(al, a));
    const auto deps = [](const Expr& e, const VarLayout& lay, const std::string& what) {
        for (const auto& v : free_variables(e)) {
            if (!lay.contains(v)) throw ShapeError(what + " uses undeclared variable '" + v + "'");
        }
    };
    if (lagrangian) deps(*lagrangian, jet, "lagrangian");
    if (hamiltonian) deps(*hamiltonian, dual, "hamiltonian");
    for (const auto& [name, e] : currents) deps(e, jet, "current '" + name + "'");
}

AlgebroidForm volume_form(const ProlongationSpec& prol) {
    const std::size_t r = prol.dims.r;
    AlgebroidForm w(prol.rank(), r);
    MultiIndex idx(r);
    for (std::size_t a = 0; a < r; ++a) idx[a] = static_cast<std::uint16_t>(prol.X(a));
    w.add(idx, Expr(1));
    return w;
}

AlgebroidForm volume_form_a(const ProlongationSpec& prol, std::size_t a) {
    SectionExpr e(prol.rank());
    e[prol.X(a)] = Expr(1);
    return contraction(e, volume_form(prol));
}

SectionExpr VerticalEndomorphism::apply(std::size_t a, const SectionExpr& v) const {
    const std::size_t R = v.size();
    SectionExpr out(R);
    for (const auto& [theta, vidx] : parts.at(a)) out[vidx] += liefield::apply(theta, {v});
    return out;
}

VerticalEndomorphism vertical_endomorphism(const FibrationSpec& spec, const ProlongationSpec& prol) {
    const auto theta = contact_forms(spec, prol);
    VerticalEndomorphism s;
    s.parts.resize(spec.dims.r);
    for (std::size_t a = 0; a < spec.dims.r; ++a)
        for (std::size_t al = 0; al < spec.dims.k; ++al) s.parts[a].emplace_back(theta[al], prol.V(al, a));
    return s;
}

AlgebroidForm s_omega(const FibrationSpec& spec, const ProlongationSpec& prol, const AlgebroidForm& beta) {
    if (beta.degree() != 1) throw ShapeError("S_omega acts on one-forms");
    const auto theta = contact_forms(spec, prol);
    AlgebroidForm out(prol.rank(), spec.dims.r);
    for (std::size_t a = 0; a < spec.dims.r; ++a) {
        const AlgebroidForm wa = volume_form_a(prol, a);
        for (std::size_t al = 0; al < spec.dims.k; ++al) {
            const Expr c = beta.coefficient({static_cast<std::uint16_t>(prol.V(al, a))});
            if (c.is_zero()) continue;
            out += c * wedge(theta[al], wa);
        }
    }
    return out;
}

AlgebroidForm cartan_form(const ModelSpec& model, const ProlongationSpec& prol) {
    const Expr& L = model.L();
    const AlgebroidForm dL = differential(prol.basis, AlgebroidForm::function(prol.rank(), L));
    AlgebroidForm theta = s_omega(model.fib, prol, dL);
    theta += L * volume_form(prol);
    return theta;
}

AlgebroidForm multisymplectic_form(const ModelSpec& model, const ProlongationSpec& prol) {
    return -differential(prol.basis, cartan_form(model, prol));
}

std::vector<Expr> el_symbolic(const ModelSpec& model) {
    const FibrationSpec& spec = model.fib;
    const auto [nx, nu, r, k] = spec.dims;
    const Expr& L = model.L();
    const ZFunctions z = z_functions(spec);

    Tensor<Expr> P({k, r});
    for (std::size_t al = 0; al < k; ++al)
        for (std::size_t a = 0; a < r; ++a) P(al, a) = diff(L, y_name(al, a));
    std::vector<Expr> Lu(nu);
    for (std::size_t A = 0; A < nu; ++A) Lu[A] = diff(L, u_name(A));
    std::vector<Expr> trace(r);  // C^b_{ba}
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b) trace[a] += spec.C_bas(b, a, b);

    std::vector<Expr> out(k);
    for (std::size_t al = 0; al < k; ++al) {
        Expr v;
        for (std::size_t a = 0; a < r; ++a) {
            v += total_derivative(spec, P(al, a), a);
            v += P(al, a) * trace[a];
            for (std::size_t g = 0; g < k; ++g) v -= P(g, a) * z.vert(a, al, g);
        }
        for (std::size_t A = 0; A < nu; ++A) v -= Lu[A] * spec.rho_Ealpha(al, A);
        out[al] = v;
    }
    return out;
}

std::vector<Expr> el_from_multisymplectic(const ModelSpec& model) {
    const FibrationSpec& spec = model.fib;
    const auto [nx, nu, r, k] = spec.dims;
    const ProlongationSpec prol = prolongation(spec);
    const AlgebroidForm omega = multisymplectic_form(model, prol);
    std::vector<SectionExpr> lifts(r, SectionExpr(prol.rank()));
    for (std::size_t a = 0; a < r; ++a) {
        lifts[a][prol.X(a)] = Expr(1);
        for (std::size_t be = 0; be < k; ++be) {
            lifts[a][prol.Xv(be)] = Expr::var(y_name(be, a));
            for (std::size_t b = 0; b < r; ++b) lifts[a][prol.V(be, b)] = Expr::var(yd_name(be, b, a));
        }
    }
    std::vector<Expr> out(k);
    for (std::size_t al = 0; al < k; ++al) {
        std::vector<SectionExpr> vecs;
        SectionExpr xa(prol.rank());
        xa[prol.Xv(al)] = Expr(1);
        vecs.push_back(xa);
        vecs.insert(vecs.end(), lifts.begin(), lifts.end());
        out[al] = liefield::apply(omega, vecs);
    }
    return out;
}

std::vector<double> el_residual(const ModelSpec& model, const SecondJetPoint& p) {
    const auto el = el_symbolic(model);
    const VarLayout lay = jet_layout(model.dims(), true);
    const auto vals = jet_values(p);
    std::vector<double> out;
    for (const auto& e : el) out.push_back(CompiledExpr(e, lay)(vals));
    return out;
}

Tensor<Expr> hessian_symbolic(const ModelSpec& model) {
    const auto [nx, nu, r, k] = model.dims();
    const std::size_t n = k * r;
    Tensor<Expr> h({n, n});
    const Expr& L = model.L();
    for (std::size_t al = 0; al < k; ++al)
        for (std::size_t a = 0; a < r; ++a) {
            const Expr dL = diff(L, y_name(al, a));
            for (std::size_t be = 0; be < k; ++be)
                for (std::size_t b = 0; b < r; ++b) h(al * r + a, be * r + b) = diff(dL, y_name(be, b));
        }
    return h;
}

Eigen::MatrixXd hessian(const ModelSpec& model, const JetPoint& p) {
    const Tensor<Expr> h = hessian_symbolic(model);
    const std::size_t n = h.dim(0);
    const VarLayout lay = jet_layout(model.dims(), false);
    const auto vals = jet_values(p);
    Eigen::MatrixXd m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = CompiledExpr(h(i, j), lay)(vals);
    return m;
}

bool is_regular(const Eigen::MatrixXd& h, double rel_tol) {
    const auto n = h.rows();
    if (n == 0) return true;
    const double scale = h.cwiseAbs().maxCoeff();
    if (scale == 0.0 || !std::isfinite(scale)) return false;
    const double det = h.partialPivLu().determinant();
    return std::abs(det) > rel_tol * std::pow(scale, static_cast<double>(n));
}

Expr invariance_defect(const ModelSpec& model, const std::vector<Expr>& sigma) {
    const ProlongationSpec prol = prolongation(model.fib);
    const SectionExpr lift = complete_lift(model.fib, sigma);
    return anchor_derivative(prol.basis, lift, model.L());
}

AlgebroidForm noether_current(const ModelSpec& model, const std::vector<Expr>& sigma) {
    const ProlongationSpec prol = prolongation(model.fib);
    return contraction(complete_lift(model.fib, sigma), cartan_form(model, prol));
}

}  // namespace liefield
