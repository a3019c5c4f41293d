#include "liefield/hamiltonian.hpp"

#include <cmath>
#include <sstream>

namespace liefield {

LegendreTransform::LegendreTransform(const ModelSpec& model, NewtonOptions opts)
    : dims_(model.dims()), opts_(opts), layout_(jet_layout(model.dims(), false)) {
    const Expr& L = model.L();
    L_ = CompiledExpr(L, layout_);
    const Tensor<Expr> h = hessian_symbolic(model);
    for (std::size_t al = 0; al < dims_.k; ++al)
        for (std::size_t a = 0; a < dims_.r; ++a) P_.emplace_back(diff(L, y_name(al, a)), layout_);
    for (const auto& e : h) hess_.emplace_back(e, layout_);
    for (std::size_t A = 0; A < dims_.nu; ++A) Lu_.emplace_back(diff(L, u_name(A)), layout_);
}

double LegendreTransform::lagrangian(const JetPoint& p) const { return L_(jet_values(p)); }

Tensor<double> LegendreTransform::momentum(const JetPoint& p) const {
    const auto v = jet_values(p);
    Tensor<double> mu({dims_.k, dims_.r});
    for (std::size_t i = 0; i < P_.size(); ++i) mu.flat(i) = P_[i](v);
    return mu;
}

Eigen::MatrixXd LegendreTransform::hessian(const JetPoint& p) const {
    const auto v = jet_values(p);
    const auto n = static_cast<Eigen::Index>(dims_.k * dims_.r);
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = hess_[static_cast<std::size_t>(i * n + j)](v);
    return m;
}

std::vector<double> LegendreTransform::dL_du(const JetPoint& p) const {
    const auto v = jet_values(p);
    std::vector<double> out;
    for (const auto& c : Lu_) out.push_back(c(v));
    return out;
}

MomentumPoint LegendreTransform::forward(const JetPoint& p) const {
    MomentumPoint q{p.x, p.u, momentum(p), 0.0};
    double pairing = 0.0;
    for (std::size_t i = 0; i < q.mu.size(); ++i) pairing += q.mu.flat(i) * p.y.flat(i);
    q.mu0 = lagrangian(p) - pairing;
    return q;
}

JetPoint LegendreTransform::inverse(const MomentumPoint& q, const Tensor<double>* guess) const {
    const std::size_t n = dims_.k * dims_.r;
    if (q.mu.size() != n) throw ShapeError("momentum has wrong shape");
    JetPoint p{q.x, q.u, guess ? *guess : Tensor<double>({dims_.k, dims_.r})};
    const double scale = std::max(1.0, max_abs(q.mu));

    const auto residual = [&](const JetPoint& at) {
        Eigen::VectorXd r(static_cast<Eigen::Index>(n));
        const Tensor<double> mu = momentum(at);
        for (std::size_t i = 0; i < n; ++i) r(static_cast<Eigen::Index>(i)) = mu.flat(i) - q.mu.flat(i);
        return r;
    };

    Eigen::VectorXd r = residual(p);
    double norm = r.lpNorm<Eigen::Infinity>();
    for (int it = 0; it < opts_.max_iter; ++it) {
        // Checked even at a converged guess: a singular point has no local inverse.
        const Eigen::MatrixXd h = hessian(p);
        if (!is_regular(h, opts_.regular_tol)) throw SingularHessian("singular fibre Hessian in Legendre inversion");
        if (norm <= opts_.tol * scale) return p;
        const Eigen::VectorXd dy = h.partialPivLu().solve(-r);
        double step = 1.0;
        bool accepted = false;
        while (step >= opts_.min_step) {
            JetPoint trial = p;
            for (std::size_t i = 0; i < n; ++i) trial.y.flat(i) += step * dy(static_cast<Eigen::Index>(i));
            const Eigen::VectorXd rt = residual(trial);
            const double nt = rt.lpNorm<Eigen::Infinity>();
            if (std::isfinite(nt) && nt < norm) {
                p = std::move(trial);
                r = rt;
                norm = nt;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            // Stalled at rounding level: accept if already within a few ulps of tolerance.
            if (norm <= 16.0 * opts_.tol * scale) return p;
            throw ConvergenceError("Legendre inversion stalled");
        }
    }
    if (norm <= opts_.tol * scale) return p;
    std::ostringstream msg;
    msg << "Legendre inversion did not converge in " << opts_.max_iter << " iterations (residual " << norm << ")";
    throw ConvergenceError(msg.str());
}

double LegendreTransform::hamiltonian(const MomentumPoint& q, const Tensor<double>* guess) const {
    const JetPoint p = inverse(q, guess);
    double pairing = 0.0;
    for (std::size_t i = 0; i < q.mu.size(); ++i) pairing += q.mu.flat(i) * p.y.flat(i);
    return pairing - lagrangian(p);
}

MomentumPoint legendre(const ModelSpec& model, const JetPoint& p) { return LegendreTransform(model).forward(p); }

JetPoint legendre_inverse(const ModelSpec& model, const MomentumPoint& q, const NewtonOptions& opts) {
    return LegendreTransform(model, opts).inverse(q);
}

double hamiltonian_from_L(const ModelSpec& model, const MomentumPoint& q) {
    return LegendreTransform(model).hamiltonian(q);
}

CanonicalForms canonical_forms(const ModelSpec& model, const ProlongationSpec& dual) {
    const auto [nx, nu, r, k] = model.dims();
    AlgebroidForm theta(dual.rank(), r);
    for (std::size_t a = 0; a < r; ++a) {
        const AlgebroidForm wa = volume_form_a(dual, a);
        for (std::size_t al = 0; al < k; ++al) {
            theta += Expr::var(mu_name(al, a)) * wedge(AlgebroidForm::basis(dual.rank(), dual.Xv(al)), wa);
        }
    }
    theta -= model.H() * volume_form(dual);
    return {theta, -differential(dual.basis, theta)};
}

AlgebroidForm extended_canonical_form(const ProlongationSpec& ext) {
    const auto [nx, nu, r, k] = ext.dims;
    AlgebroidForm theta = Expr::var("mu0") * volume_form(ext);
    for (std::size_t a = 0; a < r; ++a) {
        const AlgebroidForm wa = volume_form_a(ext, a);
        for (std::size_t al = 0; al < k; ++al) {
            theta += Expr::var(mu_name(al, a)) * wedge(AlgebroidForm::basis(ext.rank(), ext.Xv(al)), wa);
        }
    }
    return theta;
}

BundleMapExpr extended_legendre_map(const ModelSpec& model, const ProlongationSpec& prol, const ProlongationSpec& ext) {
    if (!ext.has_mu0) throw ShapeError("target must be the extended dual prolongation");
    const auto [nx, nu, r, k] = model.dims();
    const Expr& L = model.L();
    Tensor<Expr> P({k, r});
    Expr energy = L;
    for (std::size_t al = 0; al < k; ++al)
        for (std::size_t a = 0; a < r; ++a) {
            P(al, a) = diff(L, y_name(al, a));
            energy -= P(al, a) * Expr::var(y_name(al, a));
        }

    BundleMapExpr phi{{}, Tensor<Expr>({ext.rank(), prol.rank()})};
    for (const auto& c : model.fib.base_coords()) phi.base.push_back(Expr::var(c));
    for (std::size_t al = 0; al < k; ++al)
        for (std::size_t a = 0; a < r; ++a) phi.base.push_back(P(al, a));
    phi.base.push_back(energy);

    for (std::size_t A = 0; A < r + k; ++A) phi.fiber(A, A) = Expr(1);
    const auto row = [&](std::size_t target, const Expr& f) {
        const AlgebroidForm df = differential(prol.basis, AlgebroidForm::function(prol.rank(), f));
        for (const auto& [idx, c] : df.terms()) phi.fiber(target, idx[0]) = c;
    };
    for (std::size_t al = 0; al < k; ++al)
        for (std::size_t a = 0; a < r; ++a) row(ext.V(al, a), P(al, a));
    row(ext.P0(), energy);
    return phi;
}

VarLayout hamilton_layout(const FibrationDims& d) {
    VarLayout lay;
    for (std::size_t i = 0; i < d.nx; ++i) lay.add(x_name(i));
    for (std::size_t A = 0; A < d.nu; ++A) lay.add(u_name(A));
    for (std::size_t al = 0; al < d.k; ++al)
        for (std::size_t a = 0; a < d.r; ++a) lay.add(mu_name(al, a));
    for (std::size_t A = 0; A < d.nu; ++A)
        for (std::size_t i = 0; i < d.nx; ++i) lay.add(ud_name(A, i));
    for (std::size_t al = 0; al < d.k; ++al)
        for (std::size_t a = 0; a < d.r; ++a)
            for (std::size_t i = 0; i < d.nx; ++i) lay.add(mud_name(al, a, i));
    return lay;
}

std::vector<double> hamilton_values(const HamiltonPoint& p) {
    std::vector<double> v = p.x;
    v.insert(v.end(), p.u.begin(), p.u.end());
    v.insert(v.end(), p.mu.begin(), p.mu.end());
    v.insert(v.end(), p.ud.begin(), p.ud.end());
    v.insert(v.end(), p.mud.begin(), p.mud.end());
    return v;
}

HamiltonSystem<Expr> hamilton_symbolic(const ModelSpec& model) {
    const FibrationSpec& s = model.fib;
    const auto [nx, nu, r, k] = s.dims;
    const Expr& H = model.H();
    const auto mu = [](std::size_t al, std::size_t a) { return Expr::var(mu_name(al, a)); };

    Tensor<Expr> Hmu({k, r});
    for (std::size_t al = 0; al < k; ++al)
        for (std::size_t a = 0; a < r; ++a) Hmu(al, a) = diff(H, mu_name(al, a));
    std::vector<Expr> Hu(nu);
    for (std::size_t A = 0; A < nu; ++A) Hu[A] = diff(H, u_name(A));

    // derivative of f(x, u, mu) along the field in direction b
    const auto along = [&](const Expr& f, std::size_t b) {
        Expr out;
        for (std::size_t i = 0; i < nx; ++i) {
            if (s.rho_F(b, i).is_zero()) continue;
            Expr d = diff(f, x_name(i));
            for (std::size_t A = 0; A < nu; ++A) d += diff(f, u_name(A)) * Expr::var(ud_name(A, i));
            for (std::size_t be = 0; be < k; ++be)
                for (std::size_t c = 0; c < r; ++c) d += diff(f, mu_name(be, c)) * Expr::var(mud_name(be, c, i));
            out += s.rho_F(b, i) * d;
        }
        return out;
    };

    HamiltonSystem<Expr> sys{Tensor<Expr>({nu, r}), Tensor<Expr>({k, r, r}), Tensor<Expr>({k})};
    for (std::size_t A = 0; A < nu; ++A)
        for (std::size_t a = 0; a < r; ++a) {
            Expr v;
            for (std::size_t i = 0; i < nx; ++i) v += s.rho_F(a, i) * Expr::var(ud_name(A, i));
            v -= s.rho_Ea(a, A);
            for (std::size_t al = 0; al < k; ++al) v -= s.rho_Ealpha(al, A) * Hmu(al, a);
            sys.admissibility(A, a) = v;
        }
    for (std::size_t al = 0; al < k; ++al)
        for (std::size_t b = 0; b < r; ++b)
            for (std::size_t c = 0; c < r; ++c) {
                if (b == c) continue;
                Expr v = along(Hmu(al, c), b) - along(Hmu(al, b), c);
                for (std::size_t d = 0; d < r; ++d) v -= Hmu(al, d) * s.C_bas(b, c, d);
                for (std::size_t be = 0; be < k; ++be)
                    for (std::size_t g = 0; g < k; ++g) {
                        if (s.C_vert(be, g, al).is_zero()) continue;
                        v += s.C_vert(be, g, al) * Hmu(be, b) * Hmu(g, c);
                    }
                for (std::size_t g = 0; g < k; ++g) {
                    v += s.C_mix1(b, g, al) * Hmu(g, c);
                    v -= s.C_mix1(c, g, al) * Hmu(g, b);
                }
                v += s.C_mix0(b, c, al);
                sys.compatibility(al, b, c) = v;
            }
    for (std::size_t al = 0; al < k; ++al) {
        Expr v;
        for (std::size_t c = 0; c < r; ++c) {
            for (std::size_t i = 0; i < nx; ++i) v += s.rho_F(c, i) * Expr::var(mud_name(al, c, i));
            Expr trace;
            for (std::size_t b = 0; b < r; ++b) trace += s.C_bas(b, c, b);
            v += mu(al, c) * trace;
        }
        for (std::size_t A = 0; A < nu; ++A) v += s.rho_Ealpha(al, A) * Hu[A];
        for (std::size_t c = 0; c < r; ++c)
            for (std::size_t g = 0; g < k; ++g) {
                Expr z = s.C_mix1(c, al, g);
                for (std::size_t be = 0; be < k; ++be) z += s.C_vert(be, al, g) * Hmu(be, c);
                v -= mu(g, c) * z;
            }
        sys.dynamics(al) = v;
    }
    return sys;
}

HamiltonSystem<double> hamilton_residual(const ModelSpec& model, const HamiltonPoint& p) {
    const HamiltonSystem<Expr> sys = hamilton_symbolic(model);
    const VarLayout lay = hamilton_layout(model.dims());
    const auto vals = hamilton_values(p);
    const auto ev = [&](const Tensor<Expr>& t) {
        Tensor<double> out(t.shape());
        for (std::size_t i = 0; i < t.size(); ++i) out.flat(i) = CompiledExpr(t.flat(i), lay)(vals);
        return out;
    };
    return {ev(sys.admissibility), ev(sys.compatibility), ev(sys.dynamics)};
}

HamiltonNumeric::HamiltonNumeric(const FibrationSpec& spec) : dims_(spec.dims), layout_(spec.base_coords()) {
    spec.check();
    const auto comp = [&](const Tensor<Expr>& t, std::vector<CompiledExpr>& out) {
        for (const auto& e : t) out.emplace_back(e, layout_);
    };
    comp(spec.rho_F, rho_F_);
    comp(spec.rho_Ea, rho_Ea_);
    comp(spec.rho_Ealpha, rho_Ealpha_);
    comp(spec.C_bas, C_bas_);
    comp(spec.C_mix0, C_mix0_);
    comp(spec.C_mix1, C_mix1_);
    comp(spec.C_vert, C_vert_);
}

HamiltonSystem<double> HamiltonNumeric::operator()(const HamiltonPoint& p, const HamiltonDerivatives& h) const {
    const auto [nx, nu, r, k] = dims_;
    std::vector<double> base = p.x;
    base.insert(base.end(), p.u.begin(), p.u.end());
    const auto ev = [&](const std::vector<CompiledExpr>& c) {
        std::vector<double> out;
        out.reserve(c.size());
        for (const auto& e : c) out.push_back(e(base));
        return out;
    };
    const auto rF = ev(rho_F_), rEa = ev(rho_Ea_), rEal = ev(rho_Ealpha_);
    const auto Cb = ev(C_bas_), C0 = ev(C_mix0_), C1 = ev(C_mix1_), Cv = ev(C_vert_);
    const auto RF = [&](std::size_t a, std::size_t i) { return rF[a * nx + i]; };
    const auto REA = [&](std::size_t a, std::size_t A) { return rEa[a * nu + A]; };
    const auto REAL = [&](std::size_t al, std::size_t A) { return rEal[al * nu + A]; };
    const auto CB = [&](std::size_t a, std::size_t b, std::size_t c) { return Cb[(a * r + b) * r + c]; };
    const auto C0v = [&](std::size_t a, std::size_t b, std::size_t al) { return C0[(a * r + b) * k + al]; };
    const auto C1v = [&](std::size_t a, std::size_t be, std::size_t al) { return C1[(a * k + be) * k + al]; };
    const auto CV = [&](std::size_t be, std::size_t g, std::size_t al) { return Cv[(be * k + g) * k + al]; };

    HamiltonSystem<double> sys{Tensor<double>({nu, r}), Tensor<double>({k, r, r}), Tensor<double>({k})};
    for (std::size_t A = 0; A < nu; ++A)
        for (std::size_t a = 0; a < r; ++a) {
            double v = -REA(a, A);
            for (std::size_t i = 0; i < nx; ++i) v += RF(a, i) * p.ud(A, i);
            for (std::size_t al = 0; al < k; ++al) v -= REAL(al, A) * h.H_mu(al, a);
            sys.admissibility(A, a) = v;
        }
    for (std::size_t al = 0; al < k; ++al)
        for (std::size_t b = 0; b < r; ++b)
            for (std::size_t c = 0; c < r; ++c) {
                if (b == c) continue;
                double v = h.DH_mu(al, c, b) - h.DH_mu(al, b, c) + C0v(b, c, al);
                for (std::size_t d = 0; d < r; ++d) v -= h.H_mu(al, d) * CB(b, c, d);
                for (std::size_t be = 0; be < k; ++be)
                    for (std::size_t g = 0; g < k; ++g) v += CV(be, g, al) * h.H_mu(be, b) * h.H_mu(g, c);
                for (std::size_t g = 0; g < k; ++g) v += C1v(b, g, al) * h.H_mu(g, c) - C1v(c, g, al) * h.H_mu(g, b);
                sys.compatibility(al, b, c) = v;
            }
    for (std::size_t al = 0; al < k; ++al) {
        double v = 0.0;
        for (std::size_t c = 0; c < r; ++c) {
            for (std::size_t i = 0; i < nx; ++i) v += RF(c, i) * p.mud(al, c, i);
            double trace = 0.0;
            for (std::size_t b = 0; b < r; ++b) trace += CB(b, c, b);
            v += p.mu(al, c) * trace;
        }
        for (std::size_t A = 0; A < nu; ++A) v += REAL(al, A) * h.H_u[A];
        for (std::size_t c = 0; c < r; ++c)
            for (std::size_t g = 0; g < k; ++g) {
                double z = C1v(c, al, g);
                for (std::size_t be = 0; be < k; ++be) z += CV(be, al, g) * h.H_mu(be, c);
                v -= p.mu(g, c) * z;
            }
        sys.dynamics(al) = v;
    }
    return sys;
}

HamiltonSystem<double> hamilton_residual(const FibrationSpec& spec, const HamiltonPoint& p,
                                         const HamiltonDerivatives& h) {
    return HamiltonNumeric(spec)(p, h);
}

}  // namespace liefield
