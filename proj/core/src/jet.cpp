#include "liefield/jet.hpp"

namespace liefield {

namespace {

ProlongationSpec build(const FibrationSpec& spec, bool dual, bool with_mu0) {
    spec.check();
    const auto [nx, nu, r, k] = spec.dims;
    std::vector<std::string> coords = spec.base_coords();
    for (std::size_t al = 0; al < k; ++al)
        for (std::size_t a = 0; a < r; ++a) coords.push_back(dual ? mu_name(al, a) : y_name(al, a));
    if (with_mu0) coords.push_back("mu0");

    const std::size_t E = r + k;
    const std::size_t R = E + k * r + (with_mu0 ? 1 : 0);
    ProlongationSpec out{spec.dims, AnchoredBasisSpec(coords, R), with_mu0};
    for (std::size_t A = 0; A < E; ++A)
        for (std::size_t j = 0; j < nx + nu; ++j) out.basis.anchor(A, j) = spec.total_anchor(A, j);
    for (std::size_t al = 0; al < k; ++al)
        for (std::size_t a = 0; a < r; ++a) out.basis.anchor(out.V(al, a), nx + nu + al * r + a) = Expr(1);
    if (with_mu0) out.basis.anchor(out.P0(), coords.size() - 1) = Expr(1);
    for (std::size_t A = 0; A < E; ++A)
        for (std::size_t B = 0; B < E; ++B)
            for (std::size_t D = 0; D < E; ++D) out.basis.C(A, B, D) = spec.total_C(A, B, D);
    return out;
}

Expr yv(std::size_t al, std::size_t a) { return Expr::var(y_name(al, a)); }
Expr ydv(std::size_t al, std::size_t a, std::size_t b) { return Expr::var(yd_name(al, a, b)); }

}  // namespace

ProlongationSpec prolongation(const FibrationSpec& spec) { return build(spec, false, false); }

ProlongationSpec dual_prolongation(const FibrationSpec& spec, bool with_mu0) { return build(spec, true, with_mu0); }

VarLayout jet_layout(const FibrationDims& d, bool with_yd) {
    VarLayout lay;
    for (std::size_t i = 0; i < d.nx; ++i) lay.add(x_name(i));
    for (std::size_t A = 0; A < d.nu; ++A) lay.add(u_name(A));
    for (std::size_t al = 0; al < d.k; ++al)
        for (std::size_t a = 0; a < d.r; ++a) lay.add(y_name(al, a));
    if (with_yd) {
        for (std::size_t al = 0; al < d.k; ++al)
            for (std::size_t a = 0; a < d.r; ++a)
                for (std::size_t b = 0; b < d.r; ++b) lay.add(yd_name(al, a, b));
    }
    return lay;
}

std::vector<double> jet_values(const JetPoint& p) {
    std::vector<double> v = p.x;
    v.insert(v.end(), p.u.begin(), p.u.end());
    v.insert(v.end(), p.y.begin(), p.y.end());
    return v;
}

std::vector<double> jet_values(const SecondJetPoint& p) {
    std::vector<double> v = jet_values(p.j1);
    v.insert(v.end(), p.y2.begin(), p.y2.end());
    return v;
}

Expr total_derivative(const FibrationSpec& spec, const Expr& f, std::size_t a) {
    const auto [nx, nu, r, k] = spec.dims;
    Expr out;
    for (std::size_t i = 0; i < nx; ++i) {
        if (spec.rho_F(a, i).is_zero()) continue;
        out += spec.rho_F(a, i) * diff(f, x_name(i));
    }
    for (std::size_t A = 0; A < nu; ++A) {
        const Expr df = diff(f, u_name(A));
        if (df.is_zero()) continue;
        Expr coeff = spec.rho_Ea(a, A);
        for (std::size_t al = 0; al < k; ++al) {
            if (spec.rho_Ealpha(al, A).is_zero()) continue;
            coeff += spec.rho_Ealpha(al, A) * yv(al, a);
        }
        out += coeff * df;
    }
    for (std::size_t be = 0; be < k; ++be)
        for (std::size_t b = 0; b < r; ++b) {
            const Expr df = diff(f, y_name(be, b));
            if (df.is_zero()) continue;
            out += ydv(be, b, a) * df;
        }
    return out;
}

ZFunctions z_functions(const FibrationSpec& spec) {
    const auto [nx, nu, r, k] = spec.dims;
    ZFunctions z{Tensor<Expr>({r, k, k}), Tensor<Expr>({r, r, k}), Tensor<Expr>({r, r, r})};
    for (std::size_t a = 0; a < r; ++a) {
        for (std::size_t g = 0; g < k; ++g)
            for (std::size_t al = 0; al < k; ++al) {
                Expr v = spec.C_mix1(a, g, al);
                for (std::size_t be = 0; be < k; ++be) v += spec.C_vert(be, g, al) * yv(be, a);
                z.vert(a, g, al) = v;
            }
        for (std::size_t c = 0; c < r; ++c) {
            for (std::size_t al = 0; al < k; ++al) {
                Expr v = spec.C_mix0(a, c, al);
                // C^alpha_{beta c} = -C^alpha_{c beta}
                for (std::size_t be = 0; be < k; ++be) v -= spec.C_mix1(c, be, al) * yv(be, a);
                z.mix(a, c, al) = v;
            }
            for (std::size_t b = 0; b < r; ++b) z.bas(a, c, b) = spec.C_bas(a, c, b);
        }
    }
    return z;
}

std::vector<AlgebroidForm> contact_forms(const FibrationSpec& spec, const ProlongationSpec& prol) {
    std::vector<AlgebroidForm> out;
    for (std::size_t al = 0; al < spec.dims.k; ++al) {
        AlgebroidForm th = AlgebroidForm::basis(prol.rank(), prol.Xv(al));
        for (std::size_t a = 0; a < spec.dims.r; ++a) th -= yv(al, a) * AlgebroidForm::basis(prol.rank(), prol.X(a));
        out.push_back(std::move(th));
    }
    return out;
}

Tensor<Expr> admissibility_symbolic(const FibrationSpec& spec) {
    const auto [nx, nu, r, k] = spec.dims;
    Tensor<Expr> out({nu, r});
    for (std::size_t A = 0; A < nu; ++A)
        for (std::size_t a = 0; a < r; ++a) {
            Expr v;
            for (std::size_t i = 0; i < nx; ++i) {
                if (spec.rho_F(a, i).is_zero()) continue;
                v += spec.rho_F(a, i) * Expr::var(ud_name(A, i));
            }
            v -= spec.rho_Ea(a, A);
            for (std::size_t al = 0; al < k; ++al) {
                if (spec.rho_Ealpha(al, A).is_zero()) continue;
                v -= spec.rho_Ealpha(al, A) * yv(al, a);
            }
            out(A, a) = v;
        }
    return out;
}

Tensor<Expr> morphism_symbolic(const FibrationSpec& spec) {
    const auto [nx, nu, r, k] = spec.dims;
    Tensor<Expr> out({k, r, r});
    for (std::size_t al = 0; al < k; ++al)
        for (std::size_t b = 0; b < r; ++b)
            for (std::size_t c = 0; c < r; ++c) {
                if (b == c) continue;
                Expr v = ydv(al, c, b) - ydv(al, b, c);
                for (std::size_t d = 0; d < r; ++d) v -= yv(al, d) * spec.C_bas(b, c, d);
                for (std::size_t be = 0; be < k; ++be)
                    for (std::size_t g = 0; g < k; ++g) {
                        if (spec.C_vert(be, g, al).is_zero()) continue;
                        v += spec.C_vert(be, g, al) * yv(be, b) * yv(g, c);
                    }
                for (std::size_t g = 0; g < k; ++g) {
                    v += spec.C_mix1(b, g, al) * yv(g, c);
                    v -= spec.C_mix1(c, g, al) * yv(g, b);
                }
                v += spec.C_mix0(b, c, al);
                out(al, b, c) = v;
            }
    return out;
}

Tensor<double> holonomy_defect(const FibrationSpec& spec, const SecondJetPoint& p) {
    const Tensor<Expr> m = morphism_symbolic(spec);
    const VarLayout lay = jet_layout(spec.dims, true);
    const auto vals = jet_values(p);
    Tensor<double> out(m.shape());
    for (std::size_t i = 0; i < m.size(); ++i) out.flat(i) = -CompiledExpr(m.flat(i), lay)(vals);
    return out;
}

namespace {

std::map<std::string, Expr> section_bindings(const FibrationSpec& spec, const SectionFieldExpr& s) {
    const auto [nx, nu, r, k] = spec.dims;
    if (s.u.size() != nu || s.y.shape() != std::vector<std::size_t>{k, r}) throw ShapeError("section has wrong shape");
    std::map<std::string, Expr> b;
    for (std::size_t A = 0; A < nu; ++A) {
        b.emplace(u_name(A), s.u[A]);
        for (std::size_t i = 0; i < nx; ++i) b.emplace(ud_name(A, i), diff(s.u[A], x_name(i)));
    }
    for (std::size_t al = 0; al < k; ++al)
        for (std::size_t a = 0; a < r; ++a) {
            b.emplace(y_name(al, a), s.y(al, a));
            for (std::size_t dir = 0; dir < r; ++dir) {
                Expr d;
                for (std::size_t i = 0; i < nx; ++i) d += spec.rho_F(dir, i) * diff(s.y(al, a), x_name(i));
                b.emplace(yd_name(al, a, dir), d);
            }
        }
    return b;
}

Tensor<double> eval_on_section(const Tensor<Expr>& t, const FibrationSpec& spec, const SectionFieldExpr& s,
                               const std::vector<double>& x) {
    if (x.size() != spec.dims.nx) throw ShapeError("base point has wrong dimension");
    const auto b = section_bindings(spec, s);
    const VarLayout lay(spec.x_names());
    Tensor<double> out(t.shape());
    for (std::size_t i = 0; i < t.size(); ++i) out.flat(i) = CompiledExpr(substitute(t.flat(i), b), lay)(x);
    return out;
}

}  // namespace

Tensor<double> section_admissibility_residual(const FibrationSpec& spec, const SectionFieldExpr& s,
                                              const std::vector<double>& x) {
    return eval_on_section(admissibility_symbolic(spec), spec, s, x);
}

Tensor<double> section_morphism_residual(const FibrationSpec& spec, const SectionFieldExpr& s,
                                         const std::vector<double>& x) {
    return eval_on_section(morphism_symbolic(spec), spec, s, x);
}

SectionExpr complete_lift(const FibrationSpec& spec, const std::vector<Expr>& sigma) {
    const auto [nx, nu, r, k] = spec.dims;
    if (sigma.size() != k) throw ShapeError("vertical section has wrong length");
    const ZFunctions z = z_functions(spec);
    SectionExpr out(r + k + k * r);
    for (std::size_t al = 0; al < k; ++al) out[r + al] = sigma[al];
    for (std::size_t al = 0; al < k; ++al)
        for (std::size_t a = 0; a < r; ++a) {
            Expr v = total_derivative(spec, sigma[al], a);
            for (std::size_t be = 0; be < k; ++be) {
                if (sigma[be].is_zero()) continue;
                v += z.vert(a, be, al) * sigma[be];
            }
            out[r + k + al * r + a] = v;
        }
    return out;
}

}  // namespace liefield
