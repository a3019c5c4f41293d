#include "liefield/presets.hpp"

#include <charconv>
#include <map>
#include <string>

#include "liefield/lagrangian.hpp"

namespace liefield {

namespace {

Expr y(std::size_t al, std::size_t a) { return Expr::var(y_name(al, a)); }
Expr yd(std::size_t al, std::size_t a, std::size_t b) { return Expr::var(yd_name(al, a, b)); }

// Classical total derivative d/dx^i along (u, y), with du^A/dx^i = shift^A_i + y^A_i.
Expr classical_total(const FibrationDims& d, const Expr& f, std::size_t i, const Tensor<Expr>* shift) {
    Expr out = diff(f, x_name(i));
    for (std::size_t A = 0; A < d.nu; ++A) {
        Expr du = A < d.k && i < d.r ? y(A, i) : Expr(0);
        if (shift) du += (*shift)(A, i);
        out += du * diff(f, u_name(A));
    }
    for (std::size_t be = 0; be < d.k; ++be)
        for (std::size_t b = 0; b < d.r; ++b) out += yd(be, b, i) * diff(f, y_name(be, b));
    return out;
}

void require_valid(const Preset& p) {
    ValidationOptions o;
    o.tol = p.model.tolerances.validate;
    o.box = p.model.box;
    const ValidationReport rep = validate(p.model.fib, o);
    if (!rep.pass())
        throw PresetError("preset '" + p.name + "' fails validation (anchor " + std::to_string(rep.max_anchor) +
                          ", jacobi " + std::to_string(rep.max_jacobi) + ", antisymmetry " +
                          std::to_string(rep.max_antisym) + ")");
}

Expr epsilon(std::size_t i, std::size_t j, std::size_t k) {
    if (i == j || j == k || i == k) return Expr(0);
    const bool even = (i + 1) % 3 == j && (j + 1) % 3 == k;
    return even ? Expr(1) : Expr(-1);
}

Expr half_square_sum(const FibrationDims& d, const char* prefix) {
    Expr s;
    for (std::size_t al = 0; al < d.k; ++al)
        for (std::size_t a = 0; a < d.r; ++a) {
            const Expr v = Expr::var(std::string(prefix) == "y" ? y_name(al, a) : mu_name(al, a));
            s += v * v;
        }
    return Expr::raw_div(Expr(1), Expr(2)) * s;
}

}  // namespace

Tensor<Expr> so3_structure_constants() {
    Tensor<Expr> c({3, 3, 3});
    for (std::size_t b = 0; b < 3; ++b)
        for (std::size_t g = 0; g < 3; ++g)
            for (std::size_t a = 0; a < 3; ++a) c(b, g, a) = epsilon(b, g, a);
    return c;
}

Preset preset_standard(std::size_t nx, std::size_t nu, const Expr& potential, const std::optional<Tensor<Expr>>& gamma) {
    const FibrationDims d{nx, nu, nx, nu};
    if (gamma && gamma->shape() != std::vector<std::size_t>{nu, nx})
        throw PresetError("connection must have shape nu x nx");
    Preset p;
    p.name = gamma ? (nx == 1 ? "time_dependent" : "standard_connection") : "standard";
    FibrationSpec& s = p.model.fib;
    s = FibrationSpec(d);
    s.name = p.name;
    for (std::size_t i = 0; i < nx; ++i) s.rho_F(i, i) = Expr(1);
    for (std::size_t A = 0; A < nu; ++A) s.rho_Ealpha(A, A) = Expr(1);
    if (gamma) {
        const Tensor<Expr>& G = *gamma;
        for (std::size_t i = 0; i < nx; ++i)
            for (std::size_t A = 0; A < nu; ++A) {
                s.rho_Ea(i, A) = G(A, i);
                // [e_i, e_B] = -dG^A_i/du^B e_A
                for (std::size_t B = 0; B < nu; ++B) s.C_mix1(i, B, A) = -diff(G(A, i), u_name(B));
            }
        // [e_i, e_j] = R^A_{ij} e_A
        for (std::size_t i = 0; i < nx; ++i)
            for (std::size_t j = 0; j < nx; ++j) {
                if (i == j) continue;
                for (std::size_t A = 0; A < nu; ++A) {
                    Expr R = diff(G(A, j), x_name(i)) - diff(G(A, i), x_name(j));
                    for (std::size_t B = 0; B < nu; ++B)
                        R += G(B, i) * diff(G(A, j), u_name(B)) - G(B, j) * diff(G(A, i), u_name(B));
                    s.C_mix0(i, j, A) = R;
                }
            }
    }
    const Expr half = Expr::raw_div(Expr(1), Expr(2));
    p.model.lagrangian = half_square_sum(d, "y") - potential;
    p.model.hamiltonian = half_square_sum(d, "mu") + potential;
    p.doc = gamma ? "tangent bundle with a connection-adapted basis; L = 1/2 |y|^2 - V"
                  : "tangent bundle in a coordinate basis; L = 1/2 |y|^2 - V";
    p.model.description = p.doc;

    const Expr& L = *p.model.lagrangian;
    const auto el = el_symbolic(p.model);
    const Tensor<Expr>* shift = gamma ? &*gamma : nullptr;
    for (std::size_t A = 0; A < nu; ++A) {
        Expr t;
        for (std::size_t i = 0; i < nx; ++i) t += classical_total(d, diff(L, y_name(A, i)), i, shift);
        if (gamma) {
            // Gamma^B_{iA} = -dGamma^B_i/du^A
            for (std::size_t i = 0; i < nx; ++i)
                for (std::size_t B = 0; B < nu; ++B)
                    t -= -diff((*gamma)(B, i), u_name(A)) * diff(L, y_name(B, i));
        }
        t -= diff(L, u_name(A));
        p.identities.push_back({"el_closed_form_" + std::to_string(A + 1), el[A] - t});
    }
    const Tensor<Expr> adm = admissibility_symbolic(s);
    for (std::size_t A = 0; A < nu; ++A)
        for (std::size_t i = 0; i < nx; ++i) {
            Expr t = Expr::var(ud_name(A, i)) - y(A, i);
            if (gamma) t -= (*gamma)(A, i);
            p.identities.push_back({"admissibility_closed_form_" + std::to_string(A + 1) + "_" + std::to_string(i + 1),
                                    adm(A, i) - t});
        }
    const Tensor<Expr> mor = morphism_symbolic(s);
    for (std::size_t A = 0; A < nu; ++A)
        for (std::size_t i = 0; i < nx; ++i)
            for (std::size_t j = 0; j < nx; ++j) {
                if (i == j) continue;
                Expr t = yd(A, i, j) - yd(A, j, i);
                if (gamma) {
                    const Tensor<Expr>& G = *gamma;
                    for (std::size_t B = 0; B < nu; ++B)
                        t += -diff(G(A, j), u_name(B)) * y(B, i) + diff(G(A, i), u_name(B)) * y(B, j);
                    t -= s.C_mix0(i, j, A);
                }
                p.identities.push_back({"morphism_closed_form_" + std::to_string(A + 1) + "_" + std::to_string(j + 1) +
                                            std::to_string(i + 1),
                                        mor(A, j, i) - t});
            }
    require_valid(p);
    return p;
}

namespace {

// Shortest decimal form of v as an exact literal, so that printed specs parse back to the same tree.
Expr exact_literal(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return Expr(Number::from_literal(std::string(buf, res.ptr)));
}

}  // namespace

Preset preset_so3(double I1, double I2, double I3) {
    if (!(I1 > 0.0 && I2 > 0.0 && I3 > 0.0)) throw PresetError("inertias must be positive");
    const FibrationDims d{1, 0, 1, 3};
    Preset p;
    p.name = "so3";
    FibrationSpec& s = p.model.fib;
    s = FibrationSpec(d);
    s.name = p.name;
    s.rho_F(0, 0) = Expr(1);
    s.C_vert = so3_structure_constants();
    const Expr I[3] = {exact_literal(I1), exact_literal(I2), exact_literal(I3)};
    const Expr half = Expr::raw_div(Expr(1), Expr(2));
    Expr L, H, casimir;
    for (std::size_t al = 0; al < 3; ++al) {
        L += I[al] * y(al, 0) * y(al, 0);
        H += Expr::var(mu_name(al, 0)) * Expr::var(mu_name(al, 0)) / I[al];
        casimir += (I[al] * y(al, 0)) * (I[al] * y(al, 0));
    }
    p.model.lagrangian = half * L;
    p.model.hamiltonian = half * H;
    p.model.currents["casimir"] = casimir;
    p.model.currents["momentum_e3"] = I[2] * y(2, 0);
    p.doc = "free rigid body, so(3) over a point with time as the base direction; L = 1/2 sum I_a (y^a)^2";
    p.model.description = p.doc;

    const auto el = el_symbolic(p.model);
    for (std::size_t al = 0; al < 3; ++al) {
        const std::size_t be = (al + 1) % 3, ga = (al + 2) % 3;
        const Expr euler = I[al] * yd(al, 0, 0) - (I[be] - I[ga]) * y(be, 0) * y(ga, 0);
        p.identities.push_back({"euler_equations_" + std::to_string(al + 1), el[al] - euler});
    }
    require_valid(p);
    return p;
}

Preset preset_poisson_sigma(const Tensor<Expr>& lambda) {
    if (lambda.rank() != 2 || lambda.dim(0) != lambda.dim(1)) throw PresetError("Poisson tensor must be square");
    const std::size_t n = lambda.dim(0);
    for (std::size_t J = 0; J < n; ++J)
        for (std::size_t K = 0; K < n; ++K)
            if (!(lambda(J, K) + lambda(K, J)).is_zero()) throw PresetError("Poisson tensor must be antisymmetric");
    const FibrationDims d{2, n, 2, n};
    Preset p;
    p.name = "poisson_sigma";
    FibrationSpec& s = p.model.fib;
    s = FibrationSpec(d);
    s.name = p.name;
    for (std::size_t i = 0; i < 2; ++i) s.rho_F(i, i) = Expr(1);
    for (std::size_t J = 0; J < n; ++J)
        for (std::size_t K = 0; K < n; ++K) {
            // rho(du^K) = -Lambda^{JK} d/du^J
            s.rho_Ealpha(K, J) = -lambda(J, K);
            for (std::size_t L = 0; L < n; ++L) s.C_vert(J, K, L) = diff(lambda(J, K), u_name(L));
        }
    Expr L;
    for (std::size_t J = 0; J < n; ++J)
        for (std::size_t K = 0; K < n; ++K)
            if (!lambda(J, K).is_zero()) L += lambda(J, K) * y(J, 0) * y(K, 1);
    p.model.lagrangian = -(Expr::raw_div(Expr(1), Expr(2)) * L);
    p.doc = "Poisson sigma model on R^2; L = -1/2 Lambda^{JK} y_{J1} y_{K2}";
    p.model.description = p.doc;

    const auto el = el_symbolic(p.model);
    const Expr half = Expr::raw_div(Expr(1), Expr(2));
    for (std::size_t J = 0; J < n; ++J) {
        Expr t;
        for (std::size_t Lx = 0; Lx < n; ++Lx) {
            if (lambda(Lx, J).is_zero()) continue;
            Expr inner = yd(Lx, 1, 0) - yd(Lx, 0, 1);
            for (std::size_t M = 0; M < n; ++M)
                for (std::size_t K = 0; K < n; ++K) inner += diff(lambda(M, K), u_name(Lx)) * y(M, 0) * y(K, 1);
            t += lambda(Lx, J) * inner;
        }
        p.identities.push_back({"el_reduces_to_morphism_" + std::to_string(J + 1), el[J] - half * t});
    }
    const Tensor<Expr> adm = admissibility_symbolic(s);
    const Tensor<Expr> mor = morphism_symbolic(s);
    for (std::size_t J = 0; J < n; ++J)
        for (std::size_t a = 0; a < 2; ++a) {
            Expr t = Expr::var(ud_name(J, a));
            for (std::size_t K = 0; K < n; ++K) t += lambda(J, K) * y(K, a);
            p.identities.push_back({"admissibility_closed_form_" + std::to_string(J + 1) + "_" + std::to_string(a + 1),
                                    adm(J, a) - t});
            const std::size_t b = 1 - a;
            Expr m = yd(J, a, b) - yd(J, b, a);
            for (std::size_t K = 0; K < n; ++K)
                for (std::size_t Lx = 0; Lx < n; ++Lx) m += diff(lambda(K, Lx), u_name(J)) * y(K, b) * y(Lx, a);
            p.identities.push_back({"morphism_closed_form_" + std::to_string(J + 1) + "_" + std::to_string(b + 1) +
                                        std::to_string(a + 1),
                                    mor(J, b, a) - m});
        }
    require_valid(p);
    return p;
}

Tensor<Expr> atiyah_curvature(const Tensor<Expr>& c, const Tensor<Expr>& gamma, std::size_t nx) {
    const std::size_t k = c.dim(0);
    Tensor<Expr> omega({k, nx, nx});
    for (std::size_t al = 0; al < k; ++al)
        for (std::size_t i = 0; i < nx; ++i)
            for (std::size_t j = 0; j < nx; ++j) {
                if (i == j) continue;
                Expr v = diff(gamma(al, j), x_name(i)) - diff(gamma(al, i), x_name(j));
                for (std::size_t be = 0; be < k; ++be)
                    for (std::size_t ga = 0; ga < k; ++ga) {
                        if (c(be, ga, al).is_zero()) continue;
                        v -= c(be, ga, al) * gamma(be, i) * gamma(ga, j);
                    }
                omega(al, i, j) = v;
            }
    return omega;
}

Preset preset_atiyah(const Tensor<Expr>& c, const Tensor<Expr>& gamma, const Tensor<Expr>& omega,
                     const Expr& lagrangian) {
    if (c.rank() != 3 || c.dim(0) != c.dim(1) || c.dim(1) != c.dim(2)) throw PresetError("structure constants must be k x k x k");
    const std::size_t k = c.dim(0);
    if (gamma.rank() != 2 || gamma.dim(0) != k) throw PresetError("connection must have shape k x nx");
    const std::size_t nx = gamma.dim(1);
    if (omega.shape() != std::vector<std::size_t>{k, nx, nx}) throw PresetError("curvature must have shape k x nx x nx");
    const FibrationDims d{nx, 0, nx, k};
    Preset p;
    p.name = "atiyah";
    FibrationSpec& s = p.model.fib;
    s = FibrationSpec(d);
    s.name = p.name;
    for (std::size_t i = 0; i < nx; ++i) s.rho_F(i, i) = Expr(1);
    s.C_vert = c;
    bool flat_gauge = true;
    for (const auto& g : gamma) flat_gauge = flat_gauge && g.is_zero();
    // e_i = d/dx^i - gamma^delta_i e_delta acting on the adjoint bundle
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t be = 0; be < k; ++be)
            for (std::size_t ga = 0; ga < k; ++ga) {
                Expr v;
                for (std::size_t de = 0; de < k; ++de) v -= gamma(de, i) * c(de, be, ga);
                s.C_mix1(i, be, ga) = v;
            }
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < nx; ++j)
            for (std::size_t al = 0; al < k; ++al) s.C_mix0(i, j, al) = -omega(al, i, j);
    p.model.lagrangian = lagrangian;
    p.doc = "Atiyah algebroid of a trivial principal bundle in a connection-adapted basis";
    p.model.description = p.doc;

    if (flat_gauge) {
        const auto el = el_symbolic(p.model);
        for (std::size_t al = 0; al < k; ++al) {
            Expr t;
            for (std::size_t a = 0; a < nx; ++a) {
                t += classical_total(d, diff(lagrangian, y_name(al, a)), a, nullptr);
                for (std::size_t ga = 0; ga < k; ++ga)
                    for (std::size_t be = 0; be < k; ++be) {
                        if (c(be, al, ga).is_zero()) continue;
                        t -= diff(lagrangian, y_name(ga, a)) * c(be, al, ga) * y(be, a);
                    }
            }
            p.identities.push_back({"euler_poincare_" + std::to_string(al + 1), el[al] - t});
        }
        const Tensor<Expr> mor = morphism_symbolic(s);
        for (std::size_t al = 0; al < k; ++al)
            for (std::size_t a = 0; a < nx; ++a)
                for (std::size_t b = 0; b < nx; ++b) {
                    if (a == b) continue;
                    Expr t = yd(al, a, b) - yd(al, b, a) - omega(al, b, a);
                    for (std::size_t be = 0; be < k; ++be)
                        for (std::size_t ga = 0; ga < k; ++ga) {
                            if (c(be, ga, al).is_zero()) continue;
                            t += c(be, ga, al) * y(be, b) * y(ga, a);
                        }
                    p.identities.push_back({"morphism_closed_form_" + std::to_string(al + 1) + "_" + std::to_string(b + 1) +
                                                std::to_string(a + 1),
                                            mor(al, b, a) - t});
                }
    }
    require_valid(p);
    return p;
}

namespace {

Preset renamed(Preset p, const std::string& name) {
    p.name = name;
    p.model.fib.name = name;
    return p;
}

const std::map<std::string, std::function<Preset()>>& registry() {
    static const std::map<std::string, std::function<Preset()>> r = {
        {"free_particle", [] { return renamed(preset_standard(1, 1), "free_particle"); }},
        {"harmonic_oscillator",
         [] {
             const Expr u = Expr::var("u1");
             return renamed(preset_standard(1, 1, Expr::raw_div(Expr(1), Expr(2)) * u * u), "harmonic_oscillator");
         }},
        {"standard",
         [] {
             const Expr u = Expr::var("u1");
             return preset_standard(2, 1, Expr::raw_div(Expr(1), Expr(2)) * u * u);
         }},
        {"standard_connection",
         [] {
             Tensor<Expr> g({2, 2});
             g(0, 0) = Expr::var("u2");
             g(0, 1) = Expr::var("x1") * Expr::var("u1");
             g(1, 0) = sin(Expr::var("x2"));
             g(1, 1) = Expr::var("u1") * Expr::var("u2");
             const Expr u1 = Expr::var("u1"), u2 = Expr::var("u2");
             return preset_standard(2, 2, Expr::raw_div(Expr(1), Expr(2)) * (u1 * u1 + u2 * u2), g);
         }},
        {"time_dependent",
         [] {
             Tensor<Expr> g({1, 1});
             g(0, 0) = sin(Expr::var("x1"));
             const Expr u = Expr::var("u1");
             return preset_standard(1, 1, Expr::raw_div(Expr(1), Expr(2)) * u * u, g);
         }},
        {"so3", [] { return preset_so3(1.0, 2.0, 3.0); }},
        {"so3_symmetric", [] { return renamed(preset_so3(1.0, 1.0, 2.0), "so3_symmetric"); }},
        {"poisson_sigma",
         [] {
             Tensor<Expr> lam({2, 2});
             lam(0, 1) = Expr(1);
             lam(1, 0) = Expr(-1);
             return preset_poisson_sigma(lam);
         }},
        {"poisson_sigma_so3",
         [] {
             Tensor<Expr> lam({3, 3});
             for (std::size_t J = 0; J < 3; ++J)
                 for (std::size_t K = 0; K < 3; ++K)
                     for (std::size_t L = 0; L < 3; ++L)
                         if (!epsilon(J, K, L).is_zero()) lam(J, K) += epsilon(J, K, L) * Expr::var(u_name(L));
             return renamed(preset_poisson_sigma(lam), "poisson_sigma_so3");
         }},
        {"atiyah_flat",
         [] {
             const FibrationDims d{2, 0, 2, 3};
             return renamed(preset_atiyah(so3_structure_constants(), Tensor<Expr>({3, 2}), Tensor<Expr>({3, 2, 2}),
                                          half_square_sum(d, "y")),
                            "atiyah_flat");
         }},
        {"atiyah_curved",
         [] {
             const FibrationDims d{2, 0, 2, 3};
             Tensor<Expr> g({3, 2});
             g(0, 0) = Expr::var("x2");
             g(1, 1) = Expr::var("x1") * Expr::var("x1");
             g(2, 0) = sin(Expr::var("x1"));
             const Tensor<Expr> c = so3_structure_constants();
             return renamed(preset_atiyah(c, g, atiyah_curvature(c, g, 2), half_square_sum(d, "y")), "atiyah_curved");
         }},
    };
    return r;
}

}  // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const auto& [name, f] : registry()) out.push_back(name);
    return out;
}

Preset make_preset(const std::string& name) {
    const auto& r = registry();
    const auto it = r.find(name);
    if (it == r.end()) throw PresetError("unknown preset '" + name + "'");
    return it->second();
}

}  // namespace liefield
