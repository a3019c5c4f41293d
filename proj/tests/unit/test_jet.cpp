#include <doctest.h>

#include "support.hpp"

using namespace liefield;
using namespace liefield::testing;

namespace {

double max_at(const Expr& e, const VarLayout& lay, const SampleBox& box, std::mt19937_64& rng, int points = 10) {
    const CompiledExpr c(e, lay);
    double m = 0.0;
    for (int k = 0; k < points; ++k) m = std::max(m, std::abs(c(random_values(lay, box, rng))));
    return m;
}

double eps(std::size_t a, std::size_t b, std::size_t c) {
    return eval(so3_structure_constants()(a, b, c), {});
}

}  // namespace

TEST_CASE("prolongation of the standard case is the coordinate basis") {
    const FibrationSpec fib = make_preset("standard").model.fib;
    const ProlongationSpec prol = prolongation(fib);
    const auto& b = prol.basis;
    REQUIRE(b.rank == b.ncoords());
    for (std::size_t A = 0; A < b.rank; ++A)
        for (std::size_t j = 0; j < b.ncoords(); ++j) CHECK(b.anchor(A, j) == Expr(A == j ? 1 : 0));
    for (const Expr& c : b.C) CHECK(c.is_zero());
    CHECK(prol.V(0, 1) == 4);
}

TEST_CASE("prolongation of so(3) over time") {
    const FibrationSpec fib = make_preset("so3").model.fib;
    const ProlongationSpec prol = prolongation(fib);
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b)
            for (std::size_t c = 0; c < 3; ++c)
                CHECK(prol.basis.C(prol.Xv(a), prol.Xv(b), prol.Xv(c)) == Expr(static_cast<int>(eps(a, b, c))));
    ValidationOptions o;
    o.tol = 1e-10;
    CHECK(validate(prol.basis, o).pass());

    // dX^gamma carries -C^gamma_{alpha beta} on (X^alpha, X^beta).
    const AlgebroidForm d = differential(prol.basis, AlgebroidForm::basis(prol.rank(), prol.Xv(2)));
    CHECK(d.coefficient({static_cast<std::uint16_t>(prol.Xv(0)), static_cast<std::uint16_t>(prol.Xv(1))}) == Expr(-1));
}

TEST_CASE("prolongations of every preset satisfy the structure equations") {
    ValidationOptions o;
    o.tol = 1e-9;
    o.points = 10;
    for (const auto& name : preset_names()) {
        CAPTURE(name);
        const Preset p = make_preset(name);
        o.box = p.model.box;
        CHECK(validate(prolongation(p.model.fib).basis, o).pass());
        CHECK(validate(dual_prolongation(p.model.fib).basis, o).pass());
        CHECK(validate(dual_prolongation(p.model.fib, true).basis, o).pass());
    }
}

TEST_CASE("total derivative") {
    std::mt19937_64 rng(41);
    for (const char* name : {"standard_connection", "poisson_sigma_so3", "atiyah_curved", "so3"}) {
        CAPTURE(name);
        const Preset p = make_preset(name);
        const FibrationSpec& fib = p.model.fib;
        const auto [nx, nu, r, k] = fib.dims;
        const VarLayout lay = jet_layout(fib.dims, true);
        for (std::size_t a = 0; a < r; ++a) {
            for (std::size_t A = 0; A < nu; ++A) {
                Expr expect = fib.rho_Ea(a, A);
                for (std::size_t al = 0; al < k; ++al) expect += fib.rho_Ealpha(al, A) * Expr::var(y_name(al, a));
                CHECK(max_at(total_derivative(fib, Expr::var(u_name(A)), a) - expect, lay, p.model.box, rng) < 1e-12);
            }
            if (nx > 0) {
                const Expr f = parse("sin(x1)*x1^2");
                Expr expect = fib.rho_F(a, 0) * diff(f, "x1");
                CHECK(max_at(total_derivative(fib, f, a) - expect, lay, p.model.box, rng) < 1e-12);
            }
            // Chain rule on a function of x and u.
            std::vector<std::string> xu = fib.base_coords();
            if (xu.empty()) continue;
            const Expr g = random_expr(rng, xu, 3);
            Expr chain;
            for (const auto& v : xu) chain += diff(g, v) * total_derivative(fib, Expr::var(v), a);
            CHECK(max_at(total_derivative(fib, g, a) - chain, lay, p.model.box, rng) < 1e-9);
        }
    }
}

TEST_CASE("Z functions") {
    const FibrationSpec flat = make_preset("standard").model.fib;
    const ZFunctions z0 = z_functions(flat);
    for (const Expr& e : z0.vert) CHECK(e.is_zero());
    for (const Expr& e : z0.mix) CHECK(e.is_zero());
    for (const Expr& e : z0.bas) CHECK(e.is_zero());

    // so(3) over time: Z^alpha_{1 gamma} = eps_{beta gamma alpha} y^beta
    const FibrationSpec so3 = make_preset("so3").model.fib;
    const ZFunctions z = z_functions(so3);
    const VarLayout lay = jet_layout(so3.dims, false);
    const std::vector<double> v = {0.3, 0.5, -0.7, 1.1};
    for (std::size_t ga = 0; ga < 3; ++ga)
        for (std::size_t al = 0; al < 3; ++al) {
            double expect = 0.0;
            for (std::size_t be = 0; be < 3; ++be) expect += eps(be, ga, al) * v[1 + be];
            CHECK(CompiledExpr(z.vert(0, ga, al), lay)(v) == doctest::Approx(expect));
        }
}

TEST_CASE("contact forms") {
    std::mt19937_64 rng(42);
    const Preset p = make_preset("atiyah_curved");
    const FibrationSpec& fib = p.model.fib;
    const auto [nx, nu, r, k] = fib.dims;
    const ProlongationSpec prol = prolongation(fib);
    const auto theta = contact_forms(fib, prol);
    const VarLayout lay = jet_layout(fib.dims, false);
    for (std::size_t al = 0; al < k; ++al) {
        for (std::size_t be = 0; be < k; ++be) {
            SectionExpr xb(prol.rank());
            xb[prol.Xv(be)] = Expr(1);
            CHECK(apply(theta[al], {xb}) == Expr(al == be ? 1 : 0));
        }
        for (std::size_t a = 0; a < r; ++a) {
            SectionExpr h(prol.rank());
            h[prol.X(a)] = Expr(1);
            for (std::size_t be = 0; be < k; ++be) h[prol.Xv(be)] = Expr::var(y_name(be, a));
            CHECK(max_at(apply(theta[al], {h}), lay, p.model.box, rng) < 1e-14);
        }
    }

    // dtheta + 1/2 C theta theta + Z X^b theta^gamma - X^a V_a leaves only X^b X^c terms.
    const ZFunctions z = z_functions(fib);
    const std::size_t R = prol.rank();
    for (std::size_t al = 0; al < k; ++al) {
        AlgebroidForm res = differential(prol.basis, theta[al]);
        for (std::size_t be = 0; be < k; ++be)
            for (std::size_t ga = 0; ga < k; ++ga)
                res += (Expr::raw_div(Expr(1), Expr(2)) * fib.C_vert(be, ga, al)) * wedge(theta[be], theta[ga]);
        for (std::size_t b = 0; b < r; ++b)
            for (std::size_t ga = 0; ga < k; ++ga)
                res += z.vert(b, ga, al) * wedge(AlgebroidForm::basis(R, prol.X(b)), theta[ga]);
        for (std::size_t a = 0; a < r; ++a)
            res -= wedge(AlgebroidForm::basis(R, prol.X(a)), AlgebroidForm::basis(R, prol.V(al, a)));
        for (const auto& [idx, c] : res.terms()) {
            CAPTURE(al);
            const bool basic = idx[0] < r && idx[1] < r;
            if (!basic) CHECK(max_at(c, lay, p.model.box, rng) < 1e-12);
        }
    }

    const FibrationSpec std_fib = make_preset("standard").model.fib;
    const ProlongationSpec sp = prolongation(std_fib);
    const auto th = contact_forms(std_fib, sp);
    const AlgebroidForm at0 = th[0].map_coefficients([](const Expr& e) {
        return simplify(substitute(e, {{"y1_1", Expr(0)}, {"y1_2", Expr(0)}}));
    });
    CHECK(at0.terms().size() == 1);
    CHECK(at0.coefficient({static_cast<std::uint16_t>(sp.Xv(0))}).is_one());
}

TEST_CASE("holonomy defect") {
    std::mt19937_64 rng(43);
    const FibrationSpec std_fib = make_preset("standard").model.fib;
    for (int n = 0; n < 10; ++n) {
        const SecondJetPoint q = random_second_jet(std_fib.dims, rng);
        const Tensor<double> M = holonomy_defect(std_fib, q);
        for (std::size_t a = 0; a < 2; ++a)
            for (std::size_t b = 0; b < 2; ++b) CHECK(M(0, a, b) == doctest::Approx(q.y2(0, a, b) - q.y2(0, b, a)));
    }
    SecondJetPoint sym = random_second_jet(std_fib.dims, rng);
    sym.y2(0, 0, 1) = sym.y2(0, 1, 0);
    CHECK(max_abs(holonomy_defect(std_fib, sym)) == 0.0);

    // so(3)-valued field on the plane, term by term:
    // M^g_{ab} = y2[g][a][b] - y2[g][b][a] - eps_{be,ga,g} y^be_a y^ga_b
    const FibrationSpec at = make_preset("atiyah_flat").model.fib;
    for (int n = 0; n < 10; ++n) {
        const SecondJetPoint q = random_second_jet(at.dims, rng);
        const Tensor<double> M = holonomy_defect(at, q);
        for (std::size_t g = 0; g < 3; ++g)
            for (std::size_t a = 0; a < 2; ++a)
                for (std::size_t b = 0; b < 2; ++b) {
                    double expect = q.y2(g, a, b) - q.y2(g, b, a);
                    for (std::size_t be = 0; be < 3; ++be)
                        for (std::size_t ga = 0; ga < 3; ++ga) expect -= eps(be, ga, g) * q.j1.y(be, a) * q.j1.y(ga, b);
                    CHECK(M(g, a, b) == doctest::Approx(expect).epsilon(1e-12));
                }
    }
}

TEST_CASE("section residuals") {
    const std::vector<double> x = {0.3, -0.4};

    // Standard case with y = du/dx.
    const FibrationSpec std_fib = make_preset("standard").model.fib;
    const Expr phi = parse("sin(x1)*x2^2 + exp(x1*x2)");
    SectionFieldExpr s{{phi}, Tensor<Expr>({1, 2})};
    s.y(0, 0) = diff(phi, "x1");
    s.y(0, 1) = diff(phi, "x2");
    CHECK(max_abs(section_admissibility_residual(std_fib, s, x)) < 1e-14);
    CHECK(max_abs(section_morphism_residual(std_fib, s, x)) < 1e-12);

    // Constant u with zero y on a fibration whose rho^A_a vanishes.
    const FibrationSpec ps = make_preset("poisson_sigma").model.fib;
    SectionFieldExpr c{{parse("0.5"), parse("-2")}, Tensor<Expr>({2, 2})};
    CHECK(max_abs(section_admissibility_residual(ps, c, x)) == 0.0);
    CHECK(max_abs(section_morphism_residual(ps, c, x)) == 0.0);

    // Poisson sigma over a linear Poisson structure: both closed forms term by term.
    // The morphism block is oriented [alpha][b][c] ~ d_b y_c - d_c y_b, so the hand-written (a, b) form is component (b, a).
    const FibrationSpec pso = make_preset("poisson_sigma_so3").model.fib;
    SectionFieldExpr f{{parse("x1*x2"), parse("sin(x2)"), parse("x1^2")}, Tensor<Expr>({3, 2})};
    const char* ys[3][2] = {{"x2", "cos(x1)"}, {"x1*x2", "1 + x2"}, {"exp(x1)", "x1 - x2"}};
    for (std::size_t J = 0; J < 3; ++J)
        for (std::size_t a = 0; a < 2; ++a) f.y(J, a) = parse(ys[J][a]);
    Env env{{"x1", x[0]}, {"x2", x[1]}};
    std::vector<double> u(3);
    for (std::size_t J = 0; J < 3; ++J) u[J] = eval(f.u[J], env);
    // Lambda^{JK} = eps_{JKL} u_L
    const auto lambda = [&](std::size_t J, std::size_t K) {
        double s2 = 0.0;
        for (std::size_t L = 0; L < 3; ++L) s2 += eps(J, K, L) * u[L];
        return s2;
    };
    const Tensor<double> adm = section_admissibility_residual(pso, f, x);
    for (std::size_t J = 0; J < 3; ++J)
        for (std::size_t a = 0; a < 2; ++a) {
            double expect = eval(diff(f.u[J], x_name(a)), env);
            for (std::size_t K = 0; K < 3; ++K) expect += lambda(J, K) * eval(f.y(K, a), env);
            CHECK(adm(J, a) == doctest::Approx(expect).epsilon(1e-12));
        }
    const Tensor<double> mor = section_morphism_residual(pso, f, x);
    for (std::size_t J = 0; J < 3; ++J)
        for (std::size_t a = 0; a < 2; ++a)
            for (std::size_t b = 0; b < 2; ++b) {
                double expect = eval(diff(f.y(J, a), x_name(b)) - diff(f.y(J, b), x_name(a)), env);
                for (std::size_t K = 0; K < 3; ++K)
                    for (std::size_t L = 0; L < 3; ++L)
                        expect += eps(K, L, J) * eval(f.y(K, b), env) * eval(f.y(L, a), env);
                CHECK(mor(J, b, a) == doctest::Approx(expect).epsilon(1e-12));
            }
}

TEST_CASE("Atiyah morphism residual is the curvature mismatch") {
    const Preset p = make_preset("atiyah_flat");
    const std::vector<double> x = {0.2, 0.9};
    Env env{{"x1", x[0]}, {"x2", x[1]}};
    // Parallel y: flat, zero residual.
    SectionFieldExpr flat{{}, Tensor<Expr>({3, 2})};
    flat.y(2, 0) = parse("sin(x1)");
    flat.y(2, 1) = parse("x2^2");
    CHECK(max_abs(section_morphism_residual(p.model.fib, flat, x)) < 1e-14);

    SectionFieldExpr g{{}, Tensor<Expr>({3, 2})};
    const char* ys[3][2] = {{"x1*x2", "cos(x1)"}, {"x2", "x1^2"}, {"1", "sin(x2)"}};
    for (std::size_t al = 0; al < 3; ++al)
        for (std::size_t a = 0; a < 2; ++a) g.y(al, a) = parse(ys[al][a]);
    const Tensor<double> mor = section_morphism_residual(p.model.fib, g, x);
    // d_b y_a - d_a y_b + C y_b y_a, read off at component (b, a)
    for (std::size_t al = 0; al < 3; ++al)
        for (std::size_t a = 0; a < 2; ++a)
            for (std::size_t b = 0; b < 2; ++b) {
                double expect = eval(diff(g.y(al, a), x_name(b)) - diff(g.y(al, b), x_name(a)), env);
                for (std::size_t be = 0; be < 3; ++be)
                    for (std::size_t ga = 0; ga < 3; ++ga) expect += eps(be, ga, al) * eval(g.y(be, b), env) * eval(g.y(ga, a), env);
                CHECK(mor(al, b, a) == doctest::Approx(expect).epsilon(1e-12));
            }
}

TEST_CASE("complete lift") {
    std::mt19937_64 rng(44);
    const FibrationSpec so3 = make_preset("so3").model.fib;
    const ProlongationSpec prol = prolongation(so3);
    const std::vector<Expr> zero(3);
    for (const Expr& e : complete_lift(so3, zero)) CHECK(e.is_zero());

    const std::vector<Expr> sig = {parse("0.5"), parse("-1"), parse("2")};
    const SectionExpr lift = complete_lift(so3, sig);
    const ZFunctions z = z_functions(so3);
    const VarLayout lay = jet_layout(so3.dims, false);
    SampleBox box;
    CHECK(lift[prol.X(0)].is_zero());
    for (std::size_t al = 0; al < 3; ++al) {
        CHECK(structurally_equal(lift[prol.Xv(al)], sig[al]));
        Expr expect;
        for (std::size_t be = 0; be < 3; ++be) expect += z.vert(0, be, al) * sig[be];
        CHECK(max_at(lift[prol.V(al, 0)] - expect, lay, box, rng) < 1e-14);
    }

    // (f sigma)^(1) - f sigma^(1) is the vertical lift of df (x) sigma.
    for (const char* name : {"atiyah_curved", "poisson_sigma_so3", "standard_connection"}) {
        CAPTURE(name);
        const Preset p = make_preset(name);
        const FibrationSpec& fib = p.model.fib;
        const auto [nx, nu, r, k] = fib.dims;
        const ProlongationSpec pr = prolongation(fib);
        const VarLayout jl = jet_layout(fib.dims, false);
        const auto xu = fib.base_coords();
        std::vector<Expr> s(k);
        for (auto& e : s) e = random_expr(rng, xu, 2);
        const Expr f = random_expr(rng, xu, 2);
        std::vector<Expr> fs(k);
        for (std::size_t al = 0; al < k; ++al) fs[al] = f * s[al];
        const SectionExpr l1 = complete_lift(fib, fs), l0 = complete_lift(fib, s);
        for (std::size_t A = 0; A < pr.rank(); ++A) {
            Expr d = l1[A] - f * l0[A];
            if (A >= r + k) {
                const std::size_t al = (A - r - k) / r, a = (A - r - k) % r;
                d -= total_derivative(fib, f, a) * s[al];
            }
            CHECK(max_at(d, jl, p.model.box, rng) < 1e-9);
        }
    }
}
