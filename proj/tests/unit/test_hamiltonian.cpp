#include <doctest.h>

#include <sstream>

#include "support.hpp"

using namespace liefield;
using namespace liefield::testing;

namespace {

std::uint16_t u16(std::size_t i) { return static_cast<std::uint16_t>(i); }

HamiltonPoint random_hamilton_point(const FibrationDims& d, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    HamiltonPoint p{std::vector<double>(d.nx), std::vector<double>(d.nu), Tensor<double>({d.k, d.r}),
                    Tensor<double>({d.nu, d.nx}), Tensor<double>({d.k, d.r, d.nx})};
    for (auto& v : p.x) v = U(rng);
    for (auto& v : p.u) v = U(rng);
    for (auto& v : p.mu) v = U(rng);
    for (auto& v : p.ud) v = U(rng);
    for (auto& v : p.mud) v = U(rng);
    return p;
}

double max_form(const AlgebroidForm& w, const VarLayout& lay, const SampleBox& box, std::mt19937_64& rng) {
    double m = 0.0;
    for (int k = 0; k < 10; ++k) m = std::max(m, max_abs_coefficient(w, lay, random_values(lay, box, rng)));
    return m;
}

VarLayout dual_layout(const FibrationDims& d) {
    VarLayout lay;
    for (std::size_t i = 0; i < d.nx; ++i) lay.add(x_name(i));
    for (std::size_t A = 0; A < d.nu; ++A) lay.add(u_name(A));
    for (std::size_t al = 0; al < d.k; ++al)
        for (std::size_t a = 0; a < d.r; ++a) lay.add(mu_name(al, a));
    return lay;
}

}  // namespace

TEST_CASE("canonical forms with H = 0 on an abelian fibration") {
    std::mt19937_64 rng(61);
    Preset st = make_preset("standard");
    st.model.hamiltonian = Expr(0);
    const ProlongationSpec dual = dual_prolongation(st.model.fib);
    const CanonicalForms cf = canonical_forms(st.model, dual);
    const std::size_t R = dual.rank();
    AlgebroidForm expect(R, 3);
    for (std::size_t a = 0; a < 2; ++a)
        expect += wedge(wedge(AlgebroidForm::basis(R, dual.Xv(0)), AlgebroidForm::basis(R, dual.V(0, a))), volume_form_a(dual, a));
    CHECK(max_form(cf.omega - expect, dual_layout(st.model.dims()), st.model.box, rng) < 1e-14);

    // Theta_h is semibasic: two P arguments give zero.
    const Preset body = make_preset("so3");
    const ProlongationSpec d3 = dual_prolongation(body.model.fib);
    const AlgebroidForm th = canonical_forms(body.model, d3).theta;
    SectionExpr p1(d3.rank()), p2(d3.rank());
    p1[d3.V(0, 0)] = Expr(1);
    p2[d3.V(2, 0)] = Expr(1);
    CHECK(contraction(p1, th).is_zero());
    CHECK(contraction(p2, th).is_zero());
}

TEST_CASE("Omega_h X^alpha ^ omega block with H = 0") {
    std::mt19937_64 rng(62);
    for (const char* name : {"standard_connection", "atiyah_curved"}) {
        CAPTURE(name);
        Preset p = make_preset(name);
        p.model.hamiltonian = Expr(0);
        const FibrationSpec& s = p.model.fib;
        const auto [nx, nu, r, k] = s.dims;
        const ProlongationSpec dual = dual_prolongation(s);
        const AlgebroidForm om = canonical_forms(p.model, dual).omega;
        const VarLayout lay = dual_layout(s.dims);
        for (std::size_t al = 0; al < k; ++al) {
            // -mu^a_gamma (C^gamma_{a alpha} + C^b_{ab} delta^gamma_alpha)
            Expr expect;
            for (std::size_t a = 0; a < r; ++a) {
                for (std::size_t g = 0; g < k; ++g) expect -= Expr::var(mu_name(g, a)) * s.C_mix1(a, al, g);
                for (std::size_t b = 0; b < r; ++b) expect -= Expr::var(mu_name(al, a)) * s.C_bas(a, b, b);
            }
            MultiIndex idx;
            for (std::size_t a = 0; a < r; ++a) idx.push_back(u16(dual.X(a)));
            idx.push_back(u16(dual.Xv(al)));
            // X^alpha ^ omega = (-1)^r omega ^ X^alpha
            const Expr sign = (r % 2 == 0) ? Expr(1) : Expr(-1);
            const Expr c = sign * om.coefficient(idx);
            for (int n = 0; n < 10; ++n) CHECK(std::abs(eval_at(c - expect, lay, random_values(lay, p.model.box, rng))) < 1e-12);
        }
    }
}

TEST_CASE("Hamilton equations for the rigid body are Lie-Poisson") {
    std::mt19937_64 rng(63);
    const Preset body = make_preset("so3");
    const HamiltonSystem<Expr> sys = hamilton_symbolic(body.model);
    const VarLayout lay = hamilton_layout(body.model.dims());
    const double I[3] = {1.0, 2.0, 3.0};
    const Tensor<Expr> eps = so3_structure_constants();
    for (int n = 0; n < 10; ++n) {
        const HamiltonPoint p = random_hamilton_point(body.model.dims(), rng);
        const auto v = hamilton_values(p);
        for (std::size_t al = 0; al < 3; ++al) {
            // mu-dot_alpha - mu_gamma C^gamma_{beta alpha} mu_beta / I_beta
            double expect = p.mud(al, 0, 0);
            for (std::size_t be = 0; be < 3; ++be)
                for (std::size_t g = 0; g < 3; ++g) expect -= p.mu(g, 0) * eval(eps(be, al, g), {}) * p.mu(be, 0) / I[be];
            CHECK(CompiledExpr(sys.dynamics(al), lay)(v) == doctest::Approx(expect).epsilon(1e-12));
        }
    }
}

TEST_CASE("Hamilton system degenerates to constancy") {
    Preset st = make_preset("standard");
    st.model.hamiltonian = Expr(0);
    const HamiltonSystem<Expr> sys = hamilton_symbolic(st.model);
    CHECK(structurally_equal(sys.admissibility(0, 0), Expr::var("ud1_1")));
    CHECK(structurally_equal(sys.admissibility(0, 1), Expr::var("ud1_2")));
    CHECK(structurally_equal(sys.dynamics(0), parse("mud1_1_1 + mud1_2_2")));

    std::mt19937_64 rng(64);
    HamiltonPoint p = random_hamilton_point(st.model.dims(), rng);
    for (auto& v : p.ud) v = 0.0;
    for (auto& v : p.mud) v = 0.0;
    const HamiltonSystem<double> r = hamilton_residual(st.model, p);
    CHECK(max_abs(r.admissibility) == 0.0);
    CHECK(max_abs(r.compatibility) == 0.0);
    CHECK(max_abs(r.dynamics) == 0.0);
}

TEST_CASE("Hamilton system with a connection matches the transcribed Lagrangian side") {
    // With H = |mu|^2/2 + V the Hamilton equations are the EL system with y -> mu.
    std::mt19937_64 rng(65);
    const Preset p = make_preset("standard_connection");
    const auto [nx, nu, r, k] = p.model.dims();
    const HamiltonSystem<Expr> sys = hamilton_symbolic(p.model);
    const auto el = el_symbolic(p.model);
    const auto adm = admissibility_symbolic(p.model.fib);
    const auto mor = morphism_symbolic(p.model.fib);
    std::map<std::string, Expr> swap;
    for (std::size_t A = 0; A < nu; ++A)
        for (std::size_t i = 0; i < nx; ++i) {
            swap[y_name(A, i)] = Expr::var(mu_name(A, i));
            for (std::size_t j = 0; j < nx; ++j) swap[yd_name(A, i, j)] = Expr::var(mud_name(A, i, j));
        }
    const VarLayout lay = hamilton_layout(p.model.dims());
    const auto check_same = [&](const Expr& a, const Expr& b) {
        const CompiledExpr c(a - substitute(b, swap), lay);
        double m = 0.0;
        for (int n = 0; n < 20; ++n) m = std::max(m, std::abs(c(hamilton_values(random_hamilton_point(p.model.dims(), rng)))));
        return m;
    };
    for (std::size_t A = 0; A < nu; ++A) {
        CHECK(check_same(sys.dynamics(A), el[A]) < 1e-12);
        for (std::size_t i = 0; i < nx; ++i) CHECK(check_same(sys.admissibility(A, i), adm(A, i)) < 1e-12);
        for (std::size_t i = 0; i < nx; ++i)
            for (std::size_t j = 0; j < nx; ++j)
                if (i != j) CHECK(check_same(sys.compatibility(A, i, j), mor(A, i, j)) < 1e-12);
    }
}

TEST_CASE("numeric Hamilton residual matches the symbolic one") {
    std::mt19937_64 rng(66);
    for (const char* name : {"so3", "standard_connection", "atiyah_curved", "poisson_sigma_so3", "time_dependent"}) {
        CAPTURE(name);
        const Preset p = make_preset(name);
        if (!p.model.hamiltonian) continue;
        const auto [nx, nu, r, k] = p.model.dims();
        const Expr& H = p.model.H();
        const VarLayout lay = hamilton_layout(p.model.dims());
        const HamiltonNumeric num(p.model.fib);
        for (int n = 0; n < 10; ++n) {
            const HamiltonPoint q = random_hamilton_point(p.model.dims(), rng);
            const auto v = hamilton_values(q);
            HamiltonDerivatives h{std::vector<double>(nu), Tensor<double>({k, r}), Tensor<double>({k, r, r})};
            for (std::size_t A = 0; A < nu; ++A) h.H_u[A] = eval_at(diff(H, u_name(A)), lay, v);
            for (std::size_t al = 0; al < k; ++al)
                for (std::size_t a = 0; a < r; ++a) {
                    const Expr hm = diff(H, mu_name(al, a));
                    h.H_mu(al, a) = eval_at(hm, lay, v);
                    for (std::size_t b = 0; b < r; ++b) {
                        double d = 0.0;
                        for (std::size_t i = 0; i < nx; ++i) {
                            double di = eval_at(diff(hm, x_name(i)), lay, v);
                            for (std::size_t A = 0; A < nu; ++A) di += eval_at(diff(hm, u_name(A)), lay, v) * q.ud(A, i);
                            for (std::size_t be = 0; be < k; ++be)
                                for (std::size_t c = 0; c < r; ++c)
                                    di += eval_at(diff(hm, mu_name(be, c)), lay, v) * q.mud(be, c, i);
                            d += eval_at(p.model.fib.rho_F(b, i), lay, v) * di;
                        }
                        h.DH_mu(al, a, b) = d;
                    }
                }
            const HamiltonSystem<double> a = hamilton_residual(p.model, q);
            const HamiltonSystem<double> b = num(q, h);
            for (std::size_t i = 0; i < a.admissibility.size(); ++i)
                CHECK(a.admissibility.flat(i) == doctest::Approx(b.admissibility.flat(i)).epsilon(1e-12));
            for (std::size_t i = 0; i < a.compatibility.size(); ++i)
                CHECK(a.compatibility.flat(i) == doctest::Approx(b.compatibility.flat(i)).epsilon(1e-12));
            for (std::size_t i = 0; i < a.dynamics.size(); ++i)
                CHECK(a.dynamics.flat(i) == doctest::Approx(b.dynamics.flat(i)).epsilon(1e-12));
        }
    }
}

TEST_CASE("Legendre transform") {
    std::mt19937_64 rng(67);
    const Preset st = make_preset("standard");
    const JetPoint p = random_second_jet(st.model.dims(), rng).j1;
    const MomentumPoint m = legendre(st.model, p);
    double ysq = 0.0;
    for (std::size_t i = 0; i < p.y.size(); ++i) {
        CHECK(m.mu.flat(i) == doctest::Approx(p.y.flat(i)));
        ysq += p.y.flat(i) * p.y.flat(i);
    }
    // mu0 = L - mu y with L = |y|^2/2 - u1^2/2
    CHECK(m.mu0 == doctest::Approx(-0.5 * ysq - 0.5 * p.u[0] * p.u[0]));

    const Preset body = make_preset("so3");
    const double I[3] = {1.0, 2.0, 3.0};
    const JetPoint q = random_second_jet(body.model.dims(), rng).j1;
    const MomentumPoint mb = legendre(body.model, q);
    double e = 0.0;
    for (std::size_t a = 0; a < 3; ++a) {
        CHECK(mb.mu(a, 0) == doctest::Approx(I[a] * q.y(a, 0)));
        e += 0.5 * I[a] * q.y(a, 0) * q.y(a, 0);
    }
    CHECK(mb.mu0 == doctest::Approx(-e));
    CHECK(hamiltonian_from_L(body.model, mb) == doctest::Approx(e));

    Preset lin = make_preset("standard");
    lin.model.lagrangian = parse("2*y1_1 - 3*y1_2");
    const MomentumPoint ml = legendre(lin.model, p);
    CHECK(ml.mu(0, 0) == 2.0);
    CHECK(ml.mu(0, 1) == -3.0);
    CHECK(ml.mu0 == doctest::Approx(0.0));
    CHECK_THROWS_AS((void)legendre_inverse(lin.model, ml), SingularHessian);
}

TEST_CASE("Legendre inverse") {
    std::mt19937_64 rng(68);
    const Preset st = make_preset("standard");
    const JetPoint p = random_second_jet(st.model.dims(), rng).j1;
    NewtonOptions one;
    one.max_iter = 1;
    const JetPoint back = legendre_inverse(st.model, legendre(st.model, p), one);
    for (std::size_t i = 0; i < p.y.size(); ++i) CHECK(back.y.flat(i) == doctest::Approx(p.y.flat(i)).epsilon(1e-14));

    const Preset body = make_preset("so3");
    for (int n = 0; n < 50; ++n) {
        const JetPoint q = random_second_jet(body.model.dims(), rng, -3.0, 3.0).j1;
        const JetPoint b = legendre_inverse(body.model, legendre(body.model, q));
        for (std::size_t i = 0; i < q.y.size(); ++i) CHECK(std::abs(b.y.flat(i) - q.y.flat(i)) < 1e-12);
    }

    // Non-quadratic but convex: L = sum cosh-like terms via exp.
    Preset nq = make_preset("free_particle");
    nq.model.lagrangian = parse("exp(y1_1) + exp(-y1_1) + y1_1^2/2 - u1^2/2");
    const LegendreTransform leg(nq.model);
    for (int n = 0; n < 20; ++n) {
        const JetPoint q = random_second_jet(nq.model.dims(), rng, -2.0, 2.0).j1;
        const JetPoint b = leg.inverse(leg.forward(q));
        CHECK(std::abs(b.y(0, 0) - q.y(0, 0)) < 1e-12);
        const MomentumPoint m = leg.forward(q);
        const double H = leg.hamiltonian(m);
        CHECK(H == doctest::Approx(m.mu(0, 0) * q.y(0, 0) - leg.lagrangian(q)).epsilon(1e-12));
    }
}

TEST_CASE("Hamiltonian from L") {
    std::mt19937_64 rng(69);
    Preset fp = make_preset("free_particle");
    const MomentumPoint m{{0.1}, {0.2}, Tensor<double>({1, 1}, 1.5), 0.0};
    CHECK(hamiltonian_from_L(fp.model, m) == doctest::Approx(0.5 * 1.5 * 1.5));
    const Preset body = make_preset("so3");
    MomentumPoint mb{{0.0}, {}, Tensor<double>({3, 1}), 0.0};
    mb.mu(0, 0) = 0.3;
    mb.mu(1, 0) = -1.0;
    mb.mu(2, 0) = 2.0;
    CHECK(hamiltonian_from_L(body.model, mb) == doctest::Approx(0.5 * (0.09 + 1.0 / 2.0 + 4.0 / 3.0)));
    for (const auto& name : preset_names()) {
        CAPTURE(name);
        const Preset p = make_preset(name);
        if (!p.model.lagrangian || !is_regular(hessian(p.model, random_second_jet(p.model.dims(), rng).j1))) continue;
        const JetPoint q = random_second_jet(p.model.dims(), rng).j1;
        const LegendreTransform leg(p.model);
        const MomentumPoint mq = leg.forward(q);
        double py = 0.0;
        for (std::size_t i = 0; i < q.y.size(); ++i) py += mq.mu.flat(i) * q.y.flat(i);
        CHECK(hamiltonian_from_L(p.model, mq) == doctest::Approx(py - leg.lagrangian(q)).epsilon(1e-10));
        if (p.model.hamiltonian) {
            VarLayout lay = dual_layout(p.model.dims());
            std::vector<double> v = q.x;
            v.insert(v.end(), q.u.begin(), q.u.end());
            v.insert(v.end(), mq.mu.begin(), mq.mu.end());
            CHECK(eval_at(p.model.H(), lay, v) == doctest::Approx(py - leg.lagrangian(q)).epsilon(1e-10));
        }
    }
}

TEST_CASE("extended Legendre map pulls Theta back to Theta_L") {
    std::mt19937_64 rng(70);
    for (const auto& name : preset_names()) {
        CAPTURE(name);
        const Preset p = make_preset(name);
        const ProlongationSpec prol = prolongation(p.model.fib);
        const ProlongationSpec ext = dual_prolongation(p.model.fib, true);
        const AlgebroidForm lhs = pullback(extended_legendre_map(p.model, prol, ext), ext.basis, extended_canonical_form(ext));
        CHECK(max_form(lhs - cartan_form(p.model, prol), jet_layout(p.model.dims(), false), p.model.box, rng) < 1e-10);
    }
}

TEST_CASE("equivalence check") {
    // Rigid body trajectory mapped to momenta.
    const Preset body = make_preset("so3");
    IntegrateOptions o;
    o.t1 = 2.0;
    o.dt = 1e-3;
    const Trajectory tr = integrate_1d(body.model, {}, {1.0, 0.1, 0.1}, o);
    FieldConfiguration f;
    f.grid = Grid({Axis{0.0, 2.0, tr.rows.size()}});
    for (std::size_t al = 0; al < 3; ++al) f.fibre.push_back(tr.column(y_name(al, 0)));
    const EquivalenceResult eq = equivalence_check(body.model, f);
    for (const auto& b : eq.hamiltonian.blocks) CHECK(b.max < 1e-6);
    for (const auto& b : eq.lagrangian.blocks) CHECK(b.max < 1e-6);
    CHECK(eq.hamiltonian_field.side == FieldSide::Hamiltonian);
    CHECK(eq.hamiltonian_field.fibre[1][10] == doctest::Approx(2.0 * f.fibre[1][10]));

    // Perturbed trajectory is not a solution.
    FieldConfiguration bad = f;
    for (std::size_t n = 0; n < bad.fibre[0].size(); ++n) bad.fibre[0][n] += 0.01 * std::sin(3.0 * 2.0 * n / (bad.fibre[0].size() - 1));
    const EquivalenceResult eb = equivalence_check(body.model, bad);
    CHECK(eb.hamiltonian.block("hamilton_iii").max > 10 * 1e-6);
    CHECK_FALSE(eb.hamiltonian.pass());

    // Free particle straight line, implicit H route.
    Preset fp = make_preset("free_particle");
    fp.model.hamiltonian.reset();
    FieldConfiguration line;
    line.grid = Grid({Axis{0.0, 1.0, 11}});
    line.u.push_back({});
    line.fibre.push_back({});
    for (std::size_t n = 0; n < 11; ++n) {
        line.u[0].push_back(0.5 + 0.7 * 0.1 * n);
        line.fibre[0].push_back(0.7);
    }
    const EquivalenceResult el = equivalence_check(fp.model, line);
    for (const auto& b : el.hamiltonian.blocks) CHECK(b.max < 1e-14);
}
