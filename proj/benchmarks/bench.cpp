#include <benchmark/benchmark.h>

#include "liefield/derive.hpp"
#include "liefield/exterior.hpp"
#include "liefield/fields.hpp"
#include "liefield/presets.hpp"

using namespace liefield;

namespace {

void BM_ParseDiffSimplify(benchmark::State& state) {
    const std::string text = "exp(x1*x2/2)*sin(u1 + 2*x2)/(1 + u1^2) - sqrt(1 + x1^2)*cos(x2)";
    for (auto _ : state) {
        const Expr e = parse(text);
        benchmark::DoNotOptimize(simplify(diff(diff(e, "x1"), "u1")));
    }
}
BENCHMARK(BM_ParseDiffSimplify);

void BM_CompiledEval(benchmark::State& state) {
    const Expr e = parse("exp(x1*x2/2)*sin(u1 + 2*x2)/(1 + u1^2) - sqrt(1 + x1^2)*cos(x2)");
    const CompiledExpr c(e, VarLayout({"x1", "x2", "u1"}));
    std::vector<double> v = {0.3, -0.2, 0.7};
    for (auto _ : state) {
        v[0] += 1e-9;
        benchmark::DoNotOptimize(c(v));
    }
}
BENCHMARK(BM_CompiledEval);

void BM_Validate(benchmark::State& state, const char* name) {
    const FibrationSpec fib = make_preset(name).model.fib;
    for (auto _ : state) benchmark::DoNotOptimize(validate(fib).pass());
}
BENCHMARK_CAPTURE(BM_Validate, so3, "so3");
BENCHMARK_CAPTURE(BM_Validate, atiyah_curved, "atiyah_curved");
BENCHMARK_CAPTURE(BM_Validate, poisson_sigma_so3, "poisson_sigma_so3");

void BM_DeriveEquations(benchmark::State& state, const char* name) {
    const ModelSpec m = make_preset(name).model;
    for (auto _ : state) benchmark::DoNotOptimize(format_equations(lagrangian_equations(m)));
}
BENCHMARK_CAPTURE(BM_DeriveEquations, standard_connection, "standard_connection");
BENCHMARK_CAPTURE(BM_DeriveEquations, poisson_sigma_so3, "poisson_sigma_so3");

void BM_MultisymplecticForm(benchmark::State& state) {
    const ModelSpec m = make_preset("atiyah_curved").model;
    const ProlongationSpec prol = prolongation(m.fib);
    for (auto _ : state) benchmark::DoNotOptimize(multisymplectic_form(m, prol));
}
BENCHMARK(BM_MultisymplecticForm);

void BM_ResidualReport(benchmark::State& state) {
    const Preset p = make_preset("poisson_sigma");
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const Grid grid({Axis{0.0, 1.0, n}, Axis{0.0, 1.0, n}});
    SectionFieldExpr s{{parse("-exp(x1*x2/2)"), parse("sin(x1)*cos(x2)")}, Tensor<Expr>({2, 2})};
    for (std::size_t a = 0; a < 2; ++a) {
        s.y(0, a) = diff(s.u[1], x_name(a));
        s.y(1, a) = -diff(s.u[0], x_name(a));
    }
    const FieldConfiguration f = sample_field(grid, p.model.dims(), s);
    ResidualOptions o;
    o.threads = static_cast<unsigned>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(residual_report(p.model, f, o).pass());
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * grid.nodes()));
}
BENCHMARK(BM_ResidualReport)->Args({101, 1})->Args({101, 0})->Args({201, 0})->Unit(benchmark::kMillisecond);

void BM_IntegrateRigidBody(benchmark::State& state) {
    const ModelSpec m = make_preset("so3").model;
    IntegrateOptions o;
    o.t1 = 10.0;
    o.dt = 1e-3;
    o.record_every = 100;
    for (auto _ : state) benchmark::DoNotOptimize(integrate_1d(m, {}, {1.0, 0.1, 0.5}, o).rows.size());
}
BENCHMARK(BM_IntegrateRigidBody)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
