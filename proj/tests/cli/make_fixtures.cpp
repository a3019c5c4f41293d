// Writes the model and field files used by the command line tests into argv[1].

#include <fstream>
#include <iostream>

#include "liefield/presets.hpp"
#include "liefield/spec_io.hpp"

using namespace liefield;

namespace {

SectionFieldExpr sigma_solution(const Expr& psi1, const Expr& psi2) {
    SectionFieldExpr s{{-psi2, psi1}, Tensor<Expr>({2, 2})};
    for (std::size_t a = 0; a < 2; ++a) {
        s.y(0, a) = diff(psi1, x_name(a));
        s.y(1, a) = diff(psi2, x_name(a));
    }
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: make_fixtures <dir>\n";
        return 2;
    }
    const std::string dir = argv[1];

    Preset so3 = make_preset("so3");
    so3.model.fib.C_vert(0, 1, 2) = parse("1.001");
    so3.model.fib.name = "so3_perturbed";
    save_spec(so3.model, dir + "/so3_perturbed.json");

    std::ofstream(dir + "/malformed.json") << "{ \"name\": \"broken\", \"dims\": {\"nx\": 1,\n";

    Preset lin = make_preset("free_particle");
    lin.model.lagrangian = parse("y1_1 - u1^2/2");
    lin.model.fib.name = "linear";
    save_spec(lin.model, dir + "/linear.json");

    const Preset sigma = make_preset("poisson_sigma");
    const FibrationDims d = sigma.model.dims();
    const Grid grid({Axis{0.0, 1.0, 101}, Axis{0.0, 1.0, 101}});
    const SectionFieldExpr exact =
        sigma_solution(parse("sin(x1)*cos(x2)"), parse("exp(x1*x2/2) + sin(x1 + 2*x2)/3"));
    save_field(d, sample_field(grid, d, exact), dir + "/sigma_exact.field.json");
    SectionFieldExpr bumped = exact;
    bumped.u[0] = bumped.u[0] + parse("0.01*sin(3*x1)*x2");
    save_field(d, sample_field(grid, d, bumped), dir + "/sigma_perturbed.field.json");

    const Preset st = make_preset("standard");
    SectionFieldExpr plane{{parse("x1*x2")}, Tensor<Expr>({1, 2})};
    save_field(st.model.dims(), sample_field(Grid({Axis{0.0, 1.0, 5}, Axis{0.0, 1.0, 5}}), st.model.dims(), plane),
               dir + "/standard.field.json");
    return 0;
}
