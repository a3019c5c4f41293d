#include "liefield/derive.hpp"

#include <regex>

#include "liefield/jet.hpp"
#include "liefield/lagrangian.hpp"

namespace liefield {

namespace {

std::string key(const char* kind, std::initializer_list<std::size_t> idx) {
    std::string s = kind;
    for (std::size_t i : idx) s += " " + std::to_string(i + 1);
    return s;
}

// Shared layout of both sides: [A][a], [alpha][b][c] upper triangle, [alpha].
std::vector<Equation> assemble(const FibrationDims& d, const char* names[3], const Tensor<Expr>& first,
                               const Tensor<Expr>& second, const std::vector<Expr>& third) {
    std::vector<Equation> out;
    for (std::size_t A = 0; A < d.nu; ++A)
        for (std::size_t a = 0; a < d.r; ++a) out.push_back({key(names[0], {A, a}), first(A, a)});
    for (std::size_t al = 0; al < d.k; ++al)
        for (std::size_t b = 0; b < d.r; ++b)
            for (std::size_t c = b + 1; c < d.r; ++c) out.push_back({key(names[1], {al, b, c}), second(al, b, c)});
    for (std::size_t al = 0; al < d.k; ++al) out.push_back({key(names[2], {al}), third[al]});
    return out;
}

}  // namespace

std::vector<Equation> lagrangian_equations(const ModelSpec& model) {
    (void)model.L();
    const char* names[3] = {"admissibility", "morphism", "el"};
    return assemble(model.dims(), names, admissibility_symbolic(model.fib), morphism_symbolic(model.fib),
                    el_symbolic(model));
}

std::vector<Equation> hamilton_equations(const ModelSpec& model) {
    (void)model.H();
    const HamiltonSystem<Expr> h = hamilton_symbolic(model);
    std::vector<Expr> dyn(h.dynamics.begin(), h.dynamics.end());
    const char* names[3] = {"hamilton_i", "hamilton_ii", "hamilton_iii"};
    return assemble(model.dims(), names, h.admissibility, h.compatibility, dyn);
}

std::string format_equations(const std::vector<Equation>& eqs, PrintStyle style) {
    std::string out;
    for (const auto& e : eqs) {
        const Expr s = simplify(e.residual);
        if (style == PrintStyle::Latex)
            out += "\\text{" + std::regex_replace(e.name, std::regex("_"), "\\_") + "}: " + print(s, style, latex_name) +
                   " = 0\n";
        else
            out += e.name + " = " + print(s) + "\n";
    }
    return out;
}

std::string latex_name(const std::string& var) {
    static const std::regex x(R"(x(\d+))"), u(R"(u(\d+))"), y(R"(y(\d+)_(\d+))"), yd(R"(yd(\d+)_(\d+)_(\d+))"),
        ud(R"(ud(\d+)_(\d+))"), mu(R"(mu(\d+)_(\d+))"), mud(R"(mud(\d+)_(\d+)_(\d+))");
    std::smatch m;
    if (std::regex_match(var, m, x)) return "x^{" + m.str(1) + "}";
    if (std::regex_match(var, m, u)) return "u^{" + m.str(1) + "}";
    if (std::regex_match(var, m, y)) return "y^{" + m.str(1) + "}_{" + m.str(2) + "}";
    if (std::regex_match(var, m, yd)) return "y^{" + m.str(1) + "}_{" + m.str(2) + ";" + m.str(3) + "}";
    if (std::regex_match(var, m, ud)) return "u^{" + m.str(1) + "}_{," + m.str(2) + "}";
    if (std::regex_match(var, m, mu)) return "\\mu_{" + m.str(1) + "}^{" + m.str(2) + "}";
    if (std::regex_match(var, m, mud)) return "\\mu_{" + m.str(1) + "}^{" + m.str(2) + "}{}_{," + m.str(3) + "}";
    if (var == "mu0") return "\\mu_{0}";
    return "\\mathrm{" + var + "}";
}

}  // namespace liefield
