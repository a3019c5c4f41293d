#include "liefield/algebroid.hpp"

#include <algorithm>

namespace liefield {

namespace {
std::string idx(std::size_t i) { return std::to_string(i + 1); }
}  // namespace

std::string x_name(std::size_t i) { return "x" + idx(i); }
std::string u_name(std::size_t A) { return "u" + idx(A); }
std::string y_name(std::size_t alpha, std::size_t a) { return "y" + idx(alpha) + "_" + idx(a); }
std::string yd_name(std::size_t alpha, std::size_t a, std::size_t b) {
    return "yd" + idx(alpha) + "_" + idx(a) + "_" + idx(b);
}
std::string mu_name(std::size_t alpha, std::size_t a) { return "mu" + idx(alpha) + "_" + idx(a); }
std::string ud_name(std::size_t A, std::size_t i) { return "ud" + idx(A) + "_" + idx(i); }
std::string mud_name(std::size_t alpha, std::size_t a, std::size_t i) {
    return "mud" + idx(alpha) + "_" + idx(a) + "_" + idx(i);
}

FibrationSpec::FibrationSpec(FibrationDims d)
    : dims(d),
      rho_F({d.r, d.nx}),
      rho_Ea({d.r, d.nu}),
      rho_Ealpha({d.k, d.nu}),
      C_bas({d.r, d.r, d.r}),
      C_mix0({d.r, d.r, d.k}),
      C_mix1({d.r, d.k, d.k}),
      C_vert({d.k, d.k, d.k}) {}

std::vector<std::string> FibrationSpec::x_names() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < dims.nx; ++i) out.push_back(x_name(i));
    return out;
}

std::vector<std::string> FibrationSpec::u_names() const {
    std::vector<std::string> out;
    for (std::size_t A = 0; A < dims.nu; ++A) out.push_back(u_name(A));
    return out;
}

std::vector<std::string> FibrationSpec::base_coords() const {
    auto out = x_names();
    for (auto& u : u_names()) out.push_back(u);
    return out;
}

void FibrationSpec::check() const {
    const auto [nx, nu, r, k] = dims;
    const auto shape = [](const Tensor<Expr>& t, std::vector<std::size_t> s, const char* what) {
        if (t.shape() != s) throw ShapeError(std::string(what) + " has wrong shape");
    };
    shape(rho_F, {r, nx}, "rho_F");
    shape(rho_Ea, {r, nu}, "rho_Ea");
    shape(rho_Ealpha, {k, nu}, "rho_Ealpha");
    shape(C_bas, {r, r, r}, "C_bas");
    shape(C_mix0, {r, r, k}, "C_mix0");
    shape(C_mix1, {r, k, k}, "C_mix1");
    shape(C_vert, {k, k, k}, "C_vert");

    const VarLayout xs(x_names());
    const VarLayout xu(base_coords());
    const auto deps = [](const Tensor<Expr>& t, const VarLayout& allowed, const char* what) {
        for (const auto& e : t) {
            for (const auto& v : free_variables(e)) {
                if (!allowed.contains(v)) {
                    throw ShapeError(std::string(what) + " depends on '" + v + "', which is not allowed there");
                }
            }
        }
    };
    deps(rho_F, xs, "rho_F");
    deps(C_bas, xs, "C_bas");
    deps(rho_Ea, xu, "rho_Ea");
    deps(rho_Ealpha, xu, "rho_Ealpha");
    deps(C_mix0, xu, "C_mix0");
    deps(C_mix1, xu, "C_mix1");
    deps(C_vert, xu, "C_vert");
}

Expr FibrationSpec::total_C(std::size_t A, std::size_t B, std::size_t D) const {
    const std::size_t r = dims.r;
    const bool a_bas = A < r, b_bas = B < r, d_bas = D < r;
    if (d_bas) {
        if (a_bas && b_bas) return C_bas(A, B, D);
        return Expr(0);
    }
    const std::size_t g = D - r;
    if (a_bas && b_bas) return C_mix0(A, B, g);
    if (a_bas) return C_mix1(A, B - r, g);
    if (b_bas) return -C_mix1(B, A - r, g);
    return C_vert(A - r, B - r, g);
}

Expr FibrationSpec::total_anchor(std::size_t A, std::size_t j) const {
    const std::size_t r = dims.r, nx = dims.nx;
    if (A < r) return j < nx ? rho_F(A, j) : rho_Ea(A, j - nx);
    return j < nx ? Expr(0) : rho_Ealpha(A - r, j - nx);
}

AnchoredBasisSpec total_basis(const FibrationSpec& spec) {
    spec.check();
    const std::size_t R = spec.dims.r + spec.dims.k;
    AnchoredBasisSpec out(spec.base_coords(), R);
    for (std::size_t A = 0; A < R; ++A)
        for (std::size_t j = 0; j < out.ncoords(); ++j) out.anchor(A, j) = spec.total_anchor(A, j);
    for (std::size_t A = 0; A < R; ++A)
        for (std::size_t B = 0; B < R; ++B)
            for (std::size_t D = 0; D < R; ++D) out.C(A, B, D) = spec.total_C(A, B, D);
    return out;
}

std::vector<double> BasePoint::coords() const {
    std::vector<double> out = x;
    out.insert(out.end(), u.begin(), u.end());
    return out;
}

StructureResiduals structure_residuals(const FibrationSpec& spec, const BasePoint& p) {
    if (p.x.size() != spec.dims.nx || p.u.size() != spec.dims.nu) throw ShapeError("base point has wrong dimension");
    const StructureChecker checker(total_basis(spec));
    const auto c = p.coords();
    return checker.at(c);
}

void SampleBox::set(const std::string& var, double lo, double hi) {
    if (!(lo <= hi)) throw ShapeError("sample box interval for '" + var + "' is empty");
    ranges_[var] = {lo, hi};
}

std::pair<double, double> SampleBox::range(const std::string& var) const {
    auto it = ranges_.find(var);
    return it == ranges_.end() ? std::pair{-1.0, 1.0} : it->second;
}

std::vector<double> SampleBox::sample(const std::vector<std::string>& vars, std::mt19937_64& rng) const {
    std::vector<double> out;
    out.reserve(vars.size());
    for (const auto& v : vars) {
        const auto [lo, hi] = range(v);
        out.push_back(std::uniform_real_distribution<double>(lo, hi)(rng));
    }
    return out;
}

ValidationReport validate(const AnchoredBasisSpec& spec, const ValidationOptions& opts) {
    const StructureChecker checker(spec);
    std::mt19937_64 rng(opts.seed);
    ValidationReport rep;
    rep.tol = opts.tol;
    for (std::size_t n = 0; n < opts.points; ++n) {
        const auto p = opts.box.sample(spec.coords, rng);
        const auto res = checker.at(p);
        rep.max_anchor = std::max(rep.max_anchor, res.max_anchor());
        rep.max_jacobi = std::max(rep.max_jacobi, res.max_jacobi());
        rep.max_antisym = std::max(rep.max_antisym, res.max_antisym());
        ++rep.points;
    }
    return rep;
}

ValidationReport validate(const FibrationSpec& spec, const ValidationOptions& opts) {
    return validate(total_basis(spec), opts);
}

SectionExpr bracket(const FibrationSpec& spec, const SectionExpr& s, const SectionExpr& t) {
    return bracket(total_basis(spec), s, t);
}

std::vector<double> anchor_apply(const FibrationSpec& spec, const std::vector<double>& s, const BasePoint& p) {
    const std::size_t R = spec.dims.r + spec.dims.k;
    if (s.size() != R) throw ShapeError("section has wrong length");
    const auto names = spec.base_coords();
    const VarLayout lay(names);
    const auto c = p.coords();
    std::vector<double> out(names.size(), 0.0);
    for (std::size_t A = 0; A < R; ++A) {
        if (s[A] == 0.0) continue;
        for (std::size_t j = 0; j < names.size(); ++j) {
            out[j] += s[A] * CompiledExpr(spec.total_anchor(A, j), lay)(c);
        }
    }
    return out;
}

}  // namespace liefield
