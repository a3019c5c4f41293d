// liefield: validate, derive and check field theories on Lie algebroids.
//
// Exit codes: 0 success, 1 failed check / missing L or H / singular Hessian,
// 2 unreadable, malformed or mismatched input. Reports go to stdout, diagnostics to stderr.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "liefield/derive.hpp"
#include "liefield/fields.hpp"
#include "liefield/presets.hpp"
#include "liefield/spec_io.hpp"

using json = nlohmann::json;
using namespace liefield;

namespace {

struct Globals {
    double tol = 1e-8;
    std::uint64_t seed = 0;
    bool json = false;
};

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

int cmd_validate(const Globals& g, const std::string& path) {
    const ModelSpec m = load_spec(path);
    ValidationOptions o;
    o.tol = g.tol;
    o.seed = g.seed;
    o.box = m.box;
    const ValidationReport r = validate(m.fib, o);
    if (g.json) {
        emit({{"spec", m.fib.name},
              {"pass", r.pass()},
              {"tol", r.tol},
              {"points", r.points},
              {"max_anchor", r.max_anchor},
              {"max_jacobi", r.max_jacobi},
              {"max_antisymmetry", r.max_antisym}});
    } else {
        std::cout << m.fib.name << ": " << (r.pass() ? "PASS" : "FAIL") << " (" << r.points << " points, tol " << r.tol
                  << ")\n"
                  << "  anchor residual    " << r.max_anchor << '\n'
                  << "  jacobi residual    " << r.max_jacobi << '\n'
                  << "  antisymmetry       " << r.max_antisym << '\n';
    }
    return r.pass() ? 0 : 1;
}

int cmd_derive(const Globals& g, const std::string& path, const std::string& side, const std::string& format) {
    const ModelSpec m = load_spec(path);
    const PrintStyle style = format == "latex" ? PrintStyle::Latex : PrintStyle::Text;
    std::vector<std::pair<std::string, std::vector<Equation>>> parts;
    if (side == "el" || side == "both") parts.emplace_back("lagrangian", lagrangian_equations(m));
    if (side == "hamilton" || side == "both") parts.emplace_back("hamiltonian", hamilton_equations(m));
    if (g.json) {
        json out = {{"spec", m.fib.name}};
        for (const auto& [name, eqs] : parts) {
            json block = json::object();
            for (const auto& e : eqs) block[e.name] = print(simplify(e.residual), style, latex_name);
            out[name] = block;
        }
        emit(out);
        return 0;
    }
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts.size() > 1) std::cout << (i ? "\n" : "") << "# " << parts[i].first << '\n';
        std::cout << format_equations(parts[i].second, style);
    }
    return 0;
}

void print_report(const ResidualReport& r) {
    std::cout << (r.pass() ? "PASS" : "FAIL") << " (" << r.nodes_used << " nodes, tol " << r.tol << ")\n";
    for (const auto& b : r.blocks) std::cout << "  " << b.name << "  max " << b.max << "  rms " << b.rms << '\n';
}

json report_json(const ResidualReport& r) {
    json blocks = json::array();
    for (const auto& b : r.blocks) blocks.push_back({{"name", b.name}, {"max", b.max}, {"rms", b.rms}});
    return {{"pass", r.pass()}, {"tol", r.tol}, {"nodes", r.nodes_used}, {"blocks", blocks}};
}

void write_to(const std::string& path, const std::function<void(std::ostream&)>& writer) {
    if (path == "-") {
        writer(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw SpecError("", "cannot write '" + path + "'");
    writer(out);
}

int cmd_residual(const Globals& g, const std::string& spec_path, const std::string& field_path,
                 const std::string& csv, bool boundary, unsigned threads) {
    const ModelSpec m = load_spec(spec_path);
    const FieldConfiguration f = load_field(field_path, m.dims());
    ResidualOptions o;
    o.tol = g.tol;
    o.include_boundary = boundary;
    o.threads = threads;
    const ResidualReport r = residual_report(m, f, o);
    if (!csv.empty()) write_to(csv, [&](std::ostream& os) { write_field_csv(os, m.dims(), f, &r); });
    if (csv != "-") {
        if (g.json) {
            json j = report_json(r);
            j["spec"] = m.fib.name;
            emit(j);
        } else {
            print_report(r);
        }
    }
    return r.pass() ? 0 : 1;
}

int cmd_simulate(const Globals& g, const std::string& path, const std::vector<double>& u0, const std::vector<double>& y0,
                 double t, double dt, std::size_t every, const std::string& out) {
    const ModelSpec m = load_spec(path);
    IntegrateOptions o;
    o.t1 = t;
    o.dt = dt;
    o.record_every = every;
    const Trajectory tr = integrate_1d(m, u0, y0, o);
    write_to(out, [&](std::ostream& os) { tr.write_csv(os); });
    if (out == "-") return 0;

    json drift = json::object();
    for (std::size_t c = 1 + tr.nu + tr.k; c < tr.columns.size(); ++c) {
        double d = 0.0;
        for (const auto& row : tr.rows) d = std::max(d, std::abs(row[c] - tr.rows.front()[c]));
        drift[tr.columns[c]] = d;
    }
    if (g.json) {
        emit({{"spec", m.fib.name}, {"rows", tr.rows.size()}, {"out", out}, {"max_drift", drift}});
    } else {
        std::cout << m.fib.name << ": " << tr.rows.size() << " rows written to " << out << '\n';
        for (const auto& [name, d] : drift.items()) std::cout << "  max drift " << name << "  " << d.get<double>() << '\n';
    }
    return 0;
}

int cmd_preset_list(const Globals& g) {
    if (g.json) {
        json names = json::array();
        for (const auto& n : preset_names()) names.push_back({{"name", n}, {"doc", make_preset(n).doc}});
        emit(names);
        return 0;
    }
    for (const auto& n : preset_names()) std::cout << n << "  " << make_preset(n).doc << '\n';
    return 0;
}

int cmd_preset_export(const std::string& name, const std::string& path) {
    const Preset p = make_preset(name);
    if (path == "-")
        std::cout << spec_to_json(p.model);
    else
        save_spec(p.model, path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Field theories on Lie algebroids: structure checks, field equations, residuals, mechanics."};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--tol", g.tol, "Tolerance for validation and residual checks")->capture_default_str();
    app.add_option("--seed", g.seed, "Seed for random sample points")->capture_default_str();
    app.add_flag("--json", g.json, "Machine-readable reports");

    std::string spec, field, side = "el", format = "text", csv, out = "-", name, path;
    std::vector<double> u0, y0;
    double t = 10.0, dt = 1e-3;
    std::size_t every = 1;
    bool boundary = false;
    unsigned threads = 0;

    auto* validate_cmd = app.add_subcommand("validate", "Check anchor, Jacobi and antisymmetry at random points");
    validate_cmd->add_option("spec", spec, "Spec file")->required();

    auto* derive_cmd = app.add_subcommand("derive", "Print the field equations");
    derive_cmd->add_option("spec", spec, "Spec file")->required();
    derive_cmd->add_option("--side", side, "el, hamilton or both")
        ->check(CLI::IsMember({"el", "hamilton", "both"}))
        ->capture_default_str();
    derive_cmd->add_option("--format", format, "text or latex")->check(CLI::IsMember({"text", "latex"}))->capture_default_str();

    auto* residual_cmd = app.add_subcommand("residual", "Evaluate the field equations on a sampled field");
    residual_cmd->add_option("spec", spec, "Spec file")->required();
    residual_cmd->add_option("field", field, "Field file")->required();
    residual_cmd->add_option("--csv", csv, "Write per-node residuals as CSV ('-' for stdout)");
    residual_cmd->add_flag("--boundary", boundary, "Include boundary nodes");
    residual_cmd->add_option("--threads", threads, "Worker threads (0: all cores)");

    auto* simulate_cmd = app.add_subcommand("simulate", "Integrate a mechanical system (nx = r = 1) with RK4");
    simulate_cmd->add_option("spec", spec, "Spec file")->required();
    simulate_cmd->add_option("--u0", u0, "Initial u")->delimiter(',');
    simulate_cmd->add_option("--y0", y0, "Initial y")->delimiter(',');
    simulate_cmd->add_option("--t", t, "Final time")->capture_default_str();
    simulate_cmd->add_option("--dt", dt, "Step size")->capture_default_str();
    simulate_cmd->add_option("--every", every, "Record every n-th step")->capture_default_str();
    simulate_cmd->add_option("--out", out, "CSV output ('-' for stdout)")->capture_default_str();

    auto* preset_cmd = app.add_subcommand("preset", "Built-in models");
    preset_cmd->require_subcommand(1);
    auto* list_cmd = preset_cmd->add_subcommand("list", "List presets");
    auto* export_cmd = preset_cmd->add_subcommand("export", "Write a preset as a spec file");
    export_cmd->add_option("name", name, "Preset name")->required();
    export_cmd->add_option("path", path, "Output path ('-' for stdout)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (*validate_cmd) return cmd_validate(g, spec);
        if (*derive_cmd) return cmd_derive(g, spec, side, format);
        if (*residual_cmd) return cmd_residual(g, spec, field, csv, boundary, threads);
        if (*simulate_cmd) return cmd_simulate(g, spec, u0, y0, t, dt, every, out);
        if (*list_cmd) return cmd_preset_list(g);
        if (*export_cmd) return cmd_preset_export(name, path);
    } catch (const MissingFunction& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const SingularHessian& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const SpecError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const ShapeError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const PresetError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
