#include "liefield/spec_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace liefield {

namespace {

using json = nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SpecError("", "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SpecError("", "cannot write '" + path + "'");
    out << text;
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw SpecError("", std::string("malformed JSON at byte ") + std::to_string(e.byte) + ": " + e.what());
    }
}

Expr parse_entry(const json& j, const std::string& where) {
    if (j.is_number_integer()) return Expr(j.get<std::int64_t>());
    if (j.is_number()) return Expr(j.get<double>());
    if (!j.is_string()) throw SpecError(where, "expected an expression string");
    const std::string text = j.get<std::string>();
    try {
        return parse(text);
    } catch (const ParseError& e) {
        std::string exp;
        for (const auto& s : e.expected()) exp += (exp.empty() ? "" : ", ") + s;
        throw SpecError(where, "cannot parse \"" + text + "\" at offset " + std::to_string(e.offset()) +
                                   (exp.empty() ? "" : " (expected " + exp + ")"));
    }
}

std::size_t get_size(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) throw SpecError(where, std::string("missing '") + key + "'");
    const json& v = obj.at(key);
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) throw SpecError(where + "/" + key, "expected a non-negative integer");
    return v.get<std::size_t>();
}

void read_array(const json& doc, const char* key, Tensor<Expr>& out) {
    if (!doc.contains(key)) return;  // absent arrays are zero
    const std::string root = std::string("/") + key;
    const auto& shape = out.shape();
    std::vector<std::size_t> idx;
    const auto rec = [&](auto&& self, const json& j, std::size_t depth, const std::string& where) -> void {
        if (depth == shape.size()) {
            std::size_t flat = 0;
            for (std::size_t d = 0; d < shape.size(); ++d) flat = flat * shape[d] + idx[d];
            out.flat(flat) = parse_entry(j, where);
            return;
        }
        if (!j.is_array()) throw SpecError(where, "expected an array");
        if (j.size() != shape[depth])
            throw SpecError(where, "expected " + std::to_string(shape[depth]) + " entries, found " + std::to_string(j.size()));
        for (std::size_t i = 0; i < j.size(); ++i) {
            idx.push_back(i);
            self(self, j[i], depth + 1, where + "/" + std::to_string(i));
            idx.pop_back();
        }
    };
    // Arrays with a zero dimension carry no entries; only the outer length is checked.
    if (out.size() == 0) {
        const json& j = doc.at(key);
        if (!j.is_array()) throw SpecError(root, "expected an array");
        if (!shape.empty() && j.size() != shape[0])
            throw SpecError(root, "expected " + std::to_string(shape[0]) + " entries, found " + std::to_string(j.size()));
        return;
    }
    rec(rec, doc.at(key), 0, root);
}

json write_array(const Tensor<Expr>& t) {
    const auto& shape = t.shape();
    std::size_t flat = 0;
    const auto rec = [&](auto&& self, std::size_t depth) -> json {
        if (depth == shape.size()) return json(to_string(t.flat(flat++)));
        json arr = json::array();
        for (std::size_t i = 0; i < shape[depth]; ++i) arr.push_back(self(self, depth + 1));
        return arr;
    };
    return rec(rec, 0);
}

FibrationDims read_dims(const json& doc) {
    if (!doc.contains("dims") || !doc.at("dims").is_object()) throw SpecError("/dims", "missing dimension block");
    const json& d = doc.at("dims");
    return {get_size(d, "nx", "/dims"), get_size(d, "nu", "/dims"), get_size(d, "r", "/dims"), get_size(d, "k", "/dims")};
}

json dims_json(const FibrationDims& d) { return {{"nx", d.nx}, {"nu", d.nu}, {"r", d.r}, {"k", d.k}}; }

}  // namespace

ModelSpec parse_spec(const std::string& json_text) {
    const json doc = parse_json(json_text);
    if (!doc.is_object()) throw SpecError("", "spec must be a JSON object");
    ModelSpec m;
    m.fib = FibrationSpec(read_dims(doc));
    if (doc.contains("name")) {
        if (!doc.at("name").is_string()) throw SpecError("/name", "expected a string");
        m.fib.name = doc.at("name").get<std::string>();
    }
    if (doc.contains("description") && doc.at("description").is_string()) m.description = doc.at("description").get<std::string>();
    read_array(doc, "rho_F", m.fib.rho_F);
    read_array(doc, "rho_Ea", m.fib.rho_Ea);
    read_array(doc, "rho_Ealpha", m.fib.rho_Ealpha);
    read_array(doc, "C_bas", m.fib.C_bas);
    read_array(doc, "C_mix0", m.fib.C_mix0);
    read_array(doc, "C_mix1", m.fib.C_mix1);
    read_array(doc, "C_vert", m.fib.C_vert);
    if (doc.contains("lagrangian") && !doc.at("lagrangian").is_null()) m.lagrangian = parse_entry(doc.at("lagrangian"), "/lagrangian");
    if (doc.contains("hamiltonian") && !doc.at("hamiltonian").is_null())
        m.hamiltonian = parse_entry(doc.at("hamiltonian"), "/hamiltonian");
    if (doc.contains("currents")) {
        const json& c = doc.at("currents");
        if (!c.is_object()) throw SpecError("/currents", "expected an object");
        for (const auto& [name, e] : c.items()) m.currents[name] = parse_entry(e, "/currents/" + name);
    }
    if (doc.contains("sample_box")) {
        const json& b = doc.at("sample_box");
        if (!b.is_object()) throw SpecError("/sample_box", "expected an object");
        for (const auto& [name, range] : b.items()) {
            const std::string where = "/sample_box/" + name;
            if (!range.is_array() || range.size() != 2 || !range[0].is_number() || !range[1].is_number())
                throw SpecError(where, "expected [lo, hi]");
            const double lo = range[0].get<double>(), hi = range[1].get<double>();
            if (!(hi > lo)) throw SpecError(where, "empty interval");
            m.box.set(name, lo, hi);
        }
    }
    if (doc.contains("tolerances")) {
        const json& t = doc.at("tolerances");
        if (!t.is_object()) throw SpecError("/tolerances", "expected an object");
        if (t.contains("validate")) m.tolerances.validate = t.at("validate").get<double>();
        if (t.contains("residual")) m.tolerances.residual = t.at("residual").get<double>();
    }
    try {
        m.check();
    } catch (const ShapeError& e) {
        throw SpecError("", e.what());
    }
    return m;
}

ModelSpec load_spec(const std::string& path) { return parse_spec(read_file(path)); }

std::string spec_to_json(const ModelSpec& m, int indent) {
    json doc;
    doc["name"] = m.fib.name;
    if (!m.description.empty()) doc["description"] = m.description;
    doc["dims"] = dims_json(m.dims());
    doc["rho_F"] = write_array(m.fib.rho_F);
    doc["rho_Ea"] = write_array(m.fib.rho_Ea);
    doc["rho_Ealpha"] = write_array(m.fib.rho_Ealpha);
    doc["C_bas"] = write_array(m.fib.C_bas);
    doc["C_mix0"] = write_array(m.fib.C_mix0);
    doc["C_mix1"] = write_array(m.fib.C_mix1);
    doc["C_vert"] = write_array(m.fib.C_vert);
    if (m.lagrangian) doc["lagrangian"] = to_string(*m.lagrangian);
    if (m.hamiltonian) doc["hamiltonian"] = to_string(*m.hamiltonian);
    if (!m.currents.empty()) {
        json c = json::object();
        for (const auto& [name, e] : m.currents) c[name] = to_string(e);
        doc["currents"] = c;
    }
    json box = json::object();
    for (const auto& [name, r] : m.box.entries()) box[name] = {r.first, r.second};
    doc["sample_box"] = box;
    doc["tolerances"] = {{"validate", m.tolerances.validate}, {"residual", m.tolerances.residual}};
    return doc.dump(indent) + "\n";
}

void save_spec(const ModelSpec& model, const std::string& path) { write_file(path, spec_to_json(model)); }

FieldConfiguration parse_field(const std::string& json_text, const FibrationDims& expected) {
    const json doc = parse_json(json_text);
    if (!doc.is_object()) throw SpecError("", "field file must be a JSON object");
    const FibrationDims d = read_dims(doc);
    if (!(d == expected))
        throw SpecError("/dims", "field dims (nx " + std::to_string(d.nx) + ", nu " + std::to_string(d.nu) + ", r " +
                                     std::to_string(d.r) + ", k " + std::to_string(d.k) + ") do not match the model");
    FieldConfiguration f;
    const std::string side = doc.value("side", std::string("lagrangian"));
    if (side == "lagrangian")
        f.side = FieldSide::Lagrangian;
    else if (side == "hamiltonian")
        f.side = FieldSide::Hamiltonian;
    else
        throw SpecError("/side", "expected \"lagrangian\" or \"hamiltonian\"");

    if (!doc.contains("grid") || !doc.at("grid").is_array()) throw SpecError("/grid", "missing axis list");
    std::vector<Axis> axes;
    for (std::size_t i = 0; i < doc.at("grid").size(); ++i) {
        const json& a = doc.at("grid")[i];
        const std::string where = "/grid/" + std::to_string(i);
        if (!a.is_object() || !a.contains("min") || !a.contains("max")) throw SpecError(where, "expected {min, max, count}");
        axes.push_back({a.at("min").get<double>(), a.at("max").get<double>(), get_size(a, "count", where)});
    }
    try {
        f.grid = Grid(axes);
    } catch (const ShapeError& e) {
        throw SpecError("/grid", e.what());
    }

    if (!doc.contains("arrays") || !doc.at("arrays").is_object()) throw SpecError("/arrays", "missing arrays");
    const json& arrays = doc.at("arrays");
    const auto get = [&](const std::string& name) {
        const std::string where = "/arrays/" + name;
        if (!arrays.contains(name)) throw SpecError(where, "missing array");
        const json& a = arrays.at(name);
        if (!a.is_array() || a.size() != f.grid.nodes())
            throw SpecError(where, "expected " + std::to_string(f.grid.nodes()) + " values");
        std::vector<double> v;
        v.reserve(a.size());
        for (const auto& x : a) {
            if (!x.is_number()) throw SpecError(where, "non-numeric value");
            v.push_back(x.get<double>());
        }
        return v;
    };
    for (std::size_t A = 0; A < d.nu; ++A) f.u.push_back(get(u_name(A)));
    for (std::size_t al = 0; al < d.k; ++al)
        for (std::size_t a = 0; a < d.r; ++a)
            f.fibre.push_back(get(f.side == FieldSide::Lagrangian ? y_name(al, a) : mu_name(al, a)));
    try {
        f.check(d);
    } catch (const ShapeError& e) {
        throw SpecError("", e.what());
    }
    return f;
}

FieldConfiguration load_field(const std::string& path, const FibrationDims& expected) {
    return parse_field(read_file(path), expected);
}

std::string field_to_json(const FibrationDims& d, const FieldConfiguration& f) {
    f.check(d);
    json doc;
    doc["dims"] = dims_json(d);
    doc["side"] = f.side == FieldSide::Lagrangian ? "lagrangian" : "hamiltonian";
    json grid = json::array();
    for (const auto& a : f.grid.axes()) grid.push_back({{"min", a.min}, {"max", a.max}, {"count", a.count}});
    doc["grid"] = grid;
    json arrays = json::object();
    for (std::size_t A = 0; A < d.nu; ++A) arrays[u_name(A)] = f.u[A];
    for (std::size_t al = 0; al < d.k; ++al)
        for (std::size_t a = 0; a < d.r; ++a)
            arrays[f.side == FieldSide::Lagrangian ? y_name(al, a) : mu_name(al, a)] = f.fibre[al * d.r + a];
    doc["arrays"] = arrays;
    return doc.dump() + "\n";
}

void save_field(const FibrationDims& d, const FieldConfiguration& field, const std::string& path) {
    write_file(path, field_to_json(d, field));
}

}  // namespace liefield
