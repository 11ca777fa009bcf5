#include "qsys/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace qsys {

Json poly_to_json(const LatticePolynomial& p) {
    Json terms = Json::array();
    for (const auto& [idx, c] : p.terms()) {
        Json t = Json::array();
        t.push_back(Json(idx));
        t.push_back(c.str());
        terms.push_back(std::move(t));
    }
    return terms;
}

LatticePolynomial poly_from_json(const Json& j, std::size_t num_vars) {
    if (!j.is_array()) throw ValidationError("schema violation: polynomial must be an array");
    LatticePolynomial p(num_vars);
    for (const auto& term : j) {
        if (!term.is_array() || term.size() != 2 || !term[0].is_array() || !term[1].is_string())
            throw ValidationError("schema violation: polynomial term must be [multi-index, coefficient-string]");
        MultiIndex idx = term[0].get<MultiIndex>();
        if (idx.size() != num_vars)
            throw ValidationError("schema violation: multi-index length does not match variable count");
        BigInt c;
        try {
            c = BigInt(term[1].get<std::string>());
        } catch (const std::exception&) {
            throw ValidationError("schema violation: bad coefficient string");
        }
        p.add_term(idx, c);
    }
    return p;
}

Json ratfn_to_json(const RationalFunction& r) {
    Json j;
    j["num"] = poly_to_json(r.num());
    j["den"] = poly_to_json(r.den());
    return j;
}

RationalFunction ratfn_from_json(const Json& j, std::size_t num_vars) {
    if (!j.is_object() || !j.contains("num") || !j.contains("den"))
        throw ValidationError("schema violation: rational function must be {num, den}");
    return RationalFunction(poly_from_json(j["num"], num_vars), poly_from_json(j["den"], num_vars));
}

Json form_to_json(const MatrixOneForm& f) {
    Json j;
    j["dims"] = f.dims();
    j["base_dim"] = f.base_dim();
    Json comps = Json::array();
    for (std::size_t k = 0; k < f.base_dim(); ++k) {
        Json rows = Json::array();
        for (std::size_t r = 0; r < f.dims(); ++r) {
            Json row = Json::array();
            for (std::size_t c = 0; c < f.dims(); ++c)
                row.push_back(ratfn_to_json(f.component(k).at(r, c)));
            rows.push_back(std::move(row));
        }
        comps.push_back(std::move(rows));
    }
    j["components"] = std::move(comps);
    return j;
}

MatrixOneForm form_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("dims") || !j.contains("base_dim") || !j.contains("components"))
        throw ValidationError("schema violation: one-form must be {dims, base_dim, components}");
    std::size_t dims = j["dims"].get<std::size_t>();
    std::size_t base_dim = j["base_dim"].get<std::size_t>();
    const Json& comps = j["components"];
    if (!comps.is_array() || comps.size() != base_dim)
        throw ValidationError("schema violation: expected one component matrix per base coordinate");
    MatrixOneForm f(dims, base_dim);
    for (std::size_t k = 0; k < base_dim; ++k) {
        const Json& rows = comps[k];
        if (!rows.is_array() || rows.size() != dims)
            throw ValidationError("schema violation: component matrix has wrong row count");
        for (std::size_t r = 0; r < dims; ++r) {
            const Json& row = rows[r];
            if (!row.is_array() || row.size() != dims)
                throw ValidationError("schema violation: component matrix has wrong column count");
            for (std::size_t c = 0; c < dims; ++c)
                f.component(k).at(r, c) = ratfn_from_json(row[c], base_dim);
        }
    }
    return f;
}

Json qsystem_to_json(const QSystem& q) {
    Json j;
    j["schema"] = kSchemaName;
    Json profile;
    profile["s"] = q.s().str();
    profile["m"] = q.m();
    profile["d"] = q.d();
    profile["l"] = q.l();
    j["profile"] = std::move(profile);
    Json flags;
    flags["integrability_checked"] = q.flags().integrability_checked;
    flags["regularity_probed"] = q.flags().regularity_probed;
    flags["quasiunipotence_probed"] = q.flags().quasiunipotence_probed;
    j["flags"] = std::move(flags);
    j["form"] = form_to_json(q.form());
    return j;
}

QSystem qsystem_from_json(const Json& j) {
    if (!j.is_object()) throw ValidationError("schema violation: system file must be an object");
    if (!j.contains("schema") || j["schema"] != kSchemaName)
        throw ValidationError(std::string("schema violation: expected schema \"") + kSchemaName + "\"");
    if (!j.contains("form")) throw ValidationError("schema violation: missing \"form\"");
    MatrixOneForm form = form_from_json(j["form"]);

    std::optional<uint32_t> declared_d;
    QSystemFlags flags;
    if (j.contains("profile")) {
        const Json& p = j["profile"];
        if (p.contains("d")) declared_d = p["d"].get<uint32_t>();
        if (p.contains("s")) {
            BigInt s_claimed(p["s"].get<std::string>());
            if (s_claimed != form.size())
                throw ValidationError("profile violation: stored size s does not match the form");
        }
        if (p.contains("m") && p["m"].get<std::size_t>() != form.base_dim())
            throw ValidationError("profile violation: stored m does not match the form");
        if (p.contains("l") && p["l"].get<std::size_t>() != form.dims())
            throw ValidationError("profile violation: stored l does not match the form");
        if (declared_d && *declared_d < form.degree())
            throw ValidationError("profile violation: stored degree bound is below the measured degree");
    }
    if (j.contains("flags")) {
        const Json& fl = j["flags"];
        flags.integrability_checked = fl.value("integrability_checked", false);
        flags.regularity_probed = fl.value("regularity_probed", false);
        flags.quasiunipotence_probed = fl.value("quasiunipotence_probed", false);
    }
    return QSystem::from_form(std::move(form), declared_d, flags);
}

Json complex_to_json(const Complex& z) {
    Json j;
    j["re"] = z.real();
    j["im"] = z.imag();
    return j;
}

Complex complex_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("re") || !j.contains("im"))
        throw ValidationError("schema violation: complex number must be {re, im}");
    return Complex(j["re"].get<double>(), j["im"].get<double>());
}

Json fiber_to_json(const SingularFiber& f) {
    Json j;
    Json pts = Json::array();
    for (std::size_t i = 0; i < f.points.size(); ++i) {
        Json p = complex_to_json(f.points[i]);
        p["multiplicity"] = f.multiplicities[i];
        pts.push_back(std::move(p));
    }
    j["points"] = std::move(pts);
    j["includes_infinity"] = f.includes_infinity;
    return j;
}

std::string dump_canonical(const Json& j) { return j.dump(2) + "\n"; }

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("malformed JSON: ") + e.what());
    }
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_json(ss.str());
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open output file: " + path);
    out << text;
}

QSystem load_qsystem_file(const std::string& path) {
    return qsystem_from_json(load_json_file(path));
}

void save_qsystem_file(const std::string& path, const QSystem& q) {
    write_text_file(path, dump_canonical(qsystem_to_json(q)));
}

}  // namespace qsys
