#include "galcur/io.hpp"

#include <cstdio>

#include "galcur/error.hpp"

namespace galcur {

namespace {

[[noreturn]] void bad(const std::string& what) { throw ConfigError("config: " + what); }

int require_int(const Json& j, const char* what) {
    if (!j.is_number_integer()) bad(std::string(what) + " must be an integer");
    return j.get<int>();
}

std::vector<int> parse_int_array(const Json& j, const char* what) {
    if (!j.is_array()) bad(std::string(what) + " must be an array of integers");
    std::vector<int> out;
    for (const Json& v : j) out.push_back(require_int(v, what));
    return out;
}

} // namespace

std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

CycNum parse_cyc(const Json& j) {
    if (!j.is_string()) bad("cyclotomic literals must be strings");
    try {
        return CycNum::parse(j.get<std::string>());
    } catch (const ParseError& e) {
        bad("bad cyclotomic literal \"" + j.get<std::string>() + "\": " + e.what());
    }
}

TorusPoint parse_point(const Json& j, int num_vars) {
    if (!j.is_array() || static_cast<int>(j.size()) != num_vars)
        bad("a point must be an array of " + std::to_string(num_vars) + " literals");
    std::vector<CycNum> coords;
    for (const Json& v : j) coords.push_back(parse_cyc(v));
    for (const CycNum& c : coords)
        if (c.is_zero()) bad("point coordinates must be nonzero");
    return TorusPoint(std::move(coords));
}

LaurentPoly parse_laurent(const Json& j, int num_vars) {
    if (j.is_string()) return LaurentPoly::constant(num_vars, parse_cyc(j));
    if (!j.is_array()) bad("a Laurent polynomial must be a literal or an array of terms");
    LaurentPoly p(num_vars);
    for (const Json& t : j) {
        if (!t.is_object() || !t.contains("exp") || !t.contains("coeff"))
            bad("Laurent terms need \"exp\" and \"coeff\"");
        std::vector<int> exp = parse_int_array(t["exp"], "term exponent");
        if (static_cast<int>(exp.size()) != num_vars) bad("term exponent has the wrong arity");
        p.set_coeff(exp, p.coeff(exp) + parse_cyc(t["coeff"]));
    }
    return p;
}

CycMatrix parse_matrix(const Json& j) {
    if (!j.is_array() || j.empty()) bad("a matrix must be a nonempty array of rows");
    const int rows = static_cast<int>(j.size());
    if (!j[0].is_array() || j[0].empty()) bad("matrix rows must be nonempty arrays");
    const int cols = static_cast<int>(j[0].size());
    CycMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (!j[i].is_array() || static_cast<int>(j[i].size()) != cols)
            bad("matrix rows must all have the same length");
        for (int c = 0; c < cols; ++c) m.at(i, c) = parse_cyc(j[i][c]);
    }
    return m;
}

ExtensionSpec parse_extension(const Json& j) {
    if (!j.is_object() || !j.contains("orders")) bad("extension needs an \"orders\" array");
    std::vector<int> orders = parse_int_array(j["orders"], "extension order");
    std::vector<CycNum> roots;
    if (j.contains("roots")) {
        if (!j["roots"].is_array() || j["roots"].size() != orders.size())
            bad("extension roots must match the orders in number");
        for (const Json& r : j["roots"]) roots.push_back(parse_cyc(r));
    } else {
        for (int m : orders) {
            if (m < 1) bad("extension orders must be positive");
            roots.push_back(CycNum::zeta(m));
        }
    }
    const int num_vars = static_cast<int>(orders.size());
    try {
        return ExtensionSpec(num_vars, std::move(orders), std::move(roots));
    } catch (const Error& e) {
        bad(std::string("invalid extension: ") + e.what());
    }
}

StructureAlgebra parse_algebra(const Json& j) {
    if (!j.is_object() || !j.contains("type") || !j.contains("n"))
        bad("algebra needs \"type\" and \"n\"");
    const std::string type = j["type"].is_string() ? j["type"].get<std::string>() : "";
    const int n = require_int(j["n"], "algebra rank");
    if (n < 2) bad("algebra rank must be at least 2");
    if (type == "sl") return make_sl(n);
    if (type == "matrix") return make_matrix_algebra(n);
    bad("unknown algebra type \"" + type + "\"");
}

AlgebraAuto parse_auto(const Json& j, const StructureAlgebra& g, const Json& algebra_cfg) {
    if (!j.is_object()) bad("each automorphism must be an object");
    const std::string type =
        algebra_cfg.contains("type") && algebra_cfg["type"].is_string()
            ? algebra_cfg["type"].get<std::string>()
            : "sl";
    const int n = algebra_cfg.contains("n") ? require_int(algebra_cfg["n"], "algebra rank") : 0;
    auto natural_basis = [&]() {
        return type == "matrix" ? matrix_unit_matrices(n) : sl_basis_matrices(n);
    };
    CycMatrix coords;
    if (j.contains("coords")) {
        coords = parse_matrix(j["coords"]);
    } else if (j.contains("conjugate")) {
        CycMatrix P = parse_matrix(j["conjugate"]);
        if (P.rows() != n || P.cols() != n) bad("conjugating matrices must be n x n");
        try {
            coords = conjugation_matrix(natural_basis(), P);
        } catch (const Error& e) {
            bad(std::string("invalid conjugation: ") + e.what());
        }
    } else if (j.contains("negative_transpose")) {
        coords = negative_transpose_matrix(natural_basis());
    } else {
        bad("each automorphism needs \"conjugate\", \"coords\", or \"negative_transpose\"");
    }
    return check_auto(g, coords);
}

FormSpec parse_form(const Json& j) {
    if (!j.is_object() || !j.contains("kind")) bad("form needs a \"kind\"");
    const std::string kind = j["kind"].is_string() ? j["kind"].get<std::string>() : "";
    if (!j.contains("extension")) bad("form needs an \"extension\"");
    ExtensionSpec ext = parse_extension(j["extension"]);
    if (kind == "azumaya12") return azumaya12_form(ext);
    if (!j.contains("algebra")) bad("form needs an \"algebra\"");
    StructureAlgebra g = parse_algebra(j["algebra"]);
    if (kind == "multiloop") {
        if (!j.contains("autos") || !j["autos"].is_array())
            bad("multiloop forms need an \"autos\" array");
        std::vector<AlgebraAuto> autos;
        for (const Json& a : j["autos"]) autos.push_back(parse_auto(a, g, j["algebra"]));
        return multiloop_form(std::move(g), std::move(ext), std::move(autos));
    }
    if (kind == "twisted") {
        if (!j.contains("cocycle") || !j["cocycle"].is_object() || !j["cocycle"].contains("images"))
            bad("twisted forms need a \"cocycle\" with \"images\"");
        Cocycle u;
        for (const Json& im : j["cocycle"]["images"]) {
            if (!im.is_object() || !im.contains("gamma") || !im.contains("matrix"))
                bad("cocycle images need \"gamma\" and \"matrix\"");
            std::vector<int> gamma = parse_int_array(im["gamma"], "group exponent");
            const Json& mj = im["matrix"];
            if (!mj.is_array() || mj.empty()) bad("cocycle matrices must be arrays of rows");
            const int d = static_cast<int>(mj.size());
            LaurentMatrix M(d, d, ext.num_vars);
            for (int r = 0; r < d; ++r) {
                if (!mj[r].is_array() || static_cast<int>(mj[r].size()) != d)
                    bad("cocycle matrices must be square");
                for (int c = 0; c < d; ++c) M.at(r, c) = parse_laurent(mj[r][c], ext.num_vars);
            }
            u.images[gamma] = std::move(M);
        }
        return twisted_form(std::move(g), std::move(ext), std::move(u));
    }
    bad("unknown form kind \"" + kind + "\"");
}

ModuleLabel parse_label(const Json& j, int num_vars) {
    if (!j.is_array()) bad("a label must be an array of factors");
    ModuleLabel label;
    for (const Json& f : j) {
        if (!f.is_object() || !f.contains("weight") || !f.contains("point"))
            bad("label factors need \"weight\" and \"point\"");
        LabelEntry e;
        e.weight = parse_int_array(f["weight"], "weight entry");
        e.point = parse_point(f["point"], num_vars);
        label.entries.push_back(std::move(e));
    }
    return label;
}

Json point_json(const TorusPoint& a) {
    Json out = Json::array();
    for (const CycNum& c : a.coords) out.push_back(c.str());
    return out;
}

Json cyc_matrix_json(const CycMatrix& m) {
    Json out = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j).str());
        out.push_back(std::move(row));
    }
    return out;
}

Json label_entry_json(const LabelEntry& e) {
    Json out = Json::object();
    out["weight"] = e.weight;
    out["point"] = point_json(e.point);
    return out;
}

Json chi_json(const InvariantChi& chi) {
    Json out = Json::array();
    for (const auto& orbit : chi.orbits) {
        Json o = Json::array();
        for (const LabelEntry& e : orbit) o.push_back(label_entry_json(e));
        out.push_back(std::move(o));
    }
    return out;
}

std::string laurent_str(const LaurentPoly& p) {
    if (p.is_zero()) return "0";
    std::string out;
    for (const auto& [exp, coeff] : p.terms()) {
        if (!out.empty()) out += " + ";
        out += "(" + coeff.str() + ")*t^(";
        for (size_t i = 0; i < exp.size(); ++i) {
            if (i) out += ",";
            out += std::to_string(exp[i]);
        }
        out += ")";
    }
    return out;
}

} // namespace galcur
