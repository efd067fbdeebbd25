#include "jetphase/io.hpp"

#include <fstream>
#include <sstream>

#include "jetphase/errors.hpp"

namespace jetphase::io {

namespace {

const Json& field(const Json& j, const char* name, const char* what) {
    if (!j.is_object()) throw ParseError(std::string(what) + ": expected a JSON object");
    auto it = j.find(name);
    if (it == j.end()) throw ParseError(std::string(what) + ": missing field \"" + name + "\"");
    return *it;
}

int int_from_json(const Json& j, const char* what) {
    if (!j.is_number_integer()) throw ParseError(std::string(what) + ": expected an integer");
    return j.get<int>();
}

MultiIndex index_from_json(const Json& j, std::size_t size, const char* what) {
    if (!j.is_array()) throw ParseError(std::string(what) + ": expected an array of exponents");
    if (j.size() != size)
        throw InputShapeError(std::string(what) + ": expected " + std::to_string(size) + " entries, got " +
                              std::to_string(j.size()));
    MultiIndex m(size);
    for (std::size_t i = 0; i < size; ++i) {
        m[i] = int_from_json(j[i], what);
        if (m[i] < 0) throw InputShapeError(std::string(what) + ": negative exponent");
    }
    return m;
}

Json index_to_json(const MultiIndex& m) { return Json(m.entries()); }

int num_vars_from_json(const Json& j, const char* what) {
    int n = int_from_json(field(j, "num_vars", what), what);
    if (n < 1) throw InputShapeError(std::string(what) + ": num_vars must be positive");
    return n;
}

} // namespace

Json parse_text(const std::string& text, const std::string& origin) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(origin + ": " + e.what());
    }
}

Json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str(), path);
}

Json to_json(const Scalar& s) { return s.to_string(); }

Scalar scalar_from_json(const Json& j) {
    if (j.is_number_integer()) return Scalar(j.get<long>());
    if (!j.is_string()) throw ParseError("coefficient must be an exact rational string");
    try {
        return Scalar::parse(j.get<std::string>());
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError(std::string("bad coefficient: ") + e.what());
    }
}

Json to_json(const Jet& f) {
    Json out;
    out["num_vars"] = f.num_vars();
    if (!f.aux_names().empty()) out["aux"] = f.aux_names();
    Json terms = Json::array();
    for (const auto& [key, c] : f.terms()) {
        Json t;
        t["nu"] = key.nu;
        t["x"] = index_to_json(key.x);
        if (!f.aux_names().empty()) t["aux"] = index_to_json(key.aux);
        t["c"] = to_json(c);
        terms.push_back(std::move(t));
    }
    out["terms"] = std::move(terms);
    return out;
}

Jet jet_from_json(const Json& j) {
    const int n = num_vars_from_json(j, "jet");
    std::vector<std::string> aux;
    if (auto it = j.find("aux"); it != j.end()) {
        if (!it->is_array()) throw ParseError("jet: \"aux\" must be an array of names");
        for (const auto& name : *it) {
            if (!name.is_string()) throw ParseError("jet: aux names must be strings");
            aux.push_back(name.get<std::string>());
        }
    }
    Jet f(n, aux);
    const Json& terms = field(j, "terms", "jet");
    if (!terms.is_array()) throw ParseError("jet: \"terms\" must be an array");
    for (const auto& t : terms) {
        const int nu = t.contains("nu") ? int_from_json(t["nu"], "jet term nu") : 0;
        MultiIndex x = index_from_json(field(t, "x", "jet term"), static_cast<std::size_t>(n), "jet term x");
        MultiIndex a = t.contains("aux") ? index_from_json(t["aux"], aux.size(), "jet term aux") : MultiIndex(aux.size());
        f.add_term(JetKey{nu, std::move(x), std::move(a)}, scalar_from_json(field(t, "c", "jet term")));
    }
    return f;
}

Json to_json(const FormalOperator& a) {
    Json out;
    out["num_vars"] = a.num_vars();
    out["ordering"] = a.ordering() == Ordering::normal ? "normal" : "anti";
    Json terms = Json::array();
    for (const auto& [key, c] : a.terms()) {
        Json t;
        t["nu"] = key.nu;
        t["x"] = index_to_json(key.x);
        t["dx"] = index_to_json(key.dx);
        t["c"] = to_json(c);
        terms.push_back(std::move(t));
    }
    out["terms"] = std::move(terms);
    return out;
}

FormalOperator operator_from_json(const Json& j) {
    const int n = num_vars_from_json(j, "operator");
    Ordering ordering = Ordering::normal;
    if (auto it = j.find("ordering"); it != j.end()) {
        if (*it == "normal") ordering = Ordering::normal;
        else if (*it == "anti") ordering = Ordering::anti_normal;
        else throw ParseError("operator: ordering must be \"normal\" or \"anti\"");
    }
    FormalOperator a(n, ordering);
    const auto un = static_cast<std::size_t>(n);
    const Json& terms = field(j, "terms", "operator");
    if (!terms.is_array()) throw ParseError("operator: \"terms\" must be an array");
    for (const auto& t : terms) {
        const int nu = t.contains("nu") ? int_from_json(t["nu"], "operator term nu") : 0;
        MultiIndex x = t.contains("x") ? index_from_json(t["x"], un, "operator term x") : MultiIndex(un);
        MultiIndex dx = t.contains("dx") ? index_from_json(t["dx"], un, "operator term dx") : MultiIndex(un);
        a.add_term(nu, std::move(x), std::move(dx), scalar_from_json(field(t, "c", "operator term")));
    }
    return a;
}

Json to_json(const PointDistribution& l) {
    Json out;
    out["num_vars"] = l.num_vars();
    Json terms = Json::array();
    for (const auto& [key, c] : l.terms()) {
        Json t;
        t["nu"] = key.first;
        t["dx"] = index_to_json(key.second);
        t["c"] = to_json(c);
        terms.push_back(std::move(t));
    }
    out["terms"] = std::move(terms);
    return out;
}

PointDistribution distribution_from_json(const Json& j) {
    const int n = num_vars_from_json(j, "distribution");
    PointDistribution l(n);
    const Json& terms = field(j, "terms", "distribution");
    if (!terms.is_array()) throw ParseError("distribution: \"terms\" must be an array");
    for (const auto& t : terms) {
        const int nu = t.contains("nu") ? int_from_json(t["nu"], "distribution term nu") : 0;
        l.add_term(nu, index_from_json(field(t, "dx", "distribution term"), static_cast<std::size_t>(n), "dx"),
                   scalar_from_json(field(t, "c", "distribution term")));
    }
    return l;
}

Json to_json(const ScalarMatrix& m) {
    Json out = Json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        Json row = Json::array();
        for (std::size_t k = 0; k < m.size(); ++k) row.push_back(to_json(m(i, k)));
        out.push_back(std::move(row));
    }
    return out;
}

ScalarMatrix matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw ParseError("matrix: expected a nonempty array of rows");
    ScalarMatrix m(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_array() || j[i].size() != j.size()) throw InputShapeError("matrix must be square");
        for (std::size_t k = 0; k < j.size(); ++k) m(i, k) = scalar_from_json(j[i][k]);
    }
    return m;
}

Json to_json(const PhaseDensityPair& p) {
    Json out;
    out["num_vars"] = p.num_vars();
    out["phase"] = to_json(p.phase);
    out["u"] = to_json(p.u);
    return out;
}

PhaseDensityPair pair_from_json(const Json& j) {
    const int n = num_vars_from_json(j, "pair");
    PhaseDensityPair p{jet_from_json(field(j, "phase", "pair")), j.contains("u") ? jet_from_json(j["u"]) : Jet(n)};
    if (p.phase.num_vars() != n || p.u.num_vars() != n)
        throw InputShapeError("pair: phase and u must have num_vars = " + std::to_string(n));
    validate_pair(p);
    return p;
}

Json to_json(const StarProduct& s) {
    Json out;
    out["num_vars"] = s.num_vars;
    Json cs = Json::array();
    for (const auto& c : s.c_ops) cs.push_back(to_json(c));
    out["C"] = std::move(cs);
    return out;
}

StarProduct star_from_json(const Json& j, int n_max) {
    if (j.is_object() && j.contains("moyal_pi")) return moyal_star(matrix_from_json(j["moyal_pi"]), n_max);
    StarProduct s{num_vars_from_json(j, "star product"), {}};
    const Json& cs = field(j, "C", "star product");
    if (!cs.is_array()) throw ParseError("star product: \"C\" must be an array of operators");
    for (const auto& c : cs) s.c_ops.push_back(operator_from_json(c));
    validate_star(s);
    return s;
}

Json to_json(const std::vector<Jet>& components) {
    Json out;
    out["num_vars"] = components.empty() ? 0 : components.front().num_vars();
    Json cs = Json::array();
    for (const auto& c : components) cs.push_back(to_json(c));
    out["components"] = std::move(cs);
    return out;
}

std::vector<Jet> components_from_json(const Json& j) {
    const Json& cs = j.is_array() ? j : field(j, "components", "component list");
    if (!cs.is_array()) throw ParseError("component list: expected an array of jets");
    std::vector<Jet> out;
    for (const auto& c : cs) out.push_back(jet_from_json(c));
    if (j.is_object() && j.contains("num_vars")) {
        const int n = num_vars_from_json(j, "component list");
        for (const auto& c : out)
            if (c.num_vars() != n) throw InputShapeError("component list: component on the wrong chart");
    }
    return out;
}

Json to_json(const Factorization& f) {
    Json out;
    out["a"] = to_json(f.a);
    out["b"] = to_json(f.b);
    out["residual_degrees"] = f.residual_degrees;
    return out;
}

} // namespace jetphase::io
