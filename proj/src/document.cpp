#include "lopa/document.hpp"

#include "lopa/error.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace lopa {

namespace {

[[noreturn]] void schema(const std::string& msg) { throw Error(ErrorKind::SchemaError, msg); }

void require_object(const json& j, const std::string& where) {
    if (!j.is_object()) schema(where + " must be an object");
}

void check_fields(const json& j, const std::set<std::string>& required, const std::set<std::string>& optional,
                  const std::string& where) {
    require_object(j, where);
    for (const auto& key : required)
        if (!j.contains(key)) schema(where + ": missing field '" + key + "'");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!required.count(it.key()) && !optional.count(it.key()))
            schema(where + ": unexpected field '" + it.key() + "'");
}

double number(const json& j, const std::string& where) {
    if (!j.is_number()) throw Error(ErrorKind::ValueError, where + " must be numeric");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw Error(ErrorKind::ValueError, where + " must be finite");
    return v;
}

Index count(const json& j, const std::string& where) {
    if (!j.is_number_integer() && !j.is_number_unsigned()) schema(where + " must be an integer");
    const auto v = j.get<long long>();
    if (v < 0) throw Error(ErrorKind::ValueError, where + " must be nonnegative");
    return static_cast<Index>(v);
}

std::string at(const std::string& where, Index i) { return where + "[" + std::to_string(i) + "]"; }

}  // namespace

json encode_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

json encode_complex(Complex z) { return json::array({encode_number(z.real()), encode_number(z.imag())}); }

json encode_matrix(const Matrix& m) {
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json r = json::array();
        for (Index j = 0; j < m.cols(); ++j) r.push_back(encode_number(m(i, j)));
        rows.push_back(std::move(r));
    }
    return rows;
}

json encode_matrix(const CMatrix& m) {
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json r = json::array();
        for (Index j = 0; j < m.cols(); ++j) r.push_back(encode_complex(m(i, j)));
        rows.push_back(std::move(r));
    }
    return rows;
}

json encode_vector(const CVector& v) {
    json out = json::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back(encode_complex(v(i)));
    return out;
}

Complex decode_complex(const json& j, const std::string& where) {
    if (j.is_number()) return {number(j, where), 0.0};
    if (j.is_array() && j.size() == 2) return {number(j[0], where + ".re"), number(j[1], where + ".im")};
    if (j.is_array()) schema(where + " must be a number or an [re, im] pair");
    throw Error(ErrorKind::ValueError, where + " must be numeric");
}

CMatrix decode_complex_matrix(const json& j, Index rows, Index cols, const std::string& where) {
    if (!j.is_array()) schema(where + " must be an array of rows");
    if (static_cast<Index>(j.size()) != rows) schema(where + ": expected " + std::to_string(rows) + " rows");
    CMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        const json& r = j[static_cast<std::size_t>(i)];
        if (!r.is_array() || static_cast<Index>(r.size()) != cols)
            schema(at(where, i) + ": expected " + std::to_string(cols) + " entries");
        for (Index c = 0; c < cols; ++c) m(i, c) = decode_complex(r[static_cast<std::size_t>(c)], at(at(where, i), c));
    }
    return m;
}

Matrix decode_real_matrix(const json& j, Index rows, Index cols, const std::string& where) {
    if (!j.is_array()) schema(where + " must be an array of rows");
    if (static_cast<Index>(j.size()) != rows) schema(where + ": expected " + std::to_string(rows) + " rows");
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        const json& r = j[static_cast<std::size_t>(i)];
        if (!r.is_array() || static_cast<Index>(r.size()) != cols)
            schema(at(where, i) + ": expected " + std::to_string(cols) + " entries");
        for (Index c = 0; c < cols; ++c) m(i, c) = number(r[static_cast<std::size_t>(c)], at(at(where, i), c));
    }
    return m;
}

CVector decode_complex_vector(const json& j, const std::string& where) {
    if (!j.is_array()) schema(where + " must be an array");
    CVector v(static_cast<Index>(j.size()));
    for (Index i = 0; i < v.size(); ++i) v(i) = decode_complex(j[static_cast<std::size_t>(i)], at(where, i));
    return v;
}

BoundarySymbol named_symbol(const std::string& name, const json& params, Index k, Index n) {
    if (name == "scaled-dirichlet") {
        check_fields(params, {"matrix"}, {}, "boundary.params");
        return scaled_dirichlet_symbol(decode_complex_matrix(params["matrix"], k, n, "boundary.params.matrix"));
    }
    if (name == "impedance") {
        check_fields(params, {"m0", "m1"}, {}, "boundary.params");
        return impedance_symbol(decode_complex_matrix(params["m0"], k, n, "boundary.params.m0"),
                                decode_complex_matrix(params["m1"], k, n, "boundary.params.m1"));
    }
    schema("unknown boundary symbol '" + name + "'");
}

namespace {

BoundarySymbol parse_boundary(const json& b, Index n) {
    require_object(b, "boundary");
    if (!b.contains("k")) schema("boundary: missing field 'k'");
    const Index k = count(b["k"], "boundary.k");
    if (b.contains("matrix")) {
        check_fields(b, {"k", "matrix"}, {}, "boundary");
        return BoundarySymbol::constant(decode_complex_matrix(b["matrix"], k, n, "boundary.matrix"));
    }
    if (b.contains("symbol")) {
        check_fields(b, {"k", "symbol"}, {"params"}, "boundary");
        if (!b["symbol"].is_string()) schema("boundary.symbol must be a string");
        return named_symbol(b["symbol"].get<std::string>(), b.value("params", json::object()), k, n);
    }
    schema("boundary needs either 'matrix' or 'symbol'");
}

std::string optional_name(const json& doc) {
    if (!doc.contains("name")) return {};
    if (!doc["name"].is_string()) schema("name must be a string");
    return doc["name"].get<std::string>();
}

}  // namespace

SystemDocument parse_system(const json& doc) {
    check_fields(doc, {"n", "d", "A"}, {"boundary", "name", "description"}, "system document");
    const Index n = count(doc["n"], "n");
    const Index d = count(doc["d"], "d");
    if (n < 1 || d < 1) throw Error(ErrorKind::ValueError, "n and d must be positive");
    if (!doc["A"].is_array()) schema("A must be an array of matrices");
    if (static_cast<Index>(doc["A"].size()) != d)
        schema("A has " + std::to_string(doc["A"].size()) + " matrices but d = " + std::to_string(d));
    std::vector<Matrix> a;
    for (Index j = 0; j < d; ++j) a.push_back(decode_real_matrix(doc["A"][static_cast<std::size_t>(j)], n, n, at("A", j)));
    SystemDocument out{FirstOrderSystem(std::move(a), optional_name(doc)), std::nullopt};
    if (doc.contains("boundary")) out.boundary = parse_boundary(doc["boundary"], n);
    return out;
}

SystemDocument parse_system_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        schema(std::string("invalid JSON: ") + e.what());
    }
    return parse_system(doc);
}

json serialize_system(const FirstOrderSystem& system, const std::optional<BoundarySymbol>& boundary) {
    json doc;
    doc["n"] = system.n();
    doc["d"] = system.d();
    json a = json::array();
    for (const auto& m : system.coefficients()) a.push_back(encode_matrix(m));
    doc["A"] = std::move(a);
    if (!system.name().empty()) doc["name"] = system.name();
    if (boundary) {
        json b;
        b["k"] = boundary->rows();
        if (boundary->is_constant()) {
            b["matrix"] = encode_matrix(boundary->matrix());
        } else {
            b["symbol"] = boundary->name();
            b["params"] = json::parse(boundary->params_json());
        }
        doc["boundary"] = std::move(b);
    }
    return doc;
}

ViscousDocument parse_viscous(const json& doc) {
    check_fields(doc, {"n1", "n2", "d", "A0", "A", "B", "theta"}, {"boundary", "name", "description", "cross_term"},
                 "viscous document");
    if (doc.contains("cross_term")) {
        if (!doc["cross_term"].is_string() || doc["cross_term"].get<std::string>() != "jd")
            schema("cross_term: only the (B^{jd} + B^{dj}) convention \"jd\" is supported");
    }
    SecondOrderSystem s;
    s.n1 = count(doc["n1"], "n1");
    s.n2 = count(doc["n2"], "n2");
    const Index d = count(doc["d"], "d");
    const Index n = s.n1 + s.n2;
    if (n < 1 || d < 1) throw Error(ErrorKind::ValueError, "n1 + n2 and d must be positive");
    s.a0 = decode_real_matrix(doc["A0"], n, n, "A0");
    if (!doc["A"].is_array() || static_cast<Index>(doc["A"].size()) != d) schema("A must hold d matrices");
    for (Index j = 0; j < d; ++j) s.a.push_back(decode_real_matrix(doc["A"][static_cast<std::size_t>(j)], n, n, at("A", j)));
    if (!doc["B"].is_array() || static_cast<Index>(doc["B"].size()) != d) schema("B must be a d x d array of matrices");
    for (Index j = 0; j < d; ++j) {
        const json& r = doc["B"][static_cast<std::size_t>(j)];
        if (!r.is_array() || static_cast<Index>(r.size()) != d) schema("B must be a d x d array of matrices");
        std::vector<Matrix> row;
        for (Index k = 0; k < d; ++k) row.push_back(decode_real_matrix(r[static_cast<std::size_t>(k)], n, n, at(at("B", j), k)));
        s.b.push_back(std::move(row));
    }
    s.theta = number(doc["theta"], "theta");
    s.name = optional_name(doc);

    ViscousDocument out{std::move(s), std::nullopt};
    if (doc.contains("boundary")) {
        const json& b = doc["boundary"];
        require_object(b, "boundary");
        if (b.contains("gamma1")) {
            check_fields(b, {"gamma1"}, {}, "boundary");
            const json& g1 = b["gamma1"];
            if (!g1.is_array()) schema("boundary.gamma1 must be an array of rows");
            out.boundary = rousset_bc(out.system, decode_complex_matrix(g1, static_cast<Index>(g1.size()), out.system.n1,
                                                                      "boundary.gamma1"));
        } else {
            check_fields(b, {"k", "matrix"}, {}, "boundary");
            out.boundary = decode_complex_matrix(b["matrix"], count(b["k"], "boundary.k"), out.system.n1 + 2 * out.system.n2,
                                                 "boundary.matrix");
        }
    }
    return out;
}

json serialize_viscous(const SecondOrderSystem& s, const std::optional<CMatrix>& boundary) {
    json doc;
    doc["n1"] = s.n1;
    doc["n2"] = s.n2;
    doc["d"] = s.d();
    doc["A0"] = encode_matrix(s.a0);
    json a = json::array();
    for (const auto& m : s.a) a.push_back(encode_matrix(m));
    doc["A"] = std::move(a);
    json b = json::array();
    for (const auto& row : s.b) {
        json r = json::array();
        for (const auto& m : row) r.push_back(encode_matrix(m));
        b.push_back(std::move(r));
    }
    doc["B"] = std::move(b);
    doc["theta"] = s.theta;
    if (!s.name.empty()) doc["name"] = s.name;
    if (boundary) doc["boundary"] = {{"k", boundary->rows()}, {"matrix", encode_matrix(*boundary)}};
    return doc;
}

ExponentialProfile parse_profile(const json& terms, Index dim) {
    if (!terms.is_array()) schema("profile must be an array of terms");
    std::vector<ProfileTerm> out;
    for (Index i = 0; i < static_cast<Index>(terms.size()); ++i) {
        const json& t = terms[static_cast<std::size_t>(i)];
        const std::string where = at("f", i);
        check_fields(t, {"v", "mu"}, {"m"}, where);
        ProfileTerm term;
        term.v = decode_complex_vector(t["v"], where + ".v");
        if (term.v.size() != dim)
            throw Error(ErrorKind::DimensionMismatch, where + ".v must have " + std::to_string(dim) + " entries");
        term.mu = decode_complex(t["mu"], where + ".mu");
        term.power = t.contains("m") ? static_cast<int>(count(t["m"], where + ".m")) : 0;
        out.push_back(std::move(term));
    }
    return ExponentialProfile(dim, std::move(out));
}

json serialize_profile(const ExponentialProfile& p) {
    json out = json::array();
    for (const auto& t : p.terms()) out.push_back({{"v", encode_vector(t.v)}, {"mu", encode_complex(t.mu)}, {"m", t.power}});
    return out;
}

std::vector<Frequency> parse_frequencies(const json& doc, Index d) {
    const json* list = &doc;
    if (doc.is_object()) {
        check_fields(doc, {"frequencies"}, {"name", "description"}, "frequency file");
        list = &doc["frequencies"];
    }
    if (!list->is_array()) schema("frequency set must be an array");
    std::vector<Frequency> out;
    for (Index i = 0; i < static_cast<Index>(list->size()); ++i) {
        const json& f = (*list)[static_cast<std::size_t>(i)];
        const std::string where = at("frequencies", i);
        check_fields(f, {"tau", "gamma"}, {"eta"}, where);
        Vector eta = Vector::Zero(d - 1);
        if (f.contains("eta")) {
            if (!f["eta"].is_array() || static_cast<Index>(f["eta"].size()) != d - 1)
                schema(where + ".eta must have d - 1 entries");
            for (Index j = 0; j + 1 < d; ++j) eta(j) = number(f["eta"][static_cast<std::size_t>(j)], where + ".eta");
        } else if (d > 1) {
            schema(where + ": missing field 'eta'");
        }
        const double gamma = number(f["gamma"], where + ".gamma");
        if (!(gamma > 0.0)) throw Error(ErrorKind::InvalidGrid, where + ".gamma must be positive");
        out.emplace_back(number(f["tau"], where + ".tau"), eta, gamma);
    }
    return out;
}

json serialize_frequency(const Frequency& f) {
    json eta = json::array();
    for (Index j = 0; j < f.eta().size(); ++j) eta.push_back(f.eta()(j));
    return {{"tau", f.tau()}, {"eta", eta}, {"gamma", f.gamma()}};
}

ViscousWeights parse_weights(const json& doc) {
    check_fields(doc, {}, {"u", "derivative", "forcing"}, "weights");
    ViscousWeights w;
    auto term = [&](const char* key, WeightTerm& out) {
        if (!doc.contains(key)) return;
        const json& t = doc[key];
        check_fields(t, {}, {"scale", "power"}, std::string("weights.") + key);
        if (t.contains("scale")) out.scale = number(t["scale"], std::string("weights.") + key + ".scale");
        if (t.contains("power")) out.power = number(t["power"], std::string("weights.") + key + ".power");
    };
    term("u", w.u);
    term("derivative", w.derivative);
    term("forcing", w.forcing);
    w.validate();
    return w;
}

json serialize_weights(const ViscousWeights& w) {
    auto term = [](const WeightTerm& t) { return json{{"scale", t.scale}, {"power", t.power}}; };
    return {{"u", term(w.u)}, {"derivative", term(w.derivative)}, {"forcing", term(w.forcing)}};
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return json::parse(buffer.str());
    } catch (const json::parse_error& e) {
        schema("invalid JSON in '" + path + "': " + e.what());
    }
}

}  // namespace lopa
