#include "lopa/report.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <sstream>

namespace lopa {

json encode_check(const Check& check) {
    json j = {{"name", check.name}, {"verdict", check.pass ? "pass" : "fail"}};
    if (!check.detail.empty()) j["detail"] = check.detail;
    return j;
}

json make_report(const std::string& subcommand, const json& config, const std::string& verdict,
                 const std::vector<Check>& checks, const json& result) {
    json list = json::array();
    for (const auto& c : checks) list.push_back(encode_check(c));
    return {{"tool", kToolVersion}, {"subcommand", subcommand}, {"config", config},     {"verdict", verdict},
            {"checks", list},       {"result", result},         {"timestamp", utc_timestamp()}};
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

namespace {

json real_vector(const Vector& v) {
    json out = json::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back(encode_number(v(i)));
    return out;
}

json frequency_list(const std::vector<Frequency>& list) {
    json out = json::array();
    for (const auto& f : list) out.push_back(serialize_frequency(f));
    return out;
}

}  // namespace

json encode_optional_frequency(const std::optional<Frequency>& f) {
    return f ? serialize_frequency(*f) : json(nullptr);
}

json encode_validation(const ValidationReport& r) {
    return {{"shapes_ok", r.shapes_ok},
            {"noncharacteristic", r.noncharacteristic},
            {"normal_sigma_min", encode_number(r.normal_sigma_min)},
            {"normal_norm", encode_number(r.normal_norm)}};
}

json encode_hyperbolicity(const HyperbolicityReport& r) {
    json j = {{"pass", r.pass},
              {"samples", r.samples},
              {"worst_xi", real_vector(r.worst_xi)},
              {"worst_defect", encode_number(r.worst_defect)},
              {"semisimple", r.semisimple}};
    if (!r.semisimple) {
        j["nonsemisimple_xi"] = real_vector(r.nonsemisimple_xi);
        j["nonsemisimple_eigenvalue"] = encode_complex(r.nonsemisimple_eigenvalue);
    }
    return j;
}

json encode_viscous_validation(const ViscousValidation& r) {
    return {{"measured_theta", encode_number(r.measured_theta)},
            {"normal_sigma_min", encode_number(r.normal_sigma_min)},
            {"hyperbolic_sigma_min", encode_number(r.hyperbolic_sigma_min)},
            {"samples", r.samples}};
}

json encode_symmetrizer(const Symmetrizer& s) {
    return {{"S", encode_matrix(s.S)},
            {"residual", encode_number(s.residual)},
            {"lambda_min", encode_number(s.lambda_min)}};
}

json encode_search(const SymmetrizerSearch& s) {
    json j = {{"feasible", s.feasible},
              {"best_lambda_min", encode_number(s.best_lambda_min)},
              {"subspace_dim", s.subspace_dim},
              {"iterations", s.iterations}};
    if (s.symmetrizer) j["symmetrizer"] = encode_symmetrizer(*s.symmetrizer);
    return j;
}

json encode_certificate(const DissipativityCertificate& c) {
    return {{"c", encode_number(c.c)},
            {"C", encode_number(c.C)},
            {"kernel_value", encode_number(c.kernel_value)},
            {"incoming", c.incoming},
            {"rows", c.rows},
            {"exact_residual", encode_number(c.exact_residual)}};
}

json encode_lopatinski_value(const LopatinskiValue& v) {
    json j = {{"frequency", encode_optional_frequency(v.frequency)},
              {"sigma", encode_number(v.sigma)},
              {"rank_ok", v.rank_ok},
              {"rows", v.rows},
              {"boundary_rank", v.boundary_rank},
              {"stable_dim", v.stable_dim},
              {"boundary_norm", encode_number(v.boundary_norm)},
              {"trace_constant", encode_number(v.trace_constant)}};
    if (!v.rank_detail.empty()) j["rank_detail"] = v.rank_detail;
    return j;
}

json encode_scan(const ScanResult& s) {
    json minima = json::array();
    for (double m : s.level_minima) minima.push_back(encode_number(m));
    json j = {{"inf_sigma", encode_number(s.inf_sigma)},
              {"worst", encode_optional_frequency(s.worst)},
              {"grid", s.grid_description},
              {"verdict", to_string(s.verdict)},
              {"tolerance", encode_number(s.tolerance)},
              {"points", s.points},
              {"rank_failures", s.rank_failures},
              {"split_failures", frequency_list(s.split_failures)},
              {"inconclusive", s.inconclusive},
              {"level_minima", minima}};
    if (s.radial_cutoff) j["radial_cutoff"] = encode_number(*s.radial_cutoff);
    return j;
}

json encode_stability(const StabilityReport& r, bool include_points) {
    json j = {{"weights", r.alpha_description},
              {"max_ratio", encode_number(r.max_ratio)},
              {"worst", encode_optional_frequency(r.worst)},
              {"trials", r.trials},
              {"cap", encode_number(r.cap)},
              {"stable_on_grid", r.stable_on_grid},
              {"grid_points", r.points.size()}};
    if (r.predicted_bound) j["predicted_bound"] = encode_number(*r.predicted_bound);
    if (include_points) {
        json pts = json::array();
        for (const auto& p : r.points)
            pts.push_back({{"frequency", serialize_frequency(p.frequency)},
                           {"sup_ratio", encode_number(p.sup_ratio)},
                           {"max_trial_ratio", encode_number(p.max_trial_ratio)},
                           {"sigma", encode_number(p.sigma)},
                           {"singular", p.singular}});
        j["points"] = std::move(pts);
    }
    return j;
}

json encode_trace(const DecompositionTrace& t) {
    json chain = json::array();
    for (const auto& c : t.chain)
        chain.push_back({{"name", c.name},
                         {"lhs", encode_number(c.lhs)},
                         {"rhs", encode_number(c.rhs)},
                         {"residual", encode_number(c.residual)}});
    return {{"frequency", encode_optional_frequency(t.frequency)},
            {"alpha", encode_number(t.alpha)},
            {"c_tilde", encode_number(t.c_tilde)},
            {"c_lop", encode_number(t.c_lop)},
            {"sigma", encode_number(t.sigma)},
            {"c1", encode_number(t.c1)},
            {"c2", encode_number(t.c2)},
            {"chain", chain},
            {"predicted_constant", encode_number(t.predicted_constant)},
            {"instance_ratio", encode_number(t.instance_ratio)},
            {"reference_trace_residual", encode_number(t.reference_trace_residual)},
            {"w_equation_residual", encode_number(t.w_equation_residual)},
            {"e_equation_residual", encode_number(t.e_equation_residual)},
            {"e_boundary_residual", encode_number(t.e_boundary_residual)},
            {"direct_relative_error", encode_number(t.direct_relative_error)},
            {"g_tilde", encode_vector(t.g_tilde)},
            {"w", serialize_profile(t.w)},
            {"e", serialize_profile(t.e)},
            {"u", serialize_profile(t.u)}};
}

// ---- table rendering

namespace {

std::string fmt(double x) {
    if (x == 0.0) x = 0.0;  // no "-0"
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

bool is_pair(const json& j) { return j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number(); }

bool is_scalar(const json& j) { return j.is_primitive(); }

bool is_flat_array(const json& j) {
    return j.is_array() && j.size() <= 64 &&
           std::all_of(j.begin(), j.end(), [](const json& e) { return is_scalar(e) || is_pair(e); });
}

bool is_cell(const json& j) {
    if (is_scalar(j) || is_pair(j) || is_flat_array(j)) return true;
    if (j.is_object())
        return std::all_of(j.begin(), j.end(), [](const json& e) { return is_scalar(e) || is_flat_array(e); });
    return false;
}

std::string cell(const json& j) {
    if (j.is_null()) return "-";
    if (j.is_boolean()) return j.get<bool>() ? "yes" : "no";
    if (j.is_number()) return fmt(j.get<double>());
    if (j.is_string()) return j.get<std::string>();
    if (is_pair(j)) {
        const double re = j[0].get<double>(), im = j[1].get<double>();
        if (im == 0.0) return fmt(re);
        return fmt(re) + (im < 0 ? "-" : "+") + fmt(std::abs(im)) + "i";
    }
    if (j.is_array()) {
        std::string s = "[";
        for (std::size_t i = 0; i < j.size(); ++i) s += (i ? ", " : "") + cell(j[i]);
        return s + "]";
    }
    if (j.is_object()) {
        std::string s;
        for (auto it = j.begin(); it != j.end(); ++it) s += (s.empty() ? "" : " ") + it.key() + "=" + cell(*it);
        return s;
    }
    return j.dump();
}

bool is_matrix(const json& j) {
    return j.is_array() && !j.empty() &&
           std::all_of(j.begin(), j.end(), [](const json& r) {
               return r.is_array() && !is_pair(r) &&
                      std::all_of(r.begin(), r.end(), [](const json& e) { return e.is_number() || is_pair(e); });
           });
}

bool is_record_list(const json& j) {
    return j.is_array() && !j.empty() &&
           std::all_of(j.begin(), j.end(), [](const json& e) {
               return e.is_object() && std::all_of(e.begin(), e.end(), [](const json& v) { return is_cell(v); });
           });
}

void write_columns(std::ostream& os, const std::vector<std::vector<std::string>>& rows, const std::string& indent) {
    std::vector<std::size_t> width;
    for (const auto& r : rows)
        for (std::size_t c = 0; c < r.size(); ++c) {
            if (width.size() <= c) width.push_back(0);
            width[c] = std::max(width[c], r[c].size());
        }
    for (const auto& r : rows) {
        std::string line = indent;
        for (std::size_t c = 0; c < r.size(); ++c) {
            line += r[c];
            if (c + 1 < r.size()) line += std::string(width[c] - r[c].size() + 2, ' ');
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        os << line << '\n';
    }
}

void render(std::ostream& os, const json& j, const std::string& indent) {
    std::vector<std::vector<std::string>> scalars;
    for (auto it = j.begin(); it != j.end(); ++it)
        if (is_cell(*it)) scalars.push_back({it.key(), cell(*it)});
    write_columns(os, scalars, indent);

    for (auto it = j.begin(); it != j.end(); ++it) {
        const json& v = *it;
        if (is_cell(v)) continue;
        if (v.is_array() && v.empty()) {
            os << indent << it.key() << "  (none)\n";
        } else if (is_matrix(v)) {
            os << indent << it.key() << '\n';
            std::vector<std::vector<std::string>> rows;
            for (const auto& r : v) {
                std::vector<std::string> cells;
                for (const auto& e : r) cells.push_back(cell(e));
                rows.push_back(std::move(cells));
            }
            write_columns(os, rows, indent + "  ");
        } else if (is_record_list(v)) {
            os << indent << it.key() << '\n';
            std::vector<std::string> header;
            for (const auto& rec : v)
                for (auto f = rec.begin(); f != rec.end(); ++f)
                    if (std::find(header.begin(), header.end(), f.key()) == header.end()) header.push_back(f.key());
            std::vector<std::vector<std::string>> rows{header};
            for (const auto& rec : v) {
                std::vector<std::string> cells;
                for (const auto& h : header) cells.push_back(rec.contains(h) ? cell(rec[h]) : "");
                rows.push_back(std::move(cells));
            }
            write_columns(os, rows, indent + "  ");
        } else if (v.is_object()) {
            os << indent << it.key() << '\n';
            render(os, v, indent + "  ");
        } else if (v.is_array()) {
            os << indent << it.key() << '\n';
            for (std::size_t i = 0; i < v.size(); ++i) {
                os << indent << "  [" << i << "]\n";
                if (v[i].is_object())
                    render(os, v[i], indent + "    ");
                else
                    os << indent << "    " << cell(v[i]) << '\n';
            }
        }
    }
}

}  // namespace

std::string render_table(const json& report) {
    std::ostringstream os;
    os << report.value("tool", "lopa") << "  " << report.value("subcommand", "") << "  verdict: "
       << report.value("verdict", "") << '\n';
    for (const char* section : {"config", "checks", "result"}) {
        if (!report.contains(section)) continue;
        os << '\n' << section << '\n';
        const json& s = report[section];
        if (s.is_object()) {
            render(os, s, "  ");
        } else if (s.empty()) {
            os << "  (none)\n";
        } else {
            // arrays of records: render the rows without repeating the section name
            std::ostringstream inner;
            render(inner, json{{section, s}}, "");
            const std::string body = inner.str();
            os << body.substr(body.find('\n') + 1);
        }
    }
    return os.str();
}

}  // namespace lopa
