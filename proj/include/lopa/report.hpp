#pragma once

#include "lopa/document.hpp"
#include "lopa/lopatinski.hpp"
#include "lopa/stability.hpp"
#include "lopa/symmetrizer.hpp"
#include "lopa/viscous.hpp"

#include <string>

namespace lopa {

inline constexpr const char* kToolVersion = "lopa 0.1.0";

/// One named pass/fail line of a report.
struct Check {
    std::string name;
    bool pass = true;
    json detail = json::object();
};

json encode_check(const Check& check);

/// {"tool", "subcommand", "config", "verdict", "checks", "result", "timestamp"}
json make_report(const std::string& subcommand, const json& config, const std::string& verdict,
                 const std::vector<Check>& checks, const json& result);

/// UTC time in ISO 8601.
std::string utc_timestamp();

json encode_validation(const ValidationReport& report);
json encode_hyperbolicity(const HyperbolicityReport& report);
json encode_viscous_validation(const ViscousValidation& report);
json encode_symmetrizer(const Symmetrizer& s);
json encode_search(const SymmetrizerSearch& search);
json encode_certificate(const DissipativityCertificate& c);
json encode_lopatinski_value(const LopatinskiValue& v);
json encode_scan(const ScanResult& scan);
json encode_stability(const StabilityReport& report, bool include_points = true);
json encode_trace(const DecompositionTrace& trace);
json encode_optional_frequency(const std::optional<Frequency>& f);

/// Human-readable rendering of a report: scalars as an aligned key/value
/// list, arrays of flat objects as column tables, matrices row by row.
std::string render_table(const json& report);

}  // namespace lopa
