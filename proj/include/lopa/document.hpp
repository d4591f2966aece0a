#pragma once

#include "lopa/profile.hpp"
#include "lopa/system.hpp"
#include "lopa/viscous.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace lopa {

using json = nlohmann::json;

/// Real matrices are row-major nested arrays; complex entries are [re, im].
json encode_matrix(const Matrix& m);
json encode_matrix(const CMatrix& m);
json encode_vector(const CVector& v);
json encode_complex(Complex z);
/// Numbers pass through; non-finite values become the strings "inf", "-inf", "nan".
json encode_number(double x);

/// Accepts numbers or [re, im] pairs. Throws SchemaError / ValueError.
CMatrix decode_complex_matrix(const json& j, Index rows, Index cols, const std::string& where);
Matrix decode_real_matrix(const json& j, Index rows, Index cols, const std::string& where);
CVector decode_complex_vector(const json& j, const std::string& where);
Complex decode_complex(const json& j, const std::string& where);

struct SystemDocument {
    FirstOrderSystem system;
    std::optional<BoundarySymbol> boundary;
};

/// Fields: n, d, A (d row-major n x n arrays), optional boundary, name,
/// description. boundary = {"k", "matrix"} or {"k", "symbol", "params"}.
SystemDocument parse_system(const json& document);
SystemDocument parse_system_text(const std::string& text);
json serialize_system(const FirstOrderSystem& system, const std::optional<BoundarySymbol>& boundary = std::nullopt);

/// Built-in frequency-dependent symbols: "scaled-dirichlet" {"matrix"} and
/// "impedance" {"m0", "m1"}.
BoundarySymbol named_symbol(const std::string& name, const json& params, Index k, Index n);

struct ViscousDocument {
    SecondOrderSystem system;
    /// boundary acting on U = (u1, u2, u2')
    std::optional<CMatrix> boundary;
};

/// Fields: n1, n2, d, A0, A, B (d x d array of n x n), theta, optional
/// boundary = {"gamma1"} (Rousset class) or {"k", "matrix"} on U, optional
/// cross_term which must be "jd" when present.
ViscousDocument parse_viscous(const json& document);
json serialize_viscous(const SecondOrderSystem& system, const std::optional<CMatrix>& boundary = std::nullopt);

/// [{"v": [...], "mu": [re, im], "m": int}, ...]
ExponentialProfile parse_profile(const json& terms, Index dim);
json serialize_profile(const ExponentialProfile& p);

/// [{"tau", "eta", "gamma"}, ...] or {"frequencies": [...]}
std::vector<Frequency> parse_frequencies(const json& document, Index d);
json serialize_frequency(const Frequency& f);

/// {"u": {"scale", "power"}, "derivative": {...}, "forcing": {...}}, all optional.
ViscousWeights parse_weights(const json& document);
json serialize_weights(const ViscousWeights& w);

/// Reads and parses a JSON file; SchemaError on syntax errors, InvalidArgument
/// when the file cannot be opened.
json read_json_file(const std::string& path);

}  // namespace lopa
