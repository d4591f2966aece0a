#pragma once

#include "lopa/resolvent.hpp"
#include "lopa/system.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lopa {

struct LopatinskiValue {
    std::optional<Frequency> frequency;
    /// sigma_min(Gamma V): 0 on a rank failure, +inf when k = dim E_- = 0
    double sigma = 0.0;
    bool rank_ok = true;
    Index rows = 0;
    Index boundary_rank = 0;
    Index stable_dim = 0;
    double boundary_norm = 0.0;
    /// best C in |v|^2 <= C |Gamma v|^2 on E_-, i.e. 1 / sigma^2
    double trace_constant = 0.0;
    std::string rank_detail;
};

/// Evaluates the Lopatinski quantities for a precomputed G. With strict set,
/// a rank disagreement throws RankMismatch instead of returning sigma = 0.
LopatinskiValue lopatinski_value(const ResolventMatrix& g, const CMatrix& boundary, bool strict = false);
LopatinskiValue lopatinski_value(const FirstOrderSystem& system, const BoundarySymbol& boundary,
                                 const Frequency& frequency, bool strict = false);

/// Same value computed from a caller-supplied orthonormal basis of E_-.
double lopatinski_sigma(const CMatrix& stable_basis, const CMatrix& boundary);

struct ScanGrid {
    double gamma_min = 1e-3;
    int resolution = 24;
    /// frequency-dependent symbols only: radii log-spaced in [1 / cutoff, cutoff]
    double radial_cutoff = 1e3;
    int radial_samples = 7;
};

/// Deterministic points on the hemisphere |(tau, eta, gamma)| = 1 with
/// gamma in [gamma_min, 1]; gamma levels are log-spaced.
std::vector<Frequency> hemisphere_grid(Index d, double gamma_min, int resolution);

/// gamma log-spaced in [gamma_min, gamma_max] times tangential values in
/// [-tangential_max, tangential_max] on every axis.
std::vector<Frequency> box_grid(Index d, double gamma_min, double gamma_max, double tangential_max,
                                int gamma_levels, int tangential_levels);

enum class ScanVerdict { Holds, Fails, RankFailure };
std::string to_string(ScanVerdict verdict);

struct ScanResult {
    double inf_sigma = 0.0;
    std::optional<Frequency> worst;
    std::string grid_description;
    ScanVerdict verdict = ScanVerdict::Holds;
    double tolerance = 0.0;
    Index points = 0;
    Index rank_failures = 0;
    /// points where the spectral split failed after jittered retries
    std::vector<Frequency> split_failures;
    /// sigma still dropping steeply at the smallest gamma level
    bool inconclusive = false;
    std::optional<double> radial_cutoff;
    /// minimum sigma per gamma level, ascending gamma (hemisphere scans)
    std::vector<double> level_minima;
};

struct ScanOptions {
    double tolerance = 1e-8;
    int threads = 1;
    int jitter_retries = 3;
};

ScanResult uniform_scan(const FirstOrderSystem& system, const BoundarySymbol& boundary, const ScanGrid& grid,
                        const ScanOptions& options = {});

/// Scan of an explicit frequency list with a caller-supplied G(Lambda). Used
/// for the bounded frequency sets of the viscous reduction.
ScanResult scan_frequencies(const std::vector<Frequency>& frequencies,
                            const std::function<ResolventMatrix(const Frequency&)>& resolvent,
                            const BoundarySymbol& boundary, const ScanOptions& options,
                            std::string grid_description);

}  // namespace lopa
