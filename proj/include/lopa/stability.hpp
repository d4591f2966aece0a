#pragma once

#include "lopa/profile.hpp"
#include "lopa/resolvent.hpp"
#include "lopa/symmetrizer.hpp"
#include "lopa/system.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace lopa {

/// Weighted Kreiss ratio
///   (sum_i state_i ||u_i||^2 + |u(0)|^2) / (||f||^2 / forcing + |g|^2).
/// Hyperbolic problems use state_i = forcing = gamma.
struct NormWeights {
    Vector state;
    double forcing = 1.0;
};

/// u' - G u = P f,  Gamma u(0) = g  at one frequency. P maps the physical
/// forcing into the ODE state (identity for first-order systems).
struct ResolventProblem {
    ResolventMatrix g;
    CMatrix forcing_map;
    NormWeights weights;

    Index forcing_dim() const { return forcing_map.cols(); }
};

ResolventProblem hyperbolic_problem(const FirstOrderSystem& system, const Frequency& frequency);

/// Numerator and denominator of the ratio for one solution.
struct RatioParts {
    double numerator = 0.0;
    double denominator = 0.0;
    /// 0 when both vanish, +inf when only the denominator does
    double ratio() const;
};

RatioParts kreiss_parts(const NormWeights& weights, const ExponentialProfile& u, const ExponentialProfile& f,
                        const CVector& g);

struct TrialOptions {
    int trials = 16;
    std::uint64_t seed = 0;
    int threads = 1;
    /// verdict fails once the max ratio reaches this cap
    double cap = 1e6;
    /// largest power m in random forcing terms x^m e^{mu x} v
    int max_power = 1;
};

/// Seed for the trial stream at one frequency; depends only on (seed, Lambda)
/// so enlarging a grid keeps the draws at common points.
std::uint64_t frequency_seed(std::uint64_t seed, const Frequency& frequency);

/// Random forcing x^m e^{mu x} v: Re mu uniform in [-2||G||, -0.1 gap],
/// Im mu uniform in [-2||G||, 2||G||], at distance >= 0.1 gap from spec G,
/// v complex Gaussian.
ExponentialProfile random_forcing(const ResolventProblem& problem, std::mt19937_64& rng, int max_power);
CVector random_vector(Index size, std::mt19937_64& rng);

/// Largest ratio over the span of the forcing atoms together with a basis of
/// boundary data (a generalized Hermitian eigenvalue of the two Gram forms).
/// Every combination of the atoms, in particular each atom paired with any
/// g, has ratio at most this value.
double span_supremum(const ResolventProblem& problem, const ResolventSolver& solver,
                     const std::vector<ExponentialProfile>& forcing_atoms);

struct KreissPoint {
    Frequency frequency;
    /// span supremum at this point; +inf when the boundary solve is singular
    double sup_ratio = 0.0;
    /// largest ratio among the individual random (f, g) trials
    double max_trial_ratio = 0.0;
    bool singular = false;
    double sigma = 0.0;
};

struct StabilityReport {
    std::string alpha_description;
    std::vector<KreissPoint> points;
    double max_ratio = 0.0;
    std::optional<Frequency> worst;
    Index trials = 0;
    double cap = 0.0;
    /// max ratio below the cap at every point of the grid
    bool stable_on_grid = true;
    std::optional<double> predicted_bound;
};

using ProblemFactory = std::function<ResolventProblem(const Frequency&)>;
using BoundaryFactory = std::function<CMatrix(const Frequency&)>;

/// Trial protocol over a frequency list for any resolvent-type problem.
StabilityReport kreiss_scan(const std::vector<Frequency>& frequencies, const ProblemFactory& problem,
                            const BoundaryFactory& boundary, const TrialOptions& options);

StabilityReport kreiss_constant(const FirstOrderSystem& system, const BoundarySymbol& boundary,
                                const std::vector<Frequency>& frequencies, const TrialOptions& options = {});

struct DissipativeConstantEstimate {
    double c_tilde = 0.0;
    std::optional<Frequency> worst;
    std::vector<KreissPoint> points;
    /// max(C, ||S A_d||^2 / s) / min(c, s) with s = lambda_min(S) and (c, C)
    /// the dissipativity certificate of the reference condition
    double energy_bound = 0.0;
};

DissipativeConstantEstimate measure_dissipative_constant(const FirstOrderSystem& system,
                                                         const Symmetrizer& symmetrizer,
                                                         const CMatrix& reference,
                                                         const std::vector<Frequency>& frequencies,
                                                         const TrialOptions& options = {});

/// Upper bound for the reference constant from the integrated energy identity.
double energy_constant(const FirstOrderSystem& system, const Symmetrizer& symmetrizer, const CMatrix& reference);

struct ChainInequality {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    /// rhs - lhs
    double residual = 0.0;
};

struct DecompositionTrace {
    std::optional<Frequency> frequency;
    ExponentialProfile w;
    ExponentialProfile e;
    ExponentialProfile u;
    CVector g_tilde;
    double alpha = 0.0;
    double c_tilde = 0.0;
    /// Lopatinski trace constant 1 / sigma^2
    double c_lop = 0.0;
    double sigma = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    std::vector<ChainInequality> chain;
    /// constant of the summed estimate: max(2 C~ (1 + 2 C~ C2^2 C C1^2), 4 C~ C2^2 C)
    double predicted_constant = 0.0;
    double instance_ratio = 0.0;
    /// |Gamma~ w(0)|, |L w - f|, |L e|, |Gamma e(0) - (g - Gamma w(0))|
    double reference_trace_residual = 0.0;
    double w_equation_residual = 0.0;
    double e_equation_residual = 0.0;
    double e_boundary_residual = 0.0;
    /// ||u_direct - (w + e)|| / ||u_direct||
    double direct_relative_error = 0.0;
};

inline constexpr double kChainTolerance = 1e-8;

/// Auxiliary/residual construction for one instance. The reference constant
/// is the span supremum over `trials` random atoms, the instance forcing and
/// a basis of boundary data, so it bounds this instance by construction.
/// Throws ChainViolation when an inequality fails beyond kChainTolerance.
DecompositionTrace decompose(const ResolventProblem& problem, const CMatrix& boundary, const CMatrix& reference,
                             const ExponentialProfile& f, const CVector& g, const TrialOptions& options = {});

DecompositionTrace proposition_main_decompose(const FirstOrderSystem& system, const Symmetrizer& symmetrizer,
                                              const CMatrix& boundary, const ExponentialProfile& f,
                                              const CVector& g, const Frequency& frequency,
                                              const TrialOptions& options = {});

struct DirectComparison {
    double relative_error = 0.0;
    double direct_norm = 0.0;
    ExponentialProfile direct;
    ExponentialProfile decomposed;
};

DirectComparison direct_vs_decomposed(const FirstOrderSystem& system, const Symmetrizer& symmetrizer,
                                      const CMatrix& boundary, const ExponentialProfile& f, const CVector& g,
                                      const Frequency& frequency);

}  // namespace lopa
