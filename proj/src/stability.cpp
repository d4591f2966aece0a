#include "lopa/stability.hpp"

#include "lopa/error.hpp"
#include "lopa/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

namespace lopa {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t bits(double v) {
    std::uint64_t b;
    std::memcpy(&b, &v, sizeof b);
    return b;
}

ExponentialProfile apply_forcing(const ResolventProblem& problem, const ExponentialProfile& f) {
    return problem.forcing_map * f;
}

double weighted_state_norm(const NormWeights& weights, const ExponentialProfile& u) {
    return squared_norm(u, weights.state);
}

void check_chain(const DecompositionTrace& trace) {
    for (const auto& ineq : trace.chain) {
        const double scale = std::max({1.0, std::abs(ineq.lhs), std::abs(ineq.rhs)});
        if (ineq.residual < -kChainTolerance * scale) {
            std::ostringstream msg;
            msg << ineq.name << ": lhs " << ineq.lhs << " exceeds rhs " << ineq.rhs;
            throw Error(ErrorKind::ChainViolation, msg.str());
        }
    }
}

}  // namespace

ResolventProblem hyperbolic_problem(const FirstOrderSystem& system, const Frequency& frequency) {
    ResolventMatrix g = resolvent_matrix(system, frequency);
    const Index n = system.n();
    NormWeights weights{Vector::Constant(n, frequency.gamma()), frequency.gamma()};
    return ResolventProblem{std::move(g), CMatrix::Identity(n, n), std::move(weights)};
}

double RatioParts::ratio() const {
    if (denominator > 0.0) return numerator / denominator;
    return numerator > 0.0 ? kInf : 0.0;
}

RatioParts kreiss_parts(const NormWeights& weights, const ExponentialProfile& u, const ExponentialProfile& f,
                        const CVector& g) {
    RatioParts parts;
    parts.numerator = weighted_state_norm(weights, u) + u.trace().squaredNorm();
    parts.denominator = squared_norm(f) / weights.forcing + g.squaredNorm();
    return parts;
}

std::uint64_t frequency_seed(std::uint64_t seed, const Frequency& frequency) {
    std::uint64_t h = splitmix(seed);
    h = splitmix(h ^ bits(frequency.tau()));
    for (Index j = 0; j < frequency.eta().size(); ++j) h = splitmix(h ^ bits(frequency.eta()(j)));
    return splitmix(h ^ bits(frequency.gamma()));
}

CVector random_vector(Index size, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    CVector v(size);
    for (Index i = 0; i < size; ++i) {
        const double re = normal(rng);
        v(i) = Complex(re, normal(rng));
    }
    return v;
}

ExponentialProfile random_forcing(const ResolventProblem& problem, std::mt19937_64& rng, int max_power) {
    const double norm = problem.g.norm();
    const double gap = problem.g.spectral_gap();
    const CVector ev = problem.g.eigenvalues();
    std::uniform_real_distribution<double> re_dist(-2.0 * norm, -0.1 * gap);
    std::uniform_real_distribution<double> im_dist(-2.0 * norm, 2.0 * norm);
    std::uniform_int_distribution<int> power_dist(0, std::max(0, max_power));
    Complex mu;
    for (int attempt = 0;; ++attempt) {
        const double re = re_dist(rng);
        mu = Complex(re, im_dist(rng));
        double distance = kInf;
        for (Index i = 0; i < ev.size(); ++i) distance = std::min(distance, std::abs(mu - ev(i)));
        if (distance >= 0.1 * gap) break;
        if (attempt > 1000) throw Error(ErrorKind::ResonantMode, "could not draw a non-resonant exponent");
    }
    const int power = power_dist(rng);
    return ExponentialProfile::single(random_vector(problem.forcing_dim(), rng), mu, power);
}

double span_supremum(const ResolventProblem& problem, const ResolventSolver& solver,
                     const std::vector<ExponentialProfile>& forcing_atoms) {
    const Index k = solver.boundary().rows();
    const Index nf = static_cast<Index>(forcing_atoms.size());
    const Index count = nf + k;
    if (count == 0) return 0.0;
    const Index n = problem.g.n();

    std::vector<ExponentialProfile> solutions;
    solutions.reserve(static_cast<std::size_t>(count));
    for (const auto& f : forcing_atoms)
        solutions.push_back(solver.solve(apply_forcing(problem, f), CVector::Zero(k)).u);
    for (Index l = 0; l < k; ++l)
        solutions.push_back(solver.solve(ExponentialProfile(n), CVector::Unit(k, l)).u);

    CMatrix a(count, count);
    CMatrix b = CMatrix::Zero(count, count);
    std::vector<CVector> traces;
    for (const auto& u : solutions) traces.push_back(u.trace());
    for (Index i = 0; i < count; ++i)
        for (Index j = i; j < count; ++j) {
            // entry (i, j) = <atom_j, atom_i>
            a(i, j) = inner_product(solutions[j], solutions[i], problem.weights.state) + traces[i].dot(traces[j]);
            a(j, i) = std::conj(a(i, j));
        }
    for (Index i = 0; i < nf; ++i)
        for (Index j = i; j < nf; ++j) {
            b(i, j) = inner_product(forcing_atoms[j], forcing_atoms[i]) / problem.weights.forcing;
            b(j, i) = std::conj(b(i, j));
        }
    for (Index l = 0; l < k; ++l) b(nf + l, nf + l) = 1.0;

    Eigen::SelfAdjointEigenSolver<CMatrix> bs(b);
    const Vector& lb = bs.eigenvalues();
    const double cut = 1e-12 * lb.maxCoeff();
    std::vector<Index> keep;
    for (Index i = 0; i < count; ++i)
        if (lb(i) > cut) keep.push_back(i);
    CMatrix basis(count, static_cast<Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c)
        basis.col(static_cast<Index>(c)) = bs.eigenvectors().col(keep[c]) / std::sqrt(lb(keep[c]));
    CMatrix reduced = basis.adjoint() * a * basis;
    reduced = 0.5 * (reduced + reduced.adjoint()).eval();
    return std::max(0.0, Eigen::SelfAdjointEigenSolver<CMatrix>(reduced, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff());
}

StabilityReport kreiss_scan(const std::vector<Frequency>& frequencies, const ProblemFactory& problem_at,
                            const BoundaryFactory& boundary_at, const TrialOptions& options) {
    if (frequencies.empty()) throw Error(ErrorKind::InvalidGrid, "empty frequency set");
    if (options.trials < 0) throw Error(ErrorKind::InvalidArgument, "trial count must be nonnegative");
    std::vector<std::optional<KreissPoint>> slots(frequencies.size());
    parallel_for(frequencies.size(), options.threads, [&](std::size_t i) {
        const Frequency& freq = frequencies[i];
        KreissPoint point{freq};
        const ResolventProblem problem = problem_at(freq);
        const CMatrix boundary = boundary_at(freq);
        std::optional<ResolventSolver> solver;
        try {
            solver.emplace(problem.g, boundary);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::LopatinskiSingular) throw;
            point.singular = true;
            point.sup_ratio = point.max_trial_ratio = kInf;
            slots[i] = point;
            return;
        }
        point.sigma = solver->sigma();
        std::mt19937_64 rng(frequency_seed(options.seed, freq));
        std::vector<ExponentialProfile> atoms;
        for (int t = 0; t < options.trials; ++t) {
            atoms.push_back(random_forcing(problem, rng, options.max_power));
            const CVector g = random_vector(boundary.rows(), rng);
            const auto u = solver->solve(apply_forcing(problem, atoms.back()), g).u;
            point.max_trial_ratio = std::max(point.max_trial_ratio, kreiss_parts(problem.weights, u, atoms.back(), g).ratio());
        }
        point.sup_ratio = span_supremum(problem, *solver, atoms);
        slots[i] = point;
    });

    StabilityReport report;
    report.trials = options.trials;
    report.cap = options.cap;
    for (auto& slot : slots) {
        const KreissPoint& p = *slot;
        const double r = std::max(p.sup_ratio, p.max_trial_ratio);
        if (!report.worst || r > report.max_ratio) {
            report.max_ratio = r;
            report.worst = p.frequency;
        }
        report.points.push_back(std::move(*slot));
    }
    report.stable_on_grid = report.max_ratio < options.cap;
    return report;
}

StabilityReport kreiss_constant(const FirstOrderSystem& system, const BoundarySymbol& boundary,
                                const std::vector<Frequency>& frequencies, const TrialOptions& options) {
    validate_system(system);
    if (boundary.cols() != system.n())
        throw Error(ErrorKind::DimensionMismatch, "boundary symbol must have n columns");
    StabilityReport report = kreiss_scan(
        frequencies, [&](const Frequency& f) { return hyperbolic_problem(system, f); },
        [&](const Frequency& f) { return boundary(f); }, options);
    report.alpha_description = "alpha = gamma";
    return report;
}

double energy_constant(const FirstOrderSystem& system, const Symmetrizer& symmetrizer, const CMatrix& reference) {
    const DissipativityCertificate cert = check_maximal_dissipativity(symmetrizer, system, reference);
    const double s = symmetrizer.lambda_min;
    const double sa = op_norm(Matrix(symmetrizer.S * system.normal()));
    return std::max(cert.C, sa * sa / s) / std::min(cert.c, s);
}

DissipativeConstantEstimate measure_dissipative_constant(const FirstOrderSystem& system,
                                                         const Symmetrizer& symmetrizer,
                                                         const CMatrix& reference,
                                                         const std::vector<Frequency>& frequencies,
                                                         const TrialOptions& options) {
    DissipativeConstantEstimate estimate;
    estimate.energy_bound = energy_constant(system, symmetrizer, reference);
    const StabilityReport report = kreiss_scan(
        frequencies, [&](const Frequency& f) { return hyperbolic_problem(system, f); },
        [&](const Frequency&) { return reference; }, options);
    estimate.c_tilde = report.max_ratio;
    estimate.worst = report.worst;
    estimate.points = report.points;
    return estimate;
}

DecompositionTrace decompose(const ResolventProblem& problem, const CMatrix& boundary, const CMatrix& reference,
                             const ExponentialProfile& f, const CVector& g, const TrialOptions& options) {
    if (f.dim() != problem.forcing_dim()) throw Error(ErrorKind::DimensionMismatch, "forcing has wrong dimension");
    if (g.size() != boundary.rows()) throw Error(ErrorKind::DimensionMismatch, "boundary datum has wrong length");
    const ResolventSolver direct(problem.g, boundary);
    const ResolventSolver auxiliary(problem.g, reference);
    const Index n = problem.g.n();
    const ExponentialProfile pf = apply_forcing(problem, f);
    const NormWeights& wts = problem.weights;

    DecompositionTrace trace;
    trace.frequency = problem.g.frequency();
    trace.alpha = wts.forcing;
    trace.w = auxiliary.solve(pf, CVector::Zero(reference.rows())).u;
    const CVector e_datum = g - boundary * trace.w.trace();
    trace.e = direct.solve(ExponentialProfile(n), e_datum).u;
    trace.u = trace.w + trace.e;
    trace.g_tilde = reference * trace.e.trace();

    trace.reference_trace_residual = (reference * trace.w.trace()).norm();
    trace.w_equation_residual = profile_norm(resolvent_residual(problem.g, trace.w, pf));
    trace.e_equation_residual = profile_norm(resolvent_residual(problem.g, trace.e, ExponentialProfile(n)));
    trace.e_boundary_residual = (boundary * trace.e.trace() - e_datum).norm();

    const ExponentialProfile u_direct = direct.solve(pf, g).u;
    const double direct_norm = profile_norm(u_direct);
    const double diff = profile_norm(u_direct - trace.u);
    trace.direct_relative_error = direct_norm > 0.0 ? diff / direct_norm : diff;

    std::mt19937_64 rng(frequency_seed(options.seed, *problem.g.frequency()));
    std::vector<ExponentialProfile> atoms;
    for (int t = 0; t < options.trials; ++t) atoms.push_back(random_forcing(problem, rng, options.max_power));
    if (!f.empty()) atoms.push_back(f);
    trace.c_tilde = span_supremum(problem, auxiliary, atoms);
    trace.sigma = direct.sigma();
    trace.c_lop = boundary.rows() == 0 ? 0.0 : 1.0 / (trace.sigma * trace.sigma);
    trace.c1 = op_norm(boundary);
    trace.c2 = op_norm(reference);

    const double ct = trace.c_tilde, c = trace.c_lop, c1 = trace.c1, c2 = trace.c2;
    const double f2 = squared_norm(f) / wts.forcing;
    const double g2 = g.squaredNorm();
    const double w_energy = weighted_state_norm(wts, trace.w) + trace.w.trace().squaredNorm();
    const double e_energy = weighted_state_norm(wts, trace.e) + trace.e.trace().squaredNorm();
    const double e0 = trace.e.trace().squaredNorm();
    const double gamma_e0 = (boundary * trace.e.trace()).squaredNorm();
    const double gamma_w0 = (boundary * trace.w.trace()).norm();
    const double gt2 = trace.g_tilde.squaredNorm();
    const double u_energy = weighted_state_norm(wts, trace.u) + trace.u.trace().squaredNorm();
    const double bracket = g2 + c1 * c1 * ct * f2;

    auto add = [&](std::string name, double lhs, double rhs) {
        trace.chain.push_back({std::move(name), lhs, rhs, rhs - lhs});
    };
    add("auxiliary estimate", w_energy, ct * f2);
    add("Lopatinski trace", e0, c * gamma_e0);
    add("triangle inequality", c * gamma_e0, c * std::pow(std::sqrt(g2) + gamma_w0, 2));
    add("auxiliary trace", c * std::pow(std::sqrt(g2) + gamma_w0, 2), 2.0 * c * bracket);
    add("reference estimate", e_energy, ct * gt2);
    add("reference datum", ct * gt2, ct * (reference * trace.e.trace()).squaredNorm());
    add("residual estimate", e_energy, 2.0 * ct * c2 * c2 * c * bracket);
    add("sum", u_energy, 2.0 * ct * f2 + 4.0 * ct * c2 * c2 * c * bracket);

    trace.predicted_constant = std::max(2.0 * ct * (1.0 + 2.0 * ct * c2 * c2 * c * c1 * c1), 4.0 * ct * c2 * c2 * c);
    trace.instance_ratio = kreiss_parts(wts, trace.u, f, g).ratio();
    add("predicted constant", trace.instance_ratio, trace.predicted_constant);
    check_chain(trace);
    return trace;
}

DecompositionTrace proposition_main_decompose(const FirstOrderSystem& system, const Symmetrizer& symmetrizer,
                                              const CMatrix& boundary, const ExponentialProfile& f,
                                              const CVector& g, const Frequency& frequency,
                                              const TrialOptions& options) {
    const CMatrix reference = build_dissipative_bc(symmetrizer, system).cast<Complex>();
    return decompose(hyperbolic_problem(system, frequency), boundary, reference, f, g, options);
}

DirectComparison direct_vs_decomposed(const FirstOrderSystem& system, const Symmetrizer& symmetrizer,
                                      const CMatrix& boundary, const ExponentialProfile& f, const CVector& g,
                                      const Frequency& frequency) {
    const ResolventMatrix gm = resolvent_matrix(system, frequency);
    const CMatrix reference = build_dissipative_bc(symmetrizer, system).cast<Complex>();
    const ResolventSolver direct(gm, boundary);
    const ResolventSolver auxiliary(gm, reference);
    DirectComparison out;
    out.direct = direct.solve(f, g).u;
    const ExponentialProfile w = auxiliary.solve(f, CVector::Zero(reference.rows())).u;
    const ExponentialProfile e = direct.solve(ExponentialProfile(system.n()), g - boundary * w.trace()).u;
    out.decomposed = w + e;
    out.direct_norm = profile_norm(out.direct);
    const double diff = profile_norm(out.direct - out.decomposed);
    out.relative_error = out.direct_norm > 0.0 ? diff / out.direct_norm : diff;
    return out;
}

}  // namespace lopa
