#include "lopa/lopatinski.hpp"

#include "lopa/error.hpp"
#include "lopa/parallel.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace lopa {

namespace {

struct GridPoint {
    Frequency frequency;
    int level;
};

std::vector<GridPoint> hemisphere_points(Index d, double gamma_min, int resolution) {
    if (!(gamma_min > 0.0) || gamma_min > 1.0)
        throw Error(ErrorKind::InvalidGrid, "gamma_min must lie in (0, 1]");
    if (resolution < 2) throw Error(ErrorKind::InvalidGrid, "resolution must be at least 2");
    Index directions = 2;
    if (d == 2) directions = 2 * resolution;
    if (d >= 3) directions = 2 * static_cast<Index>(resolution) * resolution;
    const auto tangential = sphere_points(d, directions);

    std::vector<GridPoint> out;
    for (int level = 0; level < resolution; ++level) {
        const double t = static_cast<double>(level) / static_cast<double>(resolution - 1);
        const double gamma = level + 1 == resolution ? 1.0 : gamma_min * std::pow(1.0 / gamma_min, t);
        const double radius = std::sqrt(std::max(0.0, 1.0 - gamma * gamma));
        if (radius == 0.0) {
            out.push_back({Frequency(0.0, Vector::Zero(d - 1), gamma), level});
            continue;
        }
        for (const auto& p : tangential)
            out.push_back({Frequency(radius * p(0), Vector(radius * p.tail(d - 1)), gamma), level});
    }
    return out;
}

Frequency jittered(const Frequency& f, int attempt) {
    const double delta = 1e-7 * attempt;
    Vector eta = f.eta() * (1.0 + delta);
    eta.array() += delta;
    return Frequency(f.tau() * (1.0 + delta) + delta, eta, f.gamma() * (1.0 + delta));
}

struct PointOutcome {
    bool split_ok = true;
    LopatinskiValue value;
};

PointOutcome evaluate_point(const Frequency& frequency,
                            const std::function<ResolventMatrix(const Frequency&)>& resolvent,
                            const BoundarySymbol& boundary, int retries) {
    PointOutcome out;
    for (int attempt = 0; attempt <= retries; ++attempt) {
        const Frequency f = attempt == 0 ? frequency : jittered(frequency, attempt);
        try {
            out.value = lopatinski_value(resolvent(f), boundary(f));
            out.value.frequency = f;
            out.split_ok = true;
            return out;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::NearImaginaryEigenvalue && e.kind() != ErrorKind::DimensionAnomaly) throw;
            out.split_ok = false;
        }
    }
    out.value.frequency = frequency;
    return out;
}

ScanResult reduce(const std::vector<Frequency>& frequencies, const std::vector<PointOutcome>& outcomes,
                  const std::vector<int>& levels, int level_count, const ScanOptions& options) {
    ScanResult result;
    result.tolerance = options.tolerance;
    result.points = static_cast<Index>(frequencies.size());
    result.inf_sigma = std::numeric_limits<double>::infinity();
    result.level_minima.assign(static_cast<std::size_t>(level_count), std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const auto& o = outcomes[i];
        if (!o.split_ok) {
            result.split_failures.push_back(frequencies[i]);
            continue;
        }
        if (!o.value.rank_ok) ++result.rank_failures;
        if (!result.worst || o.value.sigma < result.inf_sigma) {
            result.inf_sigma = o.value.sigma;
            result.worst = o.value.frequency;
        }
        if (!levels.empty()) {
            auto& slot = result.level_minima[static_cast<std::size_t>(levels[i])];
            slot = std::min(slot, o.value.sigma);
        }
    }
    if (result.rank_failures > 0)
        result.verdict = ScanVerdict::RankFailure;
    else if (!(result.inf_sigma > options.tolerance) || !result.split_failures.empty())
        result.verdict = ScanVerdict::Fails;
    else
        result.verdict = ScanVerdict::Holds;
    // still falling by more than 10% between the two smallest gamma levels
    if (result.verdict == ScanVerdict::Holds && result.level_minima.size() >= 2) {
        const double low = result.level_minima[0];
        const double next = result.level_minima[1];
        if (std::isfinite(next) && low < 0.9 * next) result.inconclusive = true;
    }
    return result;
}

}  // namespace

std::string to_string(ScanVerdict verdict) {
    switch (verdict) {
        case ScanVerdict::Holds: return "holds";
        case ScanVerdict::Fails: return "fails";
        case ScanVerdict::RankFailure: return "rank-failure";
    }
    return "unknown";
}

double lopatinski_sigma(const CMatrix& stable_basis, const CMatrix& boundary) {
    return sigma_min(CMatrix(boundary * stable_basis));
}

LopatinskiValue lopatinski_value(const ResolventMatrix& g, const CMatrix& boundary, bool strict) {
    if (boundary.cols() != g.n()) throw Error(ErrorKind::DimensionMismatch, "boundary matrix must have n columns");
    const SpectralSplit split = stable_subspace(g);
    LopatinskiValue value;
    value.frequency = g.frequency();
    value.rows = boundary.rows();
    value.stable_dim = split.stable.dim();
    value.boundary_norm = op_norm(boundary);
    value.boundary_rank = value.rows == 0 ? 0 : numerical_rank(boundary);
    value.rank_ok = value.rows == value.boundary_rank && value.rows == value.stable_dim;
    if (!value.rank_ok) {
        std::ostringstream msg;
        msg << "k = " << value.rows << ", rank Gamma = " << value.boundary_rank << ", dim E_- = " << value.stable_dim;
        value.rank_detail = msg.str();
        if (strict) throw Error(ErrorKind::RankMismatch, value.rank_detail);
        value.sigma = 0.0;
        value.trace_constant = std::numeric_limits<double>::infinity();
        return value;
    }
    value.sigma = lopatinski_sigma(split.stable.basis, boundary);
    value.trace_constant = value.stable_dim == 0 ? 0.0
                           : value.sigma > 0.0   ? 1.0 / (value.sigma * value.sigma)
                                                 : std::numeric_limits<double>::infinity();
    return value;
}

LopatinskiValue lopatinski_value(const FirstOrderSystem& system, const BoundarySymbol& boundary,
                                 const Frequency& frequency, bool strict) {
    return lopatinski_value(resolvent_matrix(system, frequency), boundary(frequency), strict);
}

std::vector<Frequency> hemisphere_grid(Index d, double gamma_min, int resolution) {
    std::vector<Frequency> out;
    for (auto& p : hemisphere_points(d, gamma_min, resolution)) out.push_back(std::move(p.frequency));
    return out;
}

std::vector<Frequency> box_grid(Index d, double gamma_min, double gamma_max, double tangential_max,
                                int gamma_levels, int tangential_levels) {
    if (!(gamma_min > 0.0) || !(gamma_max >= gamma_min) || gamma_levels < 1 || tangential_levels < 1 ||
        !(tangential_max >= 0.0))
        throw Error(ErrorKind::InvalidGrid, "invalid box grid parameters");
    std::vector<double> gammas;
    for (int i = 0; i < gamma_levels; ++i) {
        const double t = gamma_levels == 1 ? 0.0 : static_cast<double>(i) / (gamma_levels - 1);
        gammas.push_back(gamma_min * std::pow(gamma_max / gamma_min, t));
    }
    std::vector<double> tangential;
    for (int i = 0; i < tangential_levels; ++i) {
        const double t = tangential_levels == 1 ? 0.5 : static_cast<double>(i) / (tangential_levels - 1);
        tangential.push_back(tangential_max * (2.0 * t - 1.0));
    }
    // odometer over the d tangential axes (tau, eta_1, ..., eta_{d-1})
    std::vector<Frequency> out;
    std::vector<int> digit(static_cast<std::size_t>(d), 0);
    for (double gamma : gammas) {
        std::fill(digit.begin(), digit.end(), 0);
        while (true) {
            Vector eta(d - 1);
            for (Index j = 0; j + 1 < d; ++j) eta(j) = tangential[digit[j + 1]];
            out.emplace_back(tangential[digit[0]], eta, gamma);
            std::size_t axis = 0;
            while (axis < digit.size() && ++digit[axis] == tangential_levels) digit[axis++] = 0;
            if (axis == digit.size()) break;
        }
    }
    return out;
}

ScanResult scan_frequencies(const std::vector<Frequency>& frequencies,
                            const std::function<ResolventMatrix(const Frequency&)>& resolvent,
                            const BoundarySymbol& boundary, const ScanOptions& options,
                            std::string grid_description) {
    if (frequencies.empty()) throw Error(ErrorKind::InvalidGrid, "empty frequency set");
    std::vector<PointOutcome> outcomes(frequencies.size());
    parallel_for(frequencies.size(), options.threads, [&](std::size_t i) {
        outcomes[i] = evaluate_point(frequencies[i], resolvent, boundary, options.jitter_retries);
    });
    ScanResult result = reduce(frequencies, outcomes, {}, 0, options);
    result.grid_description = std::move(grid_description);
    return result;
}

ScanResult uniform_scan(const FirstOrderSystem& system, const BoundarySymbol& boundary, const ScanGrid& grid,
                        const ScanOptions& options) {
    validate_system(system);
    if (boundary.cols() != system.n())
        throw Error(ErrorKind::DimensionMismatch, "boundary symbol must have n columns");
    const auto hemisphere = hemisphere_points(system.d(), grid.gamma_min, grid.resolution);

    std::vector<Frequency> frequencies;
    std::vector<int> levels;
    std::vector<double> radii{1.0};
    if (!boundary.is_constant()) {
        if (!(grid.radial_cutoff >= 1.0) || grid.radial_samples < 1)
            throw Error(ErrorKind::InvalidGrid, "radial cutoff must be >= 1 with at least one radial sample");
        radii.clear();
        for (int i = 0; i < grid.radial_samples; ++i) {
            const double t = grid.radial_samples == 1 ? 0.5 : static_cast<double>(i) / (grid.radial_samples - 1);
            radii.push_back(std::pow(grid.radial_cutoff, 2.0 * t - 1.0));
        }
    }
    for (const auto& p : hemisphere)
        for (double r : radii) {
            frequencies.push_back(r == 1.0 ? p.frequency : p.frequency.scaled(r));
            levels.push_back(p.level);
        }

    std::vector<PointOutcome> outcomes(frequencies.size());
    auto resolvent = [&](const Frequency& f) { return resolvent_matrix(system, f); };
    parallel_for(frequencies.size(), options.threads, [&](std::size_t i) {
        outcomes[i] = evaluate_point(frequencies[i], resolvent, boundary, options.jitter_retries);
    });
    ScanResult result = reduce(frequencies, outcomes, levels, grid.resolution, options);

    std::ostringstream desc;
    desc << "hemisphere d=" << system.d() << " resolution=" << grid.resolution << " gamma_min=" << grid.gamma_min
         << " points=" << hemisphere.size();
    if (!boundary.is_constant()) {
        desc << " x radial samples=" << grid.radial_samples << " cutoff=" << grid.radial_cutoff;
        result.radial_cutoff = grid.radial_cutoff;
    }
    result.grid_description = desc.str();
    return result;
}

}  // namespace lopa
