#include "lopa/resolvent.hpp"

#include "lopa/error.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lopa {

namespace {

constexpr int kMaxTaylorTerms = 80;

// Single-linkage labels of the diagonal entries [0, count) of T.
std::vector<int> cluster_labels(const CMatrix& t, Index count, double tol) {
    std::vector<int> label(static_cast<std::size_t>(count), -1);
    int next = 0;
    for (Index i = 0; i < count; ++i) {
        if (label[i] >= 0) continue;
        label[i] = next;
        std::vector<Index> stack{i};
        while (!stack.empty()) {
            const Index a = stack.back();
            stack.pop_back();
            for (Index b = 0; b < count; ++b)
                if (label[b] < 0 && std::abs(t(a, a) - t(b, b)) <= tol) {
                    label[b] = next;
                    stack.push_back(b);
                }
        }
        ++next;
    }
    return label;
}

double cluster_scale(const CMatrix& t, Index count) {
    double s = 0.0;
    for (Index i = 0; i < count; ++i) s = std::max(s, std::abs(t(i, i)));
    return s;
}

// Solves A X - X B = -C for upper-triangular A and B with disjoint spectra.
CMatrix solve_triangular_sylvester(const CMatrix& a, const CMatrix& b, const CMatrix& c) {
    CMatrix x(a.rows(), b.cols());
    for (Index j = 0; j < b.cols(); ++j) {
        CVector rhs = -c.col(j);
        for (Index l = 0; l < j; ++l) rhs += x.col(l) * b(l, j);
        CMatrix shifted = a;
        shifted.diagonal().array() -= b(j, j);
        x.col(j) = shifted.triangularView<Eigen::Upper>().solve(rhs);
    }
    return x;
}

}  // namespace

ResolventMatrix::ResolventMatrix(CMatrix g, std::optional<Frequency> source,
                                 std::optional<Index> expected_stable_dim)
    : g_(std::move(g)),
      source_(std::move(source)),
      expected_stable_dim_(expected_stable_dim),
      norm_(0.0) {
    if (g_.rows() != g_.cols()) throw Error(ErrorKind::DimensionMismatch, "resolvent matrix must be square");
    if (!g_.allFinite()) throw Error(ErrorKind::ValueError, "non-finite resolvent matrix");
    norm_ = op_norm(g_);
    schur_ = complex_schur(g_);
}

double ResolventMatrix::spectral_gap() const {
    double gap = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < schur_.T.rows(); ++i) gap = std::min(gap, std::abs(schur_.T(i, i).real()));
    return gap;
}

ResolventMatrix resolvent_matrix(const FirstOrderSystem& system, const Frequency& frequency) {
    validate_system(system);
    const Index n = system.n();
    if (frequency.eta().size() != system.d() - 1)
        throw Error(ErrorKind::DimensionMismatch, "eta must have length d - 1");
    CMatrix rhs = frequency.lambda() * CMatrix::Identity(n, n);
    for (Index j = 0; j + 1 < system.d(); ++j)
        rhs += Complex(0.0, frequency.eta()(j)) * system.coefficient(j).cast<Complex>();
    const Eigen::PartialPivLU<Matrix> lu(system.normal());
    CMatrix g = -(lu.solve(Matrix::Identity(n, n)).cast<Complex>() * rhs);
    return ResolventMatrix(std::move(g), frequency, system.incoming_count());
}

HerschCheck check_hersch(const ResolventMatrix& g, double tol) {
    HerschCheck check;
    const double scale = 1.0 + g.norm();
    check.margin = std::numeric_limits<double>::infinity();
    const CVector ev = g.eigenvalues();
    for (Index i = 0; i < ev.size(); ++i) {
        const double m = std::abs(ev(i).real()) / scale;
        if (m < check.margin) {
            check.margin = m;
            check.offending = ev(i);
        }
    }
    check.pass = check.margin > tol;
    return check;
}

SpectralSplit stable_subspace(const ResolventMatrix& g) {
    const HerschCheck hersch = check_hersch(g);
    if (!hersch.pass) {
        std::ostringstream msg;
        msg << "eigenvalue " << hersch.offending << " is too close to the imaginary axis";
        throw Error(ErrorKind::NearImaginaryEigenvalue, msg.str());
    }

    SchurForm stable = g.schur();
    const Index m = reorder_schur(stable, [](Complex z) { return z.real() < 0.0; });
    if (g.expected_stable_dim() && *g.expected_stable_dim() != m) {
        std::ostringstream msg;
        msg << "stable dimension " << m << " differs from n_+ = " << *g.expected_stable_dim();
        throw Error(ErrorKind::DimensionAnomaly, msg.str());
    }

    // make near-equal stable eigenvalues contiguous; only distinct clusters are swapped
    const double tol = kClusterTolerance * cluster_scale(stable.T, m);
    std::vector<int> label = cluster_labels(stable.T, m, tol);
    const int cluster_count = m == 0 ? 0 : *std::max_element(label.begin(), label.end()) + 1;
    Index placed = 0;
    for (int c = 0; c < cluster_count; ++c) {
        for (Index k = placed; k < m; ++k) {
            if (label[k] != c) continue;
            for (Index j = k - 1; j >= placed; --j) {
                swap_schur_entries(stable, j);
                std::swap(label[j], label[j + 1]);
            }
            ++placed;
        }
    }

    SchurForm unstable = g.schur();
    const Index mu = reorder_schur(unstable, [](Complex z) { return z.real() > 0.0; });

    SpectralSplit split;
    split.stable.kind = SubspaceBasis::Kind::Stable;
    split.stable.basis = stable.Q.leftCols(m);
    split.stable.generator = stable.T.topLeftCorner(m, m);
    split.unstable.kind = SubspaceBasis::Kind::Unstable;
    split.unstable.basis = unstable.Q.leftCols(mu);
    split.unstable.generator = unstable.T.topLeftCorner(mu, mu);
    return split;
}

CVector propagate(const SubspaceBasis& stable, const CVector& coefficients, double x) {
    if (coefficients.size() != stable.dim())
        throw Error(ErrorKind::DimensionMismatch, "coefficient vector must match the stable dimension");
    if (stable.dim() == 0) return CVector::Zero(stable.basis.rows());
    const CMatrix block = (x * stable.generator).exp();
    return stable.basis * (block * coefficients);
}

// --- solver -----------------------------------------------------------------

ResolventSolver::ResolventSolver(const ResolventMatrix& g, CMatrix boundary)
    : g_(g), boundary_(std::move(boundary)) {
    const Index n = g_.n();
    if (boundary_.cols() != n)
        throw Error(ErrorKind::DimensionMismatch, "boundary matrix must have n columns");
    split_ = stable_subspace(g_);
    const CMatrix& v = split_.stable.basis;
    const Index m = v.cols();
    const Index k = boundary_.rows();
    if (k != m) {
        std::ostringstream msg;
        msg << k << " boundary rows against a stable subspace of dimension " << m;
        throw Error(ErrorKind::LopatinskiSingular, msg.str());
    }
    const CMatrix gv = boundary_ * v;
    sigma_ = sigma_min(gv);
    if (m > 0) {
        if (!(sigma_ > kRankTolerance * std::max(op_norm(boundary_), 1e-300))) {
            std::ostringstream msg;
            msg << "sigma_min(Gamma V) = " << sigma_;
            throw Error(ErrorKind::LopatinskiSingular, msg.str());
        }
        boundary_lu_.compute(gv);
    }

    // Block-diagonalize the stable generator cluster by cluster.
    const CMatrix& t = split_.stable.generator;
    const double tol = kClusterTolerance * cluster_scale(t, m);
    const std::vector<int> label = cluster_labels(t, m, tol);
    for (Index i = 0; i < m;) {
        Index j = i;
        Complex mean(0.0, 0.0);
        while (j < m && label[j] == label[i]) mean += t(j, j), ++j;
        clusters_.push_back({i, j - i, mean / static_cast<double>(j - i)});
        i = j;
    }
    decoupling_ = CMatrix::Identity(m, m);
    block_diagonal_ = t;
    for (std::size_t c = 0; c + 1 < clusters_.size(); ++c) {
        const Index s = clusters_[c].start;
        const Index e = s + clusters_[c].size;
        const Index rest = m - e;
        const CMatrix x = solve_triangular_sylvester(block_diagonal_.block(s, s, e - s, e - s),
                                                     block_diagonal_.block(e, e, rest, rest),
                                                     block_diagonal_.block(s, e, e - s, rest));
        block_diagonal_.block(s, e, e - s, rest).setZero();
        decoupling_.rightCols(rest) += decoupling_.block(0, s, m, e - s) * x;
    }
}

ExponentialProfile ResolventSolver::particular(const ExponentialProfile& f) const {
    const Index n = g_.n();
    if (f.dim() != n) throw Error(ErrorKind::DimensionMismatch, "forcing has wrong dimension");
    const CVector ev = g_.eigenvalues();
    const double tol = kResonanceTolerance * (1.0 + g_.norm());
    std::vector<ProfileTerm> out;
    for (const auto& term : f.terms()) {
        for (Index i = 0; i < ev.size(); ++i) {
            if (std::abs(term.mu - ev(i)) <= tol) {
                std::ostringstream msg;
                msg << "forcing exponent " << term.mu << " coincides with eigenvalue " << ev(i);
                throw Error(ErrorKind::ResonantMode, msg.str());
            }
        }
        const CMatrix shifted = term.mu * CMatrix::Identity(n, n) - g_.matrix();
        const Eigen::PartialPivLU<CMatrix> lu(shifted);
        // (mu - G) w_m = v,  (mu - G) w_j = -(j + 1) w_{j+1}
        CVector w = lu.solve(term.v);
        out.push_back({w, term.mu, term.power});
        for (int j = term.power - 1; j >= 0; --j) {
            w = lu.solve(CVector(-static_cast<double>(j + 1) * w));
            out.push_back({w, term.mu, j});
        }
    }
    return ExponentialProfile(n, std::move(out));
}

ExponentialProfile ResolventSolver::homogeneous(const CVector& coefficients) const {
    const CMatrix& v = split_.stable.basis;
    const Index m = v.cols();
    if (coefficients.size() != m)
        throw Error(ErrorKind::DimensionMismatch, "coefficient vector must match the stable dimension");
    std::vector<ProfileTerm> out;
    if (m == 0) return ExponentialProfile(g_.n());
    const CVector d = decoupling_.triangularView<Eigen::UnitUpper>().solve(coefficients);
    const CMatrix columns = v * decoupling_;
    for (const auto& cluster : clusters_) {
        CVector y = d.segment(cluster.start, cluster.size);
        const double reference = y.norm();
        if (reference == 0.0) continue;
        CMatrix nilpotent = block_diagonal_.block(cluster.start, cluster.start, cluster.size, cluster.size);
        nilpotent.diagonal().array() -= cluster.mean;
        const CMatrix basis = columns.middleCols(cluster.start, cluster.size);
        const double rate = -cluster.mean.real();
        // e^{x D_c} = e^{mean x} sum_k x^k N^k / k!, truncated once the
        // envelope sup_x x^k e^{-rate x} |N^k y / k!| is negligible
        for (int k = 0; k < kMaxTaylorTerms; ++k) {
            out.push_back({basis * y, cluster.mean, k});
            y = nilpotent * y / static_cast<double>(k + 1);
            const double yn = y.norm();
            if (yn == 0.0) break;
            if (k + 1 >= cluster.size) {
                const double kk = static_cast<double>(k + 1);
                const double envelope = yn * std::pow(kk / (M_E * rate), kk);
                if (envelope <= 1e-17 * reference) break;
            }
        }
    }
    return ExponentialProfile(g_.n(), std::move(out));
}

ResolventSolution ResolventSolver::solve(const ExponentialProfile& f, const CVector& data) const {
    if (data.size() != boundary_.rows())
        throw Error(ErrorKind::DimensionMismatch, "boundary datum must have k entries");
    ResolventSolution solution;
    const ExponentialProfile up = particular(f);
    const Index m = split_.stable.dim();
    solution.coefficients = CVector::Zero(m);
    if (m > 0) solution.coefficients = boundary_lu_.solve(CVector(data - boundary_ * up.trace()));
    solution.u = up + homogeneous(solution.coefficients);
    solution.boundary_residual = (boundary_ * solution.u.trace() - data).norm();
    solution.residual_norm = profile_norm(resolvent_residual(g_, solution.u, f));
    solution.sigma = sigma_;
    return solution;
}

ResolventSolution solve_resolvent(const ResolventMatrix& g, const CMatrix& boundary,
                                  const ExponentialProfile& f, const CVector& data) {
    return ResolventSolver(g, boundary).solve(f, data);
}

ExponentialProfile resolvent_residual(const ResolventMatrix& g, const ExponentialProfile& u,
                                      const ExponentialProfile& f) {
    return u.derivative() - g.matrix() * u - f;
}

}  // namespace lopa
