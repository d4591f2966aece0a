#include "lopa/symmetrizer.hpp"

#include "lopa/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace lopa {

namespace {

double symmetry_residual(const Matrix& s, const FirstOrderSystem& system) {
    double r = 0.0;
    for (const auto& a : system.coefficients()) {
        const Matrix sa = s * a;
        r = std::max(r, op_norm(Matrix(sa - sa.transpose())));
    }
    return r;
}

// Frobenius-orthonormal basis of the symmetric n x n matrices.
std::vector<Matrix> symmetric_basis(Index n) {
    std::vector<Matrix> basis;
    for (Index a = 0; a < n; ++a)
        for (Index b = a; b < n; ++b) {
            Matrix e = Matrix::Zero(n, n);
            if (a == b) {
                e(a, a) = 1.0;
            } else {
                e(a, b) = e(b, a) = M_SQRT1_2;
            }
            basis.push_back(std::move(e));
        }
    return basis;
}

Matrix symmetric_normal_product(const Symmetrizer& symmetrizer, const FirstOrderSystem& system) {
    return symmetric_part(symmetrizer.S * system.normal());
}

}  // namespace

Symmetrizer make_symmetrizer(const Matrix& s, const FirstOrderSystem& system) {
    if (s.rows() != system.n() || s.cols() != system.n())
        throw Error(ErrorKind::DimensionMismatch, "symmetrizer must be n x n");
    Symmetrizer out;
    out.S = symmetric_part(s);
    out.residual = symmetry_residual(out.S, system);
    out.lambda_min = Eigen::SelfAdjointEigenSolver<Matrix>(out.S, Eigen::EigenvaluesOnly).eigenvalues()(0);
    if (!(out.lambda_min > 0.0)) throw Error(ErrorKind::InvalidArgument, "symmetrizer is not positive definite");
    const double bound = 1e-6 * op_norm(out.S) * system.max_coefficient_norm();
    if (out.residual > bound) {
        std::ostringstream msg;
        msg << "S A^j is not symmetric (residual " << out.residual << ")";
        throw Error(ErrorKind::InvalidArgument, msg.str());
    }
    return out;
}

SymmetrizerSearch find_symmetrizer(const FirstOrderSystem& system, const SymmetrizerOptions& options) {
    const Index n = system.n();
    const auto sym = symmetric_basis(n);
    const Index p = static_cast<Index>(sym.size());

    // Linear constraints  S A^j - (A^j)^T S = 0  in symmetric coordinates.
    Matrix constraints(system.d() * n * n, p);
    for (Index col = 0; col < p; ++col) {
        Index row = 0;
        for (const auto& a : system.coefficients()) {
            const Matrix c = sym[col] * a - a.transpose() * sym[col];
            for (Index j = 0; j < n; ++j)
                for (Index i = 0; i < n; ++i) constraints(row++, col) = c(i, j);
        }
    }
    Eigen::JacobiSVD<Matrix> svd(constraints, Eigen::ComputeFullV);
    const Vector& sv = svd.singularValues();
    const double cut = options.null_space_tolerance * std::max(sv.size() > 0 ? sv(0) : 0.0, 1e-300);
    Index rank = 0;
    for (Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cut) ++rank;
    const Matrix null_coords = svd.matrixV().rightCols(p - rank);

    SymmetrizerSearch result;
    result.subspace_dim = null_coords.cols();
    result.best_lambda_min = -std::numeric_limits<double>::infinity();
    if (result.subspace_dim == 0) return result;

    std::vector<Matrix> basis;
    Vector traces(result.subspace_dim);
    for (Index i = 0; i < result.subspace_dim; ++i) {
        Matrix s = Matrix::Zero(n, n);
        for (Index c = 0; c < p; ++c) s += null_coords(c, i) * sym[c];
        traces(i) = s.trace();
        basis.push_back(std::move(s));
    }
    const double trace_norm2 = traces.squaredNorm();
    // A positive definite element has positive trace.
    if (trace_norm2 <= 1e-24) return result;

    auto assemble = [&](const Vector& c) {
        Matrix s = Matrix::Zero(n, n);
        for (Index i = 0; i < c.size(); ++i) s += c(i) * basis[i];
        return s;
    };

    const double target = static_cast<double>(n);
    Vector c = (target / trace_norm2) * traces;
    const double step0 = 0.5 * c.norm();
    Vector best = c;
    Eigen::SelfAdjointEigenSolver<Matrix> eig;
    for (int k = 1; k <= options.iterations; ++k) {
        result.iterations = k;
        eig.compute(assemble(c));
        const double lmin = eig.eigenvalues()(0);
        if (lmin > result.best_lambda_min) {
            result.best_lambda_min = lmin;
            best = c;
        }
        const Vector v = eig.eigenvectors().col(0);
        Vector g(result.subspace_dim);
        for (Index i = 0; i < g.size(); ++i) g(i) = v.dot(basis[i] * v);
        g -= (g.dot(traces) / trace_norm2) * traces;
        const double gn = g.norm();
        if (gn <= 1e-14) break;  // lambda_min is stationary on the slice
        c += (step0 / k) * (g / gn);
        c -= ((c.dot(traces) - target) / trace_norm2) * traces;
    }

    if (result.best_lambda_min > options.success_threshold) {
        Matrix s = symmetric_part(assemble(best));
        s *= target / s.trace();
        Symmetrizer out;
        out.S = s;
        out.residual = symmetry_residual(s, system);
        out.lambda_min = Eigen::SelfAdjointEigenSolver<Matrix>(s, Eigen::EigenvaluesOnly).eigenvalues()(0);
        result.symmetrizer = out;
        result.feasible = true;
    }
    return result;
}

DissipativityCertificate check_maximal_dissipativity(const Symmetrizer& symmetrizer,
                                                     const FirstOrderSystem& system,
                                                     const CMatrix& boundary) {
    const Index n = system.n();
    if (boundary.cols() != n) throw Error(ErrorKind::DimensionMismatch, "boundary matrix must have n columns");
    const Index k = boundary.rows();
    if (numerical_rank(boundary) < k) throw Error(ErrorKind::RankDeficient, "boundary matrix is rank deficient");

    const Matrix sa = symmetric_normal_product(symmetrizer, system);
    const double scale = std::max(op_norm(sa), 1e-300);
    const Vector sa_eigs = Eigen::SelfAdjointEigenSolver<Matrix>(sa, Eigen::EigenvaluesOnly).eigenvalues();
    Index incoming = 0;
    for (Index i = 0; i < n; ++i)
        if (sa_eigs(i) > 0.0) ++incoming;

    DissipativityCertificate cert;
    cert.incoming = incoming;
    cert.rows = k;
    if (k != incoming) {
        std::ostringstream msg;
        msg << k << " boundary rows but S A_d has " << incoming << " positive eigenvalues";
        throw Error(ErrorKind::WrongBoundaryCount, msg.str());
    }

    const CMatrix sac = sa.cast<Complex>();
    const CMatrix kernel = null_space(boundary);
    const CMatrix range = orthonormal_range(boundary.adjoint());
    if (kernel.cols() > 0) {
        const CMatrix h = kernel.adjoint() * sac * kernel;
        cert.kernel_value = Eigen::SelfAdjointEigenSolver<CMatrix>(h, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
        if (!(cert.kernel_value < -kRankTolerance * scale)) {
            std::ostringstream msg;
            msg << "S A_d is not negative on ker Gamma (max " << cert.kernel_value << ")";
            throw Error(ErrorKind::NotNegativeOnKernel, msg.str());
        }
        cert.c = -cert.kernel_value;
    } else {
        cert.kernel_value = -std::numeric_limits<double>::infinity();
        cert.c = sa_eigs(0);
    }

    // Smallest C with  -S A_d - c I + C Gamma^* Gamma >= 0, from the Schur
    // complement on the kernel / co-kernel splitting. If the extremal kernel
    // direction couples to the co-kernel no finite C exists at this c, so c
    // is halved.
    auto minimal_c = [&](double c) -> std::optional<double> {
        if (range.cols() == 0) return 0.0;
        const CMatrix m = -sac - c * CMatrix::Identity(n, n);
        const CMatrix gram = range.adjoint() * boundary.adjoint() * boundary * range;
        const CMatrix mrr = range.adjoint() * m * range;
        CMatrix schur = -mrr;
        if (kernel.cols() > 0) {
            const CMatrix mnn = kernel.adjoint() * m * kernel;
            const CMatrix mnr = kernel.adjoint() * m * range;
            Eigen::SelfAdjointEigenSolver<CMatrix> es(mnn);
            const double null_tol = 1e-10 * scale;
            for (Index i = 0; i < mnn.rows(); ++i) {
                const double nu = es.eigenvalues()(i);
                const CVector z = es.eigenvectors().col(i);
                const double coupling = (z.adjoint() * mnr).norm();
                if (nu <= null_tol) {
                    if (coupling > 1e-9 * scale) return std::nullopt;
                    continue;
                }
                schur += (mnr.adjoint() * z) * (z.adjoint() * mnr) / nu;
            }
        }
        Eigen::SelfAdjointEigenSolver<CMatrix> gs(gram);
        const Vector inv_sqrt = gs.eigenvalues().cwiseSqrt().cwiseInverse();
        const CMatrix w = gs.eigenvectors() * inv_sqrt.cast<Complex>().asDiagonal() * gs.eigenvectors().adjoint();
        const CMatrix reduced = w * schur * w;
        const double top = Eigen::SelfAdjointEigenSolver<CMatrix>(CMatrix(0.5 * (reduced + reduced.adjoint())),
                                                                  Eigen::EigenvaluesOnly)
                               .eigenvalues()
                               .maxCoeff();
        return std::max(0.0, top);
    };

    std::optional<double> big_c = minimal_c(cert.c);
    while (!big_c) {
        cert.c *= 0.5;
        big_c = minimal_c(cert.c);
    }
    cert.C = *big_c;

    const CMatrix q = -sac - cert.c * CMatrix::Identity(n, n) + cert.C * boundary.adjoint() * boundary;
    cert.exact_residual = Eigen::SelfAdjointEigenSolver<CMatrix>(CMatrix(0.5 * (q + q.adjoint())),
                                                                 Eigen::EigenvaluesOnly)
                              .eigenvalues()
                              .minCoeff();
    return cert;
}

double sample_certificate(const DissipativityCertificate& certificate, const Symmetrizer& symmetrizer,
                          const FirstOrderSystem& system, const CMatrix& boundary, int samples,
                          unsigned seed) {
    const Index n = system.n();
    const CMatrix sa = symmetric_normal_product(symmetrizer, system).cast<Complex>();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    double worst = std::numeric_limits<double>::infinity();
    for (int s = 0; s < samples; ++s) {
        CVector h(n);
        for (Index i = 0; i < n; ++i) h(i) = Complex(normal(rng), normal(rng));
        h.normalize();
        const double value = -(h.dot(sa * h)).real() - certificate.c + certificate.C * (boundary * h).squaredNorm();
        worst = std::min(worst, value);
    }
    return worst;
}

Matrix build_dissipative_bc(const Symmetrizer& symmetrizer, const FirstOrderSystem& system) {
    const Matrix sa = symmetric_normal_product(symmetrizer, system);
    const Index n = system.n();
    Eigen::SelfAdjointEigenSolver<Matrix> es(sa);
    const double scale = std::max(op_norm(sa), 1e-300);
    for (Index i = 0; i < n; ++i)
        if (std::abs(es.eigenvalues()(i)) <= kRankTolerance * scale)
            throw Error(ErrorKind::DegenerateSplitting, "S A_d has an eigenvalue near zero");
    Index positive = 0;
    for (Index i = 0; i < n; ++i)
        if (es.eigenvalues()(i) > 0.0) ++positive;
    // eigenvalues ascend, so the positive block sits at the end; reverse it
    Matrix basis(n, positive);
    for (Index j = 0; j < positive; ++j) basis.col(j) = es.eigenvectors().col(n - 1 - j);
    normalize_column_signs(basis);
    return basis.transpose();
}

CMatrix adjoint_bc(const FirstOrderSystem& system, const CMatrix& boundary) {
    const Index n = system.n();
    if (boundary.cols() != n) throw Error(ErrorKind::DimensionMismatch, "boundary matrix must have n columns");
    if (numerical_rank(boundary) < boundary.rows())
        throw Error(ErrorKind::RankDeficient, "boundary matrix is rank deficient");
    const CMatrix kernel = null_space(boundary);
    const CMatrix image = system.normal().cast<Complex>() * kernel;
    return orthonormal_range(image).adjoint();
}

AdjointProblem adjoint_forward_form(const FirstOrderSystem& system, const CMatrix& boundary) {
    std::vector<Matrix> reversed;
    reversed.reserve(system.coefficients().size());
    for (const auto& a : system.coefficients()) reversed.push_back(-a.transpose());
    std::string name = system.name().empty() ? std::string() : system.name() + "-adjoint";
    return AdjointProblem{FirstOrderSystem(std::move(reversed), std::move(name)), adjoint_bc(system, boundary)};
}

}  // namespace lopa
