#include "lopa/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

namespace lopa {

double op_norm(const CMatrix& m) {
    if (m.size() == 0) return 0.0;
    return Eigen::JacobiSVD<CMatrix>(m).singularValues()(0);
}

double op_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
}

Vector singular_values(const CMatrix& m) {
    if (m.size() == 0) return Vector();
    return Eigen::JacobiSVD<CMatrix>(m).singularValues();
}

double sigma_min(const CMatrix& m) {
    if (m.size() == 0) return std::numeric_limits<double>::infinity();
    const Vector s = singular_values(m);
    return s(s.size() - 1);
}

Index numerical_rank(const CMatrix& m, double rel_tol) {
    if (m.size() == 0) return 0;
    const Vector s = singular_values(m);
    if (s(0) == 0.0) return 0;
    const double cut = rel_tol * s(0);
    Index r = 0;
    for (Index i = 0; i < s.size(); ++i)
        if (s(i) > cut) ++r;
    return r;
}

CMatrix null_space(const CMatrix& m, double rel_tol) {
    const Index cols = m.cols();
    if (m.rows() == 0) return CMatrix::Identity(cols, cols);
    Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullV);
    const Vector& s = svd.singularValues();
    Index r = 0;
    if (s.size() > 0 && s(0) > 0.0) {
        const double cut = rel_tol * s(0);
        for (Index i = 0; i < s.size(); ++i)
            if (s(i) > cut) ++r;
    }
    CMatrix basis = svd.matrixV().rightCols(cols - r);
    normalize_column_phases(basis);
    return basis;
}

CMatrix orthonormal_range(const CMatrix& m, double rel_tol) {
    if (m.cols() == 0) return CMatrix(m.rows(), 0);
    Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU);
    const Vector& s = svd.singularValues();
    Index r = 0;
    if (s.size() > 0 && s(0) > 0.0) {
        const double cut = rel_tol * s(0);
        for (Index i = 0; i < s.size(); ++i)
            if (s(i) > cut) ++r;
    }
    CMatrix basis = svd.matrixU().leftCols(r);
    normalize_column_phases(basis);
    return basis;
}

void normalize_column_phases(CMatrix& basis) {
    for (Index j = 0; j < basis.cols(); ++j) {
        Index best = 0;
        double best_abs = -1.0;
        for (Index i = 0; i < basis.rows(); ++i) {
            // small slack so near-ties resolve to the first index
            const double a = std::abs(basis(i, j));
            if (a > best_abs * (1.0 + 1e-12)) {
                best_abs = a;
                best = i;
            }
        }
        if (best_abs <= 0.0) continue;
        const Complex phase = std::conj(basis(best, j)) / best_abs;
        basis.col(j) *= phase;
        basis(best, j) = Complex(std::abs(basis(best, j)), 0.0);
    }
}

void normalize_column_signs(Matrix& basis) {
    for (Index j = 0; j < basis.cols(); ++j) {
        Index best = 0;
        double best_abs = -1.0;
        for (Index i = 0; i < basis.rows(); ++i) {
            const double a = std::abs(basis(i, j));
            if (a > best_abs * (1.0 + 1e-12)) {
                best_abs = a;
                best = i;
            }
        }
        if (basis(best, j) < 0.0) basis.col(j) *= -1.0;
    }
}

Matrix symmetric_part(const Matrix& m) { return 0.5 * (m + m.transpose()); }

SchurForm complex_schur(const CMatrix& a) {
    if (a.size() == 0) return {CMatrix(0, 0), CMatrix(0, 0)};
    Eigen::ComplexSchur<CMatrix> schur(a, true);
    return {schur.matrixU(), schur.matrixT()};
}

void swap_schur_entries(SchurForm& schur, Index k) {
    CMatrix& T = schur.T;
    CMatrix& Q = schur.Q;
    const Index n = T.rows();
    const Complex a = T(k, k);
    const Complex b = T(k + 1, k + 1);
    const Complex t = T(k, k + 1);

    // (t, b - a) is the eigenvector of the 2x2 block for eigenvalue b.
    Complex z0 = t;
    Complex z1 = b - a;
    const double rho = std::hypot(std::abs(z0), std::abs(z1));
    if (rho == 0.0) return;
    z0 /= rho;
    z1 /= rho;
    // Z = [[z0, -conj(z1)], [z1, conj(z0)]] is unitary.
    const Complex w0 = -std::conj(z1);
    const Complex w1 = std::conj(z0);

    for (Index j = k; j < n; ++j) {
        const Complex r0 = T(k, j);
        const Complex r1 = T(k + 1, j);
        T(k, j) = std::conj(z0) * r0 + std::conj(z1) * r1;
        T(k + 1, j) = std::conj(w0) * r0 + std::conj(w1) * r1;
    }
    for (Index i = 0; i <= k + 1; ++i) {
        const Complex c0 = T(i, k);
        const Complex c1 = T(i, k + 1);
        T(i, k) = c0 * z0 + c1 * z1;
        T(i, k + 1) = c0 * w0 + c1 * w1;
    }
    for (Index i = 0; i < Q.rows(); ++i) {
        const Complex c0 = Q(i, k);
        const Complex c1 = Q(i, k + 1);
        Q(i, k) = c0 * z0 + c1 * z1;
        Q(i, k + 1) = c0 * w0 + c1 * w1;
    }
    T(k + 1, k) = Complex(0.0, 0.0);
}

Index reorder_schur(SchurForm& schur, const std::function<bool(Complex)>& select) {
    const Index n = schur.T.rows();
    Index placed = 0;
    for (Index k = 0; k < n; ++k) {
        if (!select(schur.T(k, k))) continue;
        for (Index j = k - 1; j >= placed; --j) swap_schur_entries(schur, j);
        ++placed;
    }
    return placed;
}

double max_principal_angle(const CMatrix& a, const CMatrix& b) {
    if (a.cols() == 0 && b.cols() == 0) return 0.0;
    if (a.cols() != b.cols()) return M_PI / 2;
    // sine form keeps precision for tiny angles
    const CMatrix residual = b - a * (a.adjoint() * b);
    return std::asin(std::clamp(op_norm(residual), 0.0, 1.0));
}

}  // namespace lopa
