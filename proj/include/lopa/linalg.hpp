#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <vector>

namespace lopa {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Shared relative tolerance for rank and splitting decisions.
inline constexpr double kRankTolerance = 1e-10;

/// Spectral norm; zero for empty matrices.
double op_norm(const CMatrix& m);
double op_norm(const Matrix& m);

/// Singular values in descending order.
Vector singular_values(const CMatrix& m);

/// Smallest of the min(rows, cols) singular values; +inf for an empty matrix.
double sigma_min(const CMatrix& m);

/// Number of singular values above rel_tol times the largest one.
Index numerical_rank(const CMatrix& m, double rel_tol = kRankTolerance);

/// Orthonormal basis of the kernel, columns phase-normalized.
CMatrix null_space(const CMatrix& m, double rel_tol = kRankTolerance);

/// Orthonormal basis of the column space, columns phase-normalized.
CMatrix orthonormal_range(const CMatrix& m, double rel_tol = kRankTolerance);

/// Rotates every column so its largest-magnitude entry is real and positive.
void normalize_column_phases(CMatrix& basis);
void normalize_column_signs(Matrix& basis);

Matrix symmetric_part(const Matrix& m);

/// Upper-triangular complex Schur form  A = Q T Q^*.
struct SchurForm {
    CMatrix Q;
    CMatrix T;
};

SchurForm complex_schur(const CMatrix& a);

/// Exchanges the diagonal entries k and k+1 of T by a unitary rotation,
/// updating Q so that A = Q T Q^* still holds.
void swap_schur_entries(SchurForm& schur, Index k);

/// Moves every diagonal entry satisfying `select` to the leading block,
/// preserving relative order. Returns the size of the leading block.
Index reorder_schur(SchurForm& schur, const std::function<bool(Complex)>& select);

/// Largest principal angle (radians) between the column spaces of two
/// orthonormal bases of equal dimension.
double max_principal_angle(const CMatrix& a, const CMatrix& b);

}  // namespace lopa
