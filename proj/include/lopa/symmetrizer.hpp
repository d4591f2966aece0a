#pragma once

#include "lopa/linalg.hpp"
#include "lopa/system.hpp"

#include <optional>

namespace lopa {

/// Friedrichs symmetrizer: S = S^T > 0 with every S A^j symmetric.
struct Symmetrizer {
    Matrix S;
    /// max_j || S A^j - (S A^j)^T ||
    double residual = 0.0;
    double lambda_min = 0.0;
};

/// Wraps a candidate matrix after checking the symmetrizer invariants;
/// throws InvalidArgument when S is not positive definite or fails the
/// residual bound 1e-6 ||S|| max_j ||A^j||.
Symmetrizer make_symmetrizer(const Matrix& s, const FirstOrderSystem& system);

struct SymmetrizerOptions {
    int iterations = 500;
    double success_threshold = 1e-6;
    double null_space_tolerance = 1e-9;
};

struct SymmetrizerSearch {
    bool feasible = false;
    std::optional<Symmetrizer> symmetrizer;
    /// best lambda_min reached on the trace-n slice (-inf if the slice is empty)
    double best_lambda_min = 0.0;
    /// dimension of the space of symmetric S with S A^j symmetric
    Index subspace_dim = 0;
    int iterations = 0;
};

/// Maximizes lambda_min over the trace-n slice of the symmetrizing subspace
/// by projected subgradient ascent (step 1/k).
SymmetrizerSearch find_symmetrizer(const FirstOrderSystem& system, const SymmetrizerOptions& options = {});

/// Coercivity constants for  -(S A_d h, h) >= c |h|^2 - C |Gamma h|^2.
struct DissipativityCertificate {
    double c = 0.0;
    double C = 0.0;
    /// max of (S A_d h, h) over unit h in ker Gamma; -inf when ker Gamma = {0}
    double kernel_value = 0.0;
    Index incoming = 0;
    Index rows = 0;
    /// lambda_min(-S A_d - c I + C Gamma^* Gamma), nonnegative up to rounding
    double exact_residual = 0.0;
};

/// Throws RankDeficient, WrongBoundaryCount or NotNegativeOnKernel.
DissipativityCertificate check_maximal_dissipativity(const Symmetrizer& symmetrizer,
                                                     const FirstOrderSystem& system,
                                                     const CMatrix& boundary);

/// Smallest value of -(S A_d h,h) - c|h|^2 + C|Gamma h|^2 over `samples`
/// random unit vectors h (seeded).
double sample_certificate(const DissipativityCertificate& certificate, const Symmetrizer& symmetrizer,
                          const FirstOrderSystem& system, const CMatrix& boundary, int samples,
                          unsigned seed = 0);

/// Gamma~ = B^T where the columns of B are an orthonormal basis of the
/// positive eigenspace of S A_d (descending eigenvalues, sign-normalized).
/// Throws DegenerateSplitting for a near-zero eigenvalue of S A_d.
Matrix build_dissipative_bc(const Symmetrizer& symmetrizer, const FirstOrderSystem& system);

/// (n - k) x n matrix whose kernel is (A_d ker Gamma)^perp. Throws RankDeficient.
CMatrix adjoint_bc(const FirstOrderSystem& system, const CMatrix& boundary);

struct AdjointProblem {
    FirstOrderSystem system;
    CMatrix boundary;
};

/// Time-reversed adjoint: matrices -(A^j)^T and boundary adjoint_bc(system, boundary).
AdjointProblem adjoint_forward_form(const FirstOrderSystem& system, const CMatrix& boundary);

}  // namespace lopa
