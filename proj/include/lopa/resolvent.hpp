#pragma once

#include "lopa/linalg.hpp"
#include "lopa/profile.hpp"
#include "lopa/system.hpp"

#include <optional>

namespace lopa {

/// Coefficient matrix of the half-line ODE  u' - G u = f  at one frequency.
class ResolventMatrix {
public:
    explicit ResolventMatrix(CMatrix g, std::optional<Frequency> source = std::nullopt,
                             std::optional<Index> expected_stable_dim = std::nullopt);

    const CMatrix& matrix() const { return g_; }
    Index n() const { return g_.rows(); }
    const std::optional<Frequency>& frequency() const { return source_; }
    /// n_+ when G comes from a first-order system; the stable dimension must match.
    std::optional<Index> expected_stable_dim() const { return expected_stable_dim_; }
    double norm() const { return norm_; }
    /// min |Re mu| over the spectrum
    double spectral_gap() const;
    CVector eigenvalues() const { return schur_.T.diagonal(); }
    const SchurForm& schur() const { return schur_; }

private:
    CMatrix g_;
    std::optional<Frequency> source_;
    std::optional<Index> expected_stable_dim_;
    double norm_;
    SchurForm schur_;
};

/// G(Lambda) = -A_d^{-1} ((gamma + i tau) I + i sum_j eta_j A^j).
ResolventMatrix resolvent_matrix(const FirstOrderSystem& system, const Frequency& frequency);

struct HerschCheck {
    bool pass = true;
    Complex offending{0.0, 0.0};
    /// min |Re mu| / (1 + ||G||)
    double margin = 0.0;
};

HerschCheck check_hersch(const ResolventMatrix& g, double tol = kRankTolerance);

/// Orthonormal basis of an invariant subspace together with the upper
/// triangular restriction  generator = V^* G V  (so G V = V generator).
struct SubspaceBasis {
    enum class Kind { Stable, Unstable };
    Kind kind = Kind::Stable;
    CMatrix basis;
    CMatrix generator;
    Index dim() const { return basis.cols(); }
};

struct SpectralSplit {
    SubspaceBasis stable;
    SubspaceBasis unstable;
};

/// Ordered Schur split by sign of Re mu. Within the stable block, eigenvalues
/// that agree to kClusterTolerance are made contiguous.
SpectralSplit stable_subspace(const ResolventMatrix& g);

inline constexpr double kClusterTolerance = 1e-6;
inline constexpr double kResonanceTolerance = 1e-8;

/// e^{xG} V c evaluated through the stable block only.
CVector propagate(const SubspaceBasis& stable, const CVector& coefficients, double x);

struct ResolventSolution {
    ExponentialProfile u;
    /// coordinates of the homogeneous part in the stable basis
    CVector coefficients;
    double boundary_residual = 0.0;
    double residual_norm = 0.0;
    /// sigma_min(Gamma V)
    double sigma = 0.0;
};

/// Reusable solver for one (G, Gamma) pair: splits the spectrum once and
/// factors Gamma V.
class ResolventSolver {
public:
    ResolventSolver(const ResolventMatrix& g, CMatrix boundary);

    /// Unique L2 solution of  u' - G u = f,  Gamma u(0) = g.
    ResolventSolution solve(const ExponentialProfile& f, const CVector& g) const;
    /// Decaying solution of u' - G u = f with no boundary condition imposed.
    ExponentialProfile particular(const ExponentialProfile& f) const;
    /// e^{xG} V c as an exponential profile.
    ExponentialProfile homogeneous(const CVector& coefficients) const;

    const SpectralSplit& split() const { return split_; }
    const ResolventMatrix& resolvent() const { return g_; }
    const CMatrix& boundary() const { return boundary_; }
    double sigma() const { return sigma_; }

private:
    struct Cluster {
        Index start;
        Index size;
        Complex mean;
    };

    ResolventMatrix g_;
    CMatrix boundary_;
    SpectralSplit split_;
    double sigma_ = 0.0;
    Eigen::PartialPivLU<CMatrix> boundary_lu_;
    // Block-diagonalizing similarity of the stable generator: T = Y D Y^{-1}.
    CMatrix decoupling_;
    CMatrix block_diagonal_;
    std::vector<Cluster> clusters_;
};

ResolventSolution solve_resolvent(const ResolventMatrix& g, const CMatrix& boundary,
                                  const ExponentialProfile& f, const CVector& data);

/// u' - G u - f as a profile; identically zero for exact solutions.
ExponentialProfile resolvent_residual(const ResolventMatrix& g, const ExponentialProfile& u,
                                      const ExponentialProfile& f);

}  // namespace lopa
