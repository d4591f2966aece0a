#pragma once

#include "lopa/linalg.hpp"

#include <functional>
#include <string>
#include <vector>

namespace lopa {

/// Laplace-Fourier frequency (tau, eta, gamma) with gamma > 0.
class Frequency {
public:
    Frequency(double tau, Vector eta, double gamma);
    /// One-dimensional convenience: no tangential wave numbers.
    Frequency(double tau, double gamma);

    double tau() const { return tau_; }
    const Vector& eta() const { return eta_; }
    double gamma() const { return gamma_; }
    /// gamma + i tau
    Complex lambda() const { return {gamma_, tau_}; }
    /// Euclidean length of (tau, eta, gamma).
    double magnitude() const;
    Frequency scaled(double s) const;

private:
    double tau_;
    Vector eta_;
    double gamma_;
};

/// Unit vector xi in R^d used to evaluate the full symbol sum_j xi_j A^j.
class TangentialDirection {
public:
    explicit TangentialDirection(Vector xi);
    const Vector& xi() const { return xi_; }

private:
    Vector xi_;
};

/// Constant-coefficient first-order operator  u_t + sum_j A^j u_{x_j}.
/// The last coefficient is the boundary-normal matrix A_d.
class FirstOrderSystem {
public:
    explicit FirstOrderSystem(std::vector<Matrix> coefficients, std::string name = {});

    Index n() const { return n_; }
    Index d() const { return static_cast<Index>(coefficients_.size()); }
    const std::vector<Matrix>& coefficients() const { return coefficients_; }
    /// Zero-based: coefficient(d() - 1) is A_d.
    const Matrix& coefficient(Index j) const { return coefficients_.at(static_cast<std::size_t>(j)); }
    const Matrix& normal() const { return coefficients_.back(); }
    const std::string& name() const { return name_; }

    Matrix symbol(const TangentialDirection& direction) const;
    /// Number of eigenvalues of A_d with positive real part (n_+).
    Index incoming_count() const;
    double max_coefficient_norm() const;

private:
    Index n_;
    std::vector<Matrix> coefficients_;
    std::string name_;
};

/// k x n boundary matrix, either constant or a bounded function of the frequency.
class BoundarySymbol {
public:
    using Evaluator = std::function<CMatrix(const Frequency&)>;

    static BoundarySymbol constant(CMatrix matrix);
    static BoundarySymbol from_function(Index k, Index n, Evaluator evaluator, double bound,
                                        std::string name, std::string params_json);

    Index rows() const { return k_; }
    Index cols() const { return n_; }
    bool is_constant() const { return constant_; }
    double bound() const { return bound_; }
    const std::string& name() const { return name_; }
    const std::string& params_json() const { return params_json_; }

    CMatrix operator()(const Frequency& frequency) const;
    /// Throws InvalidArgument for frequency-dependent symbols.
    const CMatrix& matrix() const;

    /// Largest observed ||Gamma(Lambda)|| / bound over deterministic samples.
    double spot_check_bound(Index d, Index samples) const;

private:
    BoundarySymbol() = default;

    Index k_ = 0;
    Index n_ = 0;
    bool constant_ = true;
    double bound_ = 0.0;
    CMatrix matrix_;
    Evaluator evaluator_;
    std::string name_;
    std::string params_json_;
};

/// Gamma(Lambda) = ((gamma + i tau) / |Lambda|) M.
BoundarySymbol scaled_dirichlet_symbol(const CMatrix& m);
/// Gamma(Lambda) = M0 + ((gamma + i tau) / |Lambda|) M1.
BoundarySymbol impedance_symbol(const CMatrix& m0, const CMatrix& m1);

struct ValidationReport {
    bool shapes_ok = true;
    double normal_sigma_min = 0.0;
    double normal_norm = 0.0;
    bool noncharacteristic = true;
    bool pass() const { return shapes_ok && noncharacteristic; }
};

inline constexpr double kCharacteristicTolerance = 1e-10;

/// Throws CharacteristicBoundary when sigma_min(A_d) <= tol * ||A_d||.
ValidationReport validate_system(const FirstOrderSystem& system,
                                 double tol = kCharacteristicTolerance);

struct HyperbolicityReport {
    bool pass = true;
    Index samples = 0;
    Vector worst_xi;
    /// max |Im mu| / ||symbol|| over samples
    double worst_defect = 0.0;
    bool semisimple = true;
    /// xi and eigenvalue where algebraic multiplicity exceeded geometric multiplicity
    Vector nonsemisimple_xi;
    Complex nonsemisimple_eigenvalue{0.0, 0.0};
};

/// Cluster tolerance used by the semisimplicity test.
inline constexpr double kMultiplicityTolerance = 1e-8;

HyperbolicityReport check_hyperbolicity(const FirstOrderSystem& system, Index sphere_samples,
                                        double tol);

/// Deterministic, antipodally symmetric points on the unit sphere in R^dim.
std::vector<Vector> sphere_points(Index dim, Index count);

/// Semisimplicity of one real matrix: every eigenvalue cluster has as many
/// independent eigenvectors as members.
struct SemisimplicityResult {
    bool semisimple = true;
    Complex eigenvalue{0.0, 0.0};
    Index algebraic = 0;
    Index geometric = 0;
};
SemisimplicityResult check_semisimple(const Matrix& m, double rel_tol = kMultiplicityTolerance);

}  // namespace lopa
