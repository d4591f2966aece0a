#pragma once

#include "lopa/lopatinski.hpp"
#include "lopa/profile.hpp"
#include "lopa/stability.hpp"
#include "lopa/system.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace lopa {

/// A^0 u_t + sum_j A^j u_{x_j} - sum_{jk} B^{jk} u_{x_j x_k} = f with
/// u = (u_1, u_2) and only the (2,2) blocks of B^{jk} nonzero.
struct SecondOrderSystem {
    Index n1 = 0;
    Index n2 = 0;
    Matrix a0;
    std::vector<Matrix> a;
    /// b[j][k] = B^{jk}, zero-based
    std::vector<std::vector<Matrix>> b;
    double theta = 0.0;
    std::string name;

    Index n() const { return n1 + n2; }
    Index d() const { return static_cast<Index>(a.size()); }
};

struct ViscousValidation {
    double measured_theta = 0.0;
    double normal_sigma_min = 0.0;
    /// sigma_min(A^d_11); +inf when n1 = 0
    double hyperbolic_sigma_min = 0.0;
    Index samples = 0;
};

/// Throws DimensionMismatch, ValueError, StructuralFailure,
/// CharacteristicBoundary, HyperbolicBlockCharacteristic or EllipticityFailure.
ViscousValidation validate_second_order(const SecondOrderSystem& system, Index sphere_samples = 64);

/// U' - GG U = P f on U = (u_1, u_2, u_2').
struct ReducedResolvent {
    ResolventMatrix gg;
    CMatrix forcing_map;
    Index n1 = 0;
    Index n2 = 0;

    Index dim() const { return n1 + 2 * n2; }
    /// Boundary matrix acting on u lifted to U (zero columns for u_2').
    CMatrix lift_boundary(const CMatrix& boundary) const;
    /// (u_1, u_2, u_2') for a profile u of dimension n1 + n2.
    ExponentialProfile lift(const ExponentialProfile& u) const;
};

ReducedResolvent reduce(const SecondOrderSystem& system, const Frequency& frequency);

/// lambda A^0 u + A^d u' + sum_j i eta_j A^j u - B^{dd} u''
///   - sum_j i eta_j (B^{jd} + B^{dj}) u' + sum_{jk} eta_j eta_k B^{jk} u - f
ExponentialProfile direct_residual(const SecondOrderSystem& system, const Frequency& frequency,
                                   const ExponentialProfile& u, const ExponentialProfile& f);

/// U' - GG U - P f for U = lift(u).
ExponentialProfile reduced_residual(const ReducedResolvent& reduced, const ExponentialProfile& u,
                                    const ExponentialProfile& f);

/// First-order hyperbolic block (A^0_11)^{-1} A^j_11 with its symmetrizer A^0_11.
FirstOrderSystem hyperbolic_block(const SecondOrderSystem& system);

/// [[Gamma_1, 0, 0], [0, I, 0]] on U; Gamma_1 must be maximally dissipative
/// for the hyperbolic block (errors of check_maximal_dissipativity propagate).
CMatrix rousset_bc(const SecondOrderSystem& system, const CMatrix& gamma1);

ScanResult evans_scan(const SecondOrderSystem& system, const CMatrix& boundary,
                      const std::vector<Frequency>& frequencies, const ScanOptions& options = {});

/// weight = scale * gamma^power
struct WeightTerm {
    double scale = 1.0;
    double power = 1.0;
    double operator()(const Frequency& f) const { return scale * std::pow(f.gamma(), power); }
};

/// Weights of u, of u_2' and of the forcing term ||f||^2 / w_f.
struct ViscousWeights {
    WeightTerm u{1.0, 1.0};
    WeightTerm derivative{1.0, 0.0};
    WeightTerm forcing{1.0, 1.0};

    /// Throws InvalidWeights for nonpositive or non-finite entries.
    void validate() const;
    std::string describe() const;
};

ResolventProblem viscous_problem(const SecondOrderSystem& system, const Frequency& frequency,
                                 const ViscousWeights& weights);

StabilityReport viscous_stability_check(const SecondOrderSystem& system, const CMatrix& reference,
                                        const std::vector<Frequency>& frequencies, const TrialOptions& options,
                                        const ViscousWeights& weights = {});

}  // namespace lopa
