#include "lopa/viscous.hpp"

#include "lopa/error.hpp"
#include "lopa/symmetrizer.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <sstream>

namespace lopa {

namespace {

void check_shapes(const SecondOrderSystem& s) {
    if (s.n1 < 0 || s.n2 < 0) throw Error(ErrorKind::DimensionMismatch, "block sizes must be nonnegative");
    if (s.n2 == 0)
        throw Error(ErrorKind::ValueError, "viscous systems need a parabolic block (n2 > 0); use the hyperbolic modules");
    const Index n = s.n();
    const Index d = s.d();
    if (d < 1) throw Error(ErrorKind::DimensionMismatch, "need at least one space dimension");
    auto square = [n](const Matrix& m, const char* what) {
        if (m.rows() != n || m.cols() != n) {
            std::ostringstream msg;
            msg << what << " must be " << n << " x " << n;
            throw Error(ErrorKind::DimensionMismatch, msg.str());
        }
        if (!m.allFinite()) throw Error(ErrorKind::ValueError, std::string("non-finite entries in ") + what);
    };
    square(s.a0, "A0");
    for (const auto& m : s.a) square(m, "A^j");
    if (static_cast<Index>(s.b.size()) != d) throw Error(ErrorKind::DimensionMismatch, "B must be a d x d array");
    for (const auto& row : s.b) {
        if (static_cast<Index>(row.size()) != d) throw Error(ErrorKind::DimensionMismatch, "B must be a d x d array");
        for (const auto& m : row) square(m, "B^{jk}");
    }
}

bool is_symmetric(const Matrix& m) {
    return (m - m.transpose()).norm() <= 1e-12 * std::max(1.0, m.norm());
}

Matrix ellipticity_matrix(const SecondOrderSystem& s, const Vector& xi) {
    Matrix p = Matrix::Zero(s.n2, s.n2);
    for (Index j = 0; j < s.d(); ++j)
        for (Index k = 0; k < s.d(); ++k)
            p += xi(j) * xi(k) * s.b[j][k].bottomRightCorner(s.n2, s.n2);
    return p;
}

// M = lambda A0 + sum_j i eta_j A^j + sum_{jk} eta_j eta_k B^{jk} and
// E = sum_j i eta_j (B^{jd} + B^{dj}), tangential j, k < d.
void assemble_symbols(const SecondOrderSystem& s, const Frequency& f, CMatrix& m, CMatrix& e) {
    const Index d = s.d();
    if (f.eta().size() != d - 1) throw Error(ErrorKind::DimensionMismatch, "eta must have length d - 1");
    m = f.lambda() * s.a0.cast<Complex>();
    e = CMatrix::Zero(s.n(), s.n());
    for (Index j = 0; j + 1 < d; ++j) {
        const Complex ie(0.0, f.eta()(j));
        m += ie * s.a[j].cast<Complex>();
        e += ie * (s.b[j][d - 1] + s.b[d - 1][j]).cast<Complex>();
        for (Index k = 0; k + 1 < d; ++k) m += f.eta()(j) * f.eta()(k) * s.b[j][k].cast<Complex>();
    }
}

}  // namespace

ViscousValidation validate_second_order(const SecondOrderSystem& s, Index sphere_samples) {
    check_shapes(s);
    ViscousValidation report;

    if (!is_symmetric(s.a0)) throw Error(ErrorKind::StructuralFailure, "A0 must be symmetric");
    if (!(Eigen::SelfAdjointEigenSolver<Matrix>(s.a0, Eigen::EigenvaluesOnly).eigenvalues()(0) > 0.0))
        throw Error(ErrorKind::StructuralFailure, "A0 must be positive definite");
    for (const auto& m : s.a)
        if (!is_symmetric(m)) throw Error(ErrorKind::StructuralFailure, "every A^j must be symmetric");
    for (Index j = 0; j < s.d(); ++j)
        for (Index k = 0; k < s.d(); ++k) {
            Matrix outside = s.b[j][k];
            outside.bottomRightCorner(s.n2, s.n2).setZero();
            if (outside.cwiseAbs().maxCoeff() > 0.0) {
                std::ostringstream msg;
                msg << "B^{" << j + 1 << k + 1 << "} has entries outside the (2,2) block";
                throw Error(ErrorKind::StructuralFailure, msg.str());
            }
        }

    report.normal_sigma_min = validate_system(FirstOrderSystem(s.a)).normal_sigma_min;
    report.hyperbolic_sigma_min = std::numeric_limits<double>::infinity();
    if (s.n1 > 0) {
        const Matrix a11 = s.a.back().topLeftCorner(s.n1, s.n1);
        const Vector sv = Eigen::JacobiSVD<Matrix>(a11).singularValues();
        report.hyperbolic_sigma_min = sv(sv.size() - 1);
        if (!(report.hyperbolic_sigma_min > kCharacteristicTolerance * std::max(sv(0), 1e-300)))
            throw Error(ErrorKind::HyperbolicBlockCharacteristic, "A^d_11 is singular");
    }

    const auto points = sphere_points(s.d(), sphere_samples);
    report.samples = static_cast<Index>(points.size());
    report.measured_theta = std::numeric_limits<double>::infinity();
    double scale = 0.0;
    for (const auto& xi : points) {
        const Matrix p = ellipticity_matrix(s, xi);
        scale = std::max(scale, p.norm());
        const double lmin =
            Eigen::SelfAdjointEigenSolver<Matrix>(symmetric_part(p), Eigen::EigenvaluesOnly).eigenvalues()(0);
        report.measured_theta = std::min(report.measured_theta, lmin);
    }
    if (!(report.measured_theta > 0.0)) {
        std::ostringstream msg;
        msg << "Re sum xi_j xi_k B^{jk}_22 is not positive definite (min eigenvalue " << report.measured_theta << ")";
        throw Error(ErrorKind::EllipticityFailure, msg.str());
    }
    if (s.theta > report.measured_theta + 1e-12 * std::max(scale, 1.0)) {
        std::ostringstream msg;
        msg << "declared theta " << s.theta << " exceeds measured " << report.measured_theta;
        throw Error(ErrorKind::EllipticityFailure, msg.str());
    }
    return report;
}

CMatrix ReducedResolvent::lift_boundary(const CMatrix& boundary) const {
    if (boundary.cols() != n1 + n2) throw Error(ErrorKind::DimensionMismatch, "boundary must act on u");
    CMatrix out = CMatrix::Zero(boundary.rows(), dim());
    out.leftCols(n1 + n2) = boundary;
    return out;
}

ExponentialProfile ReducedResolvent::lift(const ExponentialProfile& u) const {
    if (u.dim() != n1 + n2) throw Error(ErrorKind::DimensionMismatch, "profile must have n1 + n2 components");
    return ExponentialProfile::stack({u, u.block(n1, n2).derivative()});
}

ReducedResolvent reduce(const SecondOrderSystem& s, const Frequency& f) {
    check_shapes(s);
    const Index n1 = s.n1, n2 = s.n2, n = s.n(), big = n1 + 2 * n2;
    CMatrix m, e;
    assemble_symbols(s, f, m, e);
    const CMatrix ad = s.a.back().cast<Complex>();
    const CMatrix bdd = s.b.back().back().bottomRightCorner(n2, n2).cast<Complex>();

    const Eigen::FullPivLU<CMatrix> b_lu(bdd);
    if (!b_lu.isInvertible()) throw Error(ErrorKind::EllipticityFailure, "B^{dd}_22 is singular");

    CMatrix gg = CMatrix::Zero(big, big);
    CMatrix p = CMatrix::Zero(big, n);
    CMatrix row1 = CMatrix::Zero(n1, big);
    CMatrix a11_inv = CMatrix::Zero(n1, n1);
    if (n1 > 0) {
        const Eigen::FullPivLU<CMatrix> a_lu(ad.topLeftCorner(n1, n1));
        if (!a_lu.isInvertible()) throw Error(ErrorKind::HyperbolicBlockCharacteristic, "A^d_11 is singular");
        a11_inv = a_lu.inverse();
        row1.leftCols(n1) = -a11_inv * m.topLeftCorner(n1, n1);
        row1.middleCols(n1, n2) = -a11_inv * m.topRightCorner(n1, n2);
        row1.rightCols(n2) = -a11_inv * ad.topRightCorner(n1, n2);
        gg.topRows(n1) = row1;
        p.topLeftCorner(n1, n1) = a11_inv;
    }
    gg.block(n1, n1 + n2, n2, n2).setIdentity();

    CMatrix rest(n2, big);
    rest.leftCols(n1) = m.bottomLeftCorner(n2, n1);
    rest.middleCols(n1, n2) = m.bottomRightCorner(n2, n2);
    rest.rightCols(n2) = ad.bottomRightCorner(n2, n2) - e.bottomRightCorner(n2, n2);
    const CMatrix a21 = ad.bottomLeftCorner(n2, n1);
    gg.bottomRows(n2) = b_lu.solve(CMatrix(a21 * row1 + rest));

    const CMatrix b_inv = b_lu.inverse();
    p.bottomLeftCorner(n2, n1) = b_inv * a21 * a11_inv;
    p.bottomRightCorner(n2, n2) = -b_inv;
    return ReducedResolvent{ResolventMatrix(std::move(gg), f), std::move(p), n1, n2};
}

ExponentialProfile direct_residual(const SecondOrderSystem& s, const Frequency& f, const ExponentialProfile& u,
                                   const ExponentialProfile& forcing) {
    check_shapes(s);
    if (u.dim() != s.n() || forcing.dim() != s.n())
        throw Error(ErrorKind::DimensionMismatch, "profiles must have n components");
    CMatrix m, e;
    assemble_symbols(s, f, m, e);
    const ExponentialProfile du = u.derivative();
    const ExponentialProfile ddu = du.derivative();
    const CMatrix ad = s.a.back().cast<Complex>();
    const CMatrix bdd = s.b.back().back().cast<Complex>();
    return m * u + CMatrix(ad - e) * du - bdd * ddu - forcing;
}

ExponentialProfile reduced_residual(const ReducedResolvent& r, const ExponentialProfile& u,
                                    const ExponentialProfile& f) {
    const ExponentialProfile big = r.lift(u);
    return big.derivative() - r.gg.matrix() * big - r.forcing_map * f;
}

FirstOrderSystem hyperbolic_block(const SecondOrderSystem& s) {
    check_shapes(s);
    if (s.n1 == 0) throw Error(ErrorKind::InvalidArgument, "system has no hyperbolic block");
    const Matrix a0 = s.a0.topLeftCorner(s.n1, s.n1);
    const Eigen::LLT<Matrix> llt(a0);
    if (llt.info() != Eigen::Success) throw Error(ErrorKind::StructuralFailure, "A0_11 must be positive definite");
    std::vector<Matrix> blocks;
    for (const auto& a : s.a) blocks.push_back(llt.solve(Matrix(a.topLeftCorner(s.n1, s.n1))));
    return FirstOrderSystem(std::move(blocks), s.name.empty() ? std::string() : s.name + "-hyperbolic");
}

CMatrix rousset_bc(const SecondOrderSystem& s, const CMatrix& gamma1) {
    check_shapes(s);
    const Index n1 = s.n1, n2 = s.n2;
    if (gamma1.cols() != n1) throw Error(ErrorKind::DimensionMismatch, "Gamma_1 must have n1 columns");
    if (n1 > 0) {
        const FirstOrderSystem block = hyperbolic_block(s);
        const Symmetrizer sym = make_symmetrizer(s.a0.topLeftCorner(n1, n1), block);
        check_maximal_dissipativity(sym, block, gamma1);
    } else if (gamma1.rows() != 0) {
        throw Error(ErrorKind::WrongBoundaryCount, "no hyperbolic block: Gamma_1 must be empty");
    }
    const Index k1 = gamma1.rows();
    CMatrix out = CMatrix::Zero(k1 + n2, n1 + 2 * n2);
    out.topLeftCorner(k1, n1) = gamma1;
    out.block(k1, n1, n2, n2).setIdentity();
    return out;
}

ScanResult evans_scan(const SecondOrderSystem& s, const CMatrix& boundary, const std::vector<Frequency>& frequencies,
                      const ScanOptions& options) {
    check_shapes(s);
    if (boundary.cols() != s.n1 + 2 * s.n2)
        throw Error(ErrorKind::DimensionMismatch, "boundary must act on U = (u1, u2, u2')");
    std::ostringstream desc;
    desc << "bounded frequency set, " << frequencies.size() << " points";
    return scan_frequencies(
        frequencies, [&](const Frequency& f) { return reduce(s, f).gg; }, BoundarySymbol::constant(boundary), options,
        desc.str());
}

void ViscousWeights::validate() const {
    for (const WeightTerm* w : {&u, &derivative, &forcing})
        if (!(w->scale > 0.0) || !std::isfinite(w->scale) || !std::isfinite(w->power))
            throw Error(ErrorKind::InvalidWeights, "weights need positive finite scales and finite powers");
}

std::string ViscousWeights::describe() const {
    std::ostringstream out;
    out << "w_u = " << u.scale << " gamma^" << u.power << ", w_der = " << derivative.scale << " gamma^"
        << derivative.power << ", w_f = " << forcing.scale << " gamma^" << forcing.power;
    return out.str();
}

ResolventProblem viscous_problem(const SecondOrderSystem& s, const Frequency& f, const ViscousWeights& weights) {
    weights.validate();
    ReducedResolvent r = reduce(s, f);
    Vector state(r.dim());
    state.head(s.n()).setConstant(weights.u(f));
    state.tail(s.n2).setConstant(weights.derivative(f));
    return ResolventProblem{std::move(r.gg), std::move(r.forcing_map), NormWeights{state, weights.forcing(f)}};
}

StabilityReport viscous_stability_check(const SecondOrderSystem& s, const CMatrix& reference,
                                        const std::vector<Frequency>& frequencies, const TrialOptions& options,
                                        const ViscousWeights& weights) {
    weights.validate();
    check_shapes(s);
    if (reference.cols() != s.n1 + 2 * s.n2)
        throw Error(ErrorKind::DimensionMismatch, "boundary must act on U = (u1, u2, u2')");
    StabilityReport report = kreiss_scan(
        frequencies, [&](const Frequency& f) { return viscous_problem(s, f, weights); },
        [&](const Frequency&) { return reference; }, options);
    report.alpha_description = weights.describe();
    return report;
}

}  // namespace lopa
