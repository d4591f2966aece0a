#include "lopa/system.hpp"

#include "lopa/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace lopa {

Frequency::Frequency(double tau, Vector eta, double gamma)
    : tau_(tau), eta_(std::move(eta)), gamma_(gamma) {
    if (!(gamma_ > 0.0) || !std::isfinite(gamma_))
        throw Error(ErrorKind::InvalidArgument, "frequency requires gamma > 0");
    if (!std::isfinite(tau_) || !eta_.allFinite())
        throw Error(ErrorKind::InvalidArgument, "frequency components must be finite");
}

Frequency::Frequency(double tau, double gamma) : Frequency(tau, Vector(), gamma) {}

double Frequency::magnitude() const {
    return std::sqrt(tau_ * tau_ + eta_.squaredNorm() + gamma_ * gamma_);
}

Frequency Frequency::scaled(double s) const { return Frequency(s * tau_, s * eta_, s * gamma_); }

TangentialDirection::TangentialDirection(Vector xi) : xi_(std::move(xi)) {
    const double len = xi_.norm();
    if (std::abs(len - 1.0) > 1e-12)
        throw Error(ErrorKind::InvalidArgument, "direction must be a unit vector");
}

FirstOrderSystem::FirstOrderSystem(std::vector<Matrix> coefficients, std::string name)
    : n_(0), coefficients_(std::move(coefficients)), name_(std::move(name)) {
    if (coefficients_.empty())
        throw Error(ErrorKind::DimensionMismatch, "system needs at least one coefficient matrix");
    n_ = coefficients_.front().rows();
    if (n_ <= 0) throw Error(ErrorKind::DimensionMismatch, "state dimension must be positive");
    for (std::size_t j = 0; j < coefficients_.size(); ++j) {
        const Matrix& a = coefficients_[j];
        if (a.rows() != n_ || a.cols() != n_) {
            std::ostringstream msg;
            msg << "coefficient " << j + 1 << " is " << a.rows() << "x" << a.cols() << ", expected "
                << n_ << "x" << n_;
            throw Error(ErrorKind::DimensionMismatch, msg.str());
        }
        if (!a.allFinite()) throw Error(ErrorKind::ValueError, "non-finite coefficient entry");
    }
}

Matrix FirstOrderSystem::symbol(const TangentialDirection& direction) const {
    const Vector& xi = direction.xi();
    if (xi.size() != d()) throw Error(ErrorKind::DimensionMismatch, "direction length must equal d");
    Matrix m = Matrix::Zero(n_, n_);
    for (Index j = 0; j < d(); ++j) m += xi(j) * coefficient(j);
    return m;
}

Index FirstOrderSystem::incoming_count() const {
    const Eigen::VectorXcd ev = normal().eigenvalues();
    return std::count_if(ev.begin(), ev.end(), [](const Complex& z) { return z.real() > 0.0; });
}

double FirstOrderSystem::max_coefficient_norm() const {
    double m = 0.0;
    for (const auto& a : coefficients_) m = std::max(m, op_norm(a));
    return m;
}

// --- boundary symbols -------------------------------------------------------

BoundarySymbol BoundarySymbol::constant(CMatrix matrix) {
    if (!matrix.allFinite()) throw Error(ErrorKind::ValueError, "non-finite boundary entry");
    BoundarySymbol s;
    s.k_ = matrix.rows();
    s.n_ = matrix.cols();
    s.constant_ = true;
    s.bound_ = op_norm(matrix);
    s.matrix_ = std::move(matrix);
    s.name_ = "matrix";
    return s;
}

BoundarySymbol BoundarySymbol::from_function(Index k, Index n, Evaluator evaluator, double bound,
                                             std::string name, std::string params_json) {
    if (!evaluator) throw Error(ErrorKind::InvalidArgument, "boundary symbol needs an evaluator");
    if (!(bound >= 0.0)) throw Error(ErrorKind::InvalidArgument, "declared bound must be >= 0");
    BoundarySymbol s;
    s.k_ = k;
    s.n_ = n;
    s.constant_ = false;
    s.bound_ = bound;
    s.evaluator_ = std::move(evaluator);
    s.name_ = std::move(name);
    s.params_json_ = std::move(params_json);
    return s;
}

CMatrix BoundarySymbol::operator()(const Frequency& frequency) const {
    if (constant_) return matrix_;
    CMatrix m = evaluator_(frequency);
    if (m.rows() != k_ || m.cols() != n_)
        throw Error(ErrorKind::DimensionMismatch, "boundary symbol '" + name_ + "' evaluated to wrong shape");
    return m;
}

const CMatrix& BoundarySymbol::matrix() const {
    if (!constant_)
        throw Error(ErrorKind::InvalidArgument, "boundary symbol '" + name_ + "' depends on the frequency");
    return matrix_;
}

double BoundarySymbol::spot_check_bound(Index d, Index samples) const {
    if (constant_ || bound_ == 0.0) return bound_ == 0.0 ? 0.0 : 1.0;
    double worst = 0.0;
    const auto dirs = sphere_points(d + 1, samples);
    const double radii[] = {1e-2, 1.0, 1e2};
    for (const auto& p : dirs) {
        for (double r : radii) {
            const double gamma = std::max(std::abs(p(d)), 1e-3) * r;
            Vector eta = p.segment(1, d - 1) * r;
            const Frequency f(p(0) * r, eta, gamma);
            worst = std::max(worst, op_norm((*this)(f)) / bound_);
        }
    }
    return worst;
}

namespace {

// [[[re, im], ...], ...] with round-trip precision
std::string matrix_json(const CMatrix& m) {
    std::ostringstream out;
    out.precision(17);
    out << '[';
    for (Index i = 0; i < m.rows(); ++i) {
        out << (i ? ",[" : "[");
        for (Index j = 0; j < m.cols(); ++j)
            out << (j ? "," : "") << '[' << m(i, j).real() << ',' << m(i, j).imag() << ']';
        out << ']';
    }
    out << ']';
    return out.str();
}

}  // namespace

BoundarySymbol scaled_dirichlet_symbol(const CMatrix& m) {
    const std::string params = "{\"matrix\":" + matrix_json(m) + "}";
    return BoundarySymbol::from_function(
        m.rows(), m.cols(),
        [m](const Frequency& f) -> CMatrix { return (f.lambda() / f.magnitude()) * m; },
        op_norm(m), "scaled-dirichlet", params);
}

BoundarySymbol impedance_symbol(const CMatrix& m0, const CMatrix& m1) {
    if (m0.rows() != m1.rows() || m0.cols() != m1.cols())
        throw Error(ErrorKind::DimensionMismatch, "impedance matrices must have equal shapes");
    return BoundarySymbol::from_function(
        m0.rows(), m0.cols(),
        [m0, m1](const Frequency& f) -> CMatrix {
            return m0 + (f.lambda() / f.magnitude()) * m1;
        },
        op_norm(m0) + op_norm(m1), "impedance",
        "{\"m0\":" + matrix_json(m0) + ",\"m1\":" + matrix_json(m1) + "}");
}

// --- validation -------------------------------------------------------------

ValidationReport validate_system(const FirstOrderSystem& system, double tol) {
    ValidationReport report;
    const Matrix& ad = system.normal();
    const Vector s = Eigen::JacobiSVD<Matrix>(ad).singularValues();
    report.normal_norm = s(0);
    report.normal_sigma_min = s(s.size() - 1);
    report.noncharacteristic = report.normal_sigma_min > tol * std::max(report.normal_norm, 1e-300);
    if (!report.noncharacteristic) {
        std::ostringstream msg;
        msg << "sigma_min(A_d) = " << report.normal_sigma_min << " is below tolerance";
        throw Error(ErrorKind::CharacteristicBoundary, msg.str());
    }
    return report;
}

SemisimplicityResult check_semisimple(const Matrix& m, double rel_tol) {
    SemisimplicityResult result;
    const Index n = m.rows();
    const double scale = std::max(op_norm(m), std::numeric_limits<double>::min());
    const Eigen::VectorXcd ev = Eigen::EigenSolver<Matrix>(m, false).eigenvalues();

    // Rounding splits a defective eigenvalue of index s by about eps^(1/s);
    // the cube root of eps catches Jordan blocks up to size three.
    const double cluster_tol = std::max(rel_tol, std::cbrt(std::numeric_limits<double>::epsilon())) * scale;

    std::vector<int> label(static_cast<std::size_t>(n), -1);
    int clusters = 0;
    for (Index i = 0; i < n; ++i) {
        if (label[i] >= 0) continue;
        label[i] = clusters;
        std::vector<Index> stack{i};
        while (!stack.empty()) {
            const Index a = stack.back();
            stack.pop_back();
            for (Index b = 0; b < n; ++b) {
                if (label[b] < 0 && std::abs(ev(a) - ev(b)) <= cluster_tol) {
                    label[b] = clusters;
                    stack.push_back(b);
                }
            }
        }
        ++clusters;
    }

    for (int c = 0; c < clusters; ++c) {
        Complex mean(0.0, 0.0);
        Index size = 0;
        for (Index i = 0; i < n; ++i)
            if (label[i] == c) {
                mean += ev(i);
                ++size;
            }
        mean /= static_cast<double>(size);
        if (size == 1) continue;
        double spread = 0.0;
        for (Index i = 0; i < n; ++i)
            if (label[i] == c) spread = std::max(spread, std::abs(ev(i) - mean));

        const CMatrix shifted = m.cast<Complex>() - mean * CMatrix::Identity(n, n);
        const Vector s = singular_values(shifted);
        const double null_tol = std::max(rel_tol * scale, 4.0 * spread);
        const Index nullity = std::count_if(s.begin(), s.end(), [&](double v) { return v <= null_tol; });
        if (nullity < size) {
            result.semisimple = false;
            result.eigenvalue = mean;
            result.algebraic = size;
            result.geometric = nullity;
            return result;
        }
    }
    return result;
}

HyperbolicityReport check_hyperbolicity(const FirstOrderSystem& system, Index sphere_samples,
                                        double tol) {
    HyperbolicityReport report;
    const auto points = sphere_points(system.d(), sphere_samples);
    report.samples = static_cast<Index>(points.size());
    report.worst_xi = points.front();
    for (const auto& xi : points) {
        const Matrix m = system.symbol(TangentialDirection(xi));
        const double scale = op_norm(m);
        double defect = 0.0;
        if (scale > 0.0) {
            const Eigen::VectorXcd ev = Eigen::EigenSolver<Matrix>(m, false).eigenvalues();
            for (Index i = 0; i < ev.size(); ++i) defect = std::max(defect, std::abs(ev(i).imag()) / scale);
        }
        if (defect > report.worst_defect) {
            report.worst_defect = defect;
            report.worst_xi = xi;
        }
        if (report.semisimple) {
            const auto ss = check_semisimple(m);
            if (!ss.semisimple) {
                report.semisimple = false;
                report.nonsemisimple_xi = xi;
                report.nonsemisimple_eigenvalue = ss.eigenvalue;
            }
        }
    }
    report.pass = report.semisimple && report.worst_defect <= tol;
    return report;
}

namespace {

double radical_inverse(unsigned base, std::uint64_t index) {
    double result = 0.0;
    double f = 1.0 / base;
    while (index > 0) {
        result += f * static_cast<double>(index % base);
        index /= base;
        f /= base;
    }
    return result;
}

constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

}  // namespace

std::vector<Vector> sphere_points(Index dim, Index count) {
    if (dim <= 0) throw Error(ErrorKind::InvalidArgument, "sphere dimension must be positive");
    std::vector<Vector> half;
    const Index h = std::max<Index>(1, (count + 1) / 2);
    if (dim == 1) {
        half.push_back(Vector::Ones(1));
    } else if (dim == 2) {
        for (Index i = 0; i < h; ++i) {
            const double theta = M_PI * (static_cast<double>(i) + 0.5) / static_cast<double>(h);
            Vector p(2);
            p << std::cos(theta), std::sin(theta);
            half.push_back(p);
        }
    } else if (dim == 3) {
        const double golden = M_PI * (3.0 - std::sqrt(5.0));
        for (Index i = 0; i < h; ++i) {
            const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(h);
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double phi = golden * static_cast<double>(i);
            Vector p(3);
            p << r * std::cos(phi), r * std::sin(phi), z;
            half.push_back(p);
        }
    } else {
        if (dim > static_cast<Index>(std::size(kPrimes)))
            throw Error(ErrorKind::InvalidArgument, "sphere sampling supports dimension <= 12");
        for (Index i = 0; i < h; ++i) {
            Vector p(dim);
            for (Index c = 0; c < dim; c += 2) {
                // Box-Muller on consecutive Halton coordinates
                const double u1 = std::max(radical_inverse(kPrimes[c], static_cast<std::uint64_t>(i + 1)), 1e-12);
                const double u2 = c + 1 < dim ? radical_inverse(kPrimes[c + 1], static_cast<std::uint64_t>(i + 1)) : 0.25;
                const double r = std::sqrt(-2.0 * std::log(u1));
                p(c) = r * std::cos(2.0 * M_PI * u2);
                if (c + 1 < dim) p(c + 1) = r * std::sin(2.0 * M_PI * u2);
            }
            const double len = p.norm();
            half.push_back(len > 0.0 ? Vector(p / len) : Vector(Vector::Unit(dim, 0)));
        }
    }
    std::vector<Vector> points;
    points.reserve(2 * half.size());
    for (const auto& p : half) {
        points.push_back(p);
        points.push_back(-p);
    }
    return points;
}

}  // namespace lopa
