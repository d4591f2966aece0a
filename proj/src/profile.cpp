#include "lopa/profile.hpp"

#include "lopa/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace lopa {

ExponentialProfile::ExponentialProfile(Index dim) : dim_(dim) {}

ExponentialProfile::ExponentialProfile(Index dim, std::vector<ProfileTerm> terms)
    : dim_(dim), terms_(std::move(terms)) {
    for (const auto& t : terms_) {
        if (t.v.size() != dim_) throw Error(ErrorKind::DimensionMismatch, "profile term has wrong length");
        if (!(t.mu.real() < 0.0)) throw Error(ErrorKind::ValueError, "profile terms need Re mu < 0");
        if (t.power < 0) throw Error(ErrorKind::ValueError, "profile powers must be nonnegative");
        if (!t.v.allFinite() || !std::isfinite(t.mu.imag()))
            throw Error(ErrorKind::ValueError, "non-finite profile term");
    }
    canonicalize();
}

ExponentialProfile ExponentialProfile::single(const CVector& v, Complex mu, int power) {
    return ExponentialProfile(v.size(), {ProfileTerm{v, mu, power}});
}

void ExponentialProfile::canonicalize() {
    auto key = [](const ProfileTerm& t) { return std::make_tuple(t.mu.real(), t.mu.imag(), t.power); };
    std::stable_sort(terms_.begin(), terms_.end(),
                     [&](const ProfileTerm& a, const ProfileTerm& b) { return key(a) < key(b); });
    std::vector<ProfileTerm> merged;
    merged.reserve(terms_.size());
    for (auto& t : terms_) {
        if (!merged.empty() && merged.back().mu == t.mu && merged.back().power == t.power)
            merged.back().v += t.v;
        else
            merged.push_back(std::move(t));
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [](const ProfileTerm& t) { return (t.v.array() == Complex(0.0, 0.0)).all(); }),
                 merged.end());
    terms_ = std::move(merged);
}

double ExponentialProfile::decay() const {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& t : terms_) d = std::min(d, -t.mu.real());
    return d;
}

CVector ExponentialProfile::operator()(double x) const {
    CVector out = CVector::Zero(dim_);
    for (const auto& t : terms_) out += (std::pow(x, t.power) * std::exp(t.mu * x)) * t.v;
    return out;
}

CVector ExponentialProfile::trace() const {
    CVector out = CVector::Zero(dim_);
    for (const auto& t : terms_)
        if (t.power == 0) out += t.v;
    return out;
}

ExponentialProfile ExponentialProfile::derivative() const {
    std::vector<ProfileTerm> out;
    out.reserve(2 * terms_.size());
    for (const auto& t : terms_) {
        out.push_back({t.mu * t.v, t.mu, t.power});
        if (t.power > 0) out.push_back({static_cast<double>(t.power) * t.v, t.mu, t.power - 1});
    }
    return ExponentialProfile(dim_, std::move(out));
}

ExponentialProfile operator*(const CMatrix& m, const ExponentialProfile& p) {
    if (m.cols() != p.dim_) throw Error(ErrorKind::DimensionMismatch, "matrix-profile product shape");
    std::vector<ProfileTerm> out;
    out.reserve(p.terms_.size());
    for (const auto& t : p.terms_) out.push_back({m * t.v, t.mu, t.power});
    return ExponentialProfile(m.rows(), std::move(out));
}

ExponentialProfile operator*(Complex s, const ExponentialProfile& p) {
    std::vector<ProfileTerm> out = p.terms_;
    for (auto& t : out) t.v *= s;
    return ExponentialProfile(p.dim_, std::move(out));
}

ExponentialProfile operator+(const ExponentialProfile& a, const ExponentialProfile& b) {
    if (a.dim_ != b.dim_) throw Error(ErrorKind::DimensionMismatch, "profile sum shape");
    std::vector<ProfileTerm> out = a.terms_;
    out.insert(out.end(), b.terms_.begin(), b.terms_.end());
    return ExponentialProfile(a.dim_, std::move(out));
}

ExponentialProfile operator-(const ExponentialProfile& a, const ExponentialProfile& b) {
    return a + Complex(-1.0, 0.0) * b;
}

ExponentialProfile ExponentialProfile::block(Index start, Index count) const {
    if (start < 0 || count < 0 || start + count > dim_)
        throw Error(ErrorKind::DimensionMismatch, "profile block out of range");
    std::vector<ProfileTerm> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) out.push_back({t.v.segment(start, count), t.mu, t.power});
    return ExponentialProfile(count, std::move(out));
}

ExponentialProfile ExponentialProfile::stack(const std::vector<ExponentialProfile>& parts) {
    Index total = 0;
    for (const auto& p : parts) total += p.dim();
    std::vector<ProfileTerm> out;
    Index offset = 0;
    for (const auto& p : parts) {
        for (const auto& t : p.terms()) {
            CVector v = CVector::Zero(total);
            v.segment(offset, p.dim()) = t.v;
            out.push_back({std::move(v), t.mu, t.power});
        }
        offset += p.dim();
    }
    return ExponentialProfile(total, std::move(out));
}

Complex gamma_integral(int m, Complex s) {
    // exp form avoids overflow of m! and (-s)^(m+1) separately
    const Complex log_value = std::lgamma(static_cast<double>(m) + 1.0) -
                              static_cast<double>(m + 1) * std::log(-s);
    return std::exp(log_value);
}

Complex inner_product(const ExponentialProfile& p, const ExponentialProfile& q, const Vector& weights) {
    if (p.dim() != q.dim()) throw Error(ErrorKind::DimensionMismatch, "inner product shape");
    const bool weighted = weights.size() > 0;
    if (weighted && weights.size() != p.dim())
        throw Error(ErrorKind::DimensionMismatch, "weight vector length");
    Complex total(0.0, 0.0);
    for (const auto& a : p.terms()) {
        const CVector wa = weighted ? CVector(weights.cast<Complex>().cwiseProduct(a.v)) : a.v;
        for (const auto& b : q.terms()) {
            const Complex coupling = b.v.dot(wa);  // b^* W a
            if (coupling == Complex(0.0, 0.0)) continue;
            total += coupling * gamma_integral(a.power + b.power, a.mu + std::conj(b.mu));
        }
    }
    return total;
}

double squared_norm(const ExponentialProfile& p, const Vector& weights) {
    return std::max(0.0, inner_product(p, p, weights).real());
}

double profile_norm(const ExponentialProfile& p) { return std::sqrt(squared_norm(p)); }

CVector profile_trace(const ExponentialProfile& p) { return p.trace(); }

}  // namespace lopa
