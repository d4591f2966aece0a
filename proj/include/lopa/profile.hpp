#pragma once

#include "lopa/linalg.hpp"

#include <vector>

namespace lopa {

/// One term  x^power e^{mu x} v  with Re mu < 0.
struct ProfileTerm {
    CVector v;
    Complex mu;
    int power = 0;
};

/// Finite sum of decaying exponential-polynomial terms on the half-line
/// x >= 0. Closed under differentiation, constant matrices and sums, with
/// exact L2(0, inf) inner products.
///
/// Canonical form: terms with identical (mu, power) are merged, exactly-zero
/// vectors are dropped and the remaining terms are sorted by (Re mu, Im mu,
/// power) so that equal profiles have equal term lists.
class ExponentialProfile {
public:
    explicit ExponentialProfile(Index dim = 0);
    ExponentialProfile(Index dim, std::vector<ProfileTerm> terms);

    /// x^power e^{mu x} v
    static ExponentialProfile single(const CVector& v, Complex mu, int power = 0);

    Index dim() const { return dim_; }
    const std::vector<ProfileTerm>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    /// Smallest -Re mu over the terms; +inf for the zero profile.
    double decay() const;

    CVector operator()(double x) const;
    /// Value at x = 0.
    CVector trace() const;
    ExponentialProfile derivative() const;

    /// m * p, term by term.
    friend ExponentialProfile operator*(const CMatrix& m, const ExponentialProfile& p);
    friend ExponentialProfile operator*(Complex s, const ExponentialProfile& p);
    friend ExponentialProfile operator+(const ExponentialProfile& a, const ExponentialProfile& b);
    friend ExponentialProfile operator-(const ExponentialProfile& a, const ExponentialProfile& b);

    /// Coordinates [start, start + count) as a profile of dimension count.
    ExponentialProfile block(Index start, Index count) const;
    /// Stacks profiles with the same x-dependence into one vector profile.
    static ExponentialProfile stack(const std::vector<ExponentialProfile>& parts);

private:
    void canonicalize();

    Index dim_;
    std::vector<ProfileTerm> terms_;
};

/// <p, q> = int_0^inf q(x)^* W p(x) dx with W = diag(weights) (all ones when empty).
Complex inner_product(const ExponentialProfile& p, const ExponentialProfile& q,
                      const Vector& weights = Vector());

double squared_norm(const ExponentialProfile& p, const Vector& weights = Vector());
double profile_norm(const ExponentialProfile& p);
CVector profile_trace(const ExponentialProfile& p);

/// int_0^inf x^m e^{s x} dx = m! / (-s)^{m+1}  for Re s < 0.
Complex gamma_integral(int m, Complex s);

}  // namespace lopa
