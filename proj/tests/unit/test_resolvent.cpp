#include "helpers.hpp"
#include "oracles.hpp"

#include "lopa/catalog.hpp"
#include "lopa/error.hpp"
#include "lopa/resolvent.hpp"

#include <gtest/gtest.h>

using namespace lopa;
using namespace testing_helpers;

namespace {

ResolventMatrix raw(const CMatrix& g) { return ResolventMatrix(g); }

CMatrix diag(std::initializer_list<Complex> d) {
    CMatrix m = CMatrix::Zero(static_cast<Index>(d.size()), static_cast<Index>(d.size()));
    Index i = 0;
    for (Complex v : d) m(i, i) = v, ++i;
    return m;
}

Index positive_eigenvalues(const Matrix& a) {
    Eigen::EigenSolver<Matrix> es(a);
    Index count = 0;
    for (Index i = 0; i < a.rows(); ++i) count += es.eigenvalues()(i).real() > 0;
    return count;
}

ExponentialProfile random_profile(std::mt19937_64& rng, Index n, const ResolventMatrix& g) {
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double scale = std::max(1.0, g.norm());
    const CVector eig = g.eigenvalues();
    std::vector<ProfileTerm> terms;
    for (int t = 0; t < 2; ++t) {
        Complex mu;
        bool ok = false;
        while (!ok) {
            mu = Complex(-0.2 - 1.5 * u(rng) * scale, (2 * u(rng) - 1) * scale);
            ok = true;
            for (Index i = 0; i < eig.size(); ++i) ok = ok && std::abs(eig(i) - mu) > 0.1;
        }
        CVector v(n);
        for (Index i = 0; i < n; ++i) v(i) = Complex(gauss(rng), gauss(rng));
        terms.push_back({v, mu, t});
    }
    return ExponentialProfile(n, terms);
}

}  // namespace

// ---- G(Lambda)

TEST(ResolventMatrixTest, Scalar) {
    const auto g = resolvent_matrix(FirstOrderSystem({mat({{2}})}), Frequency(0.0, 1.0));
    EXPECT_NEAR(std::abs(g.matrix()(0, 0) - Complex(-0.5, 0)), 0.0, 1e-15);
}

TEST(ResolventMatrixTest, WaveIsMinusLambdaTimesA) {
    const Frequency f(0.7, 0.3);
    const auto g = resolvent_matrix(wave(), f);
    const CMatrix expected = -f.lambda() * cmat({{0, 1}, {1, 0}});
    EXPECT_LT((g.matrix() - expected).norm(), 1e-15);
}

TEST(ResolventMatrixTest, TwoDimensionalDiagonal) {
    // tangential matrix I, normal matrix diag(1, -1)
    FirstOrderSystem s({Matrix::Identity(2, 2), mat({{1, 0}, {0, -1}})});
    const auto g = resolvent_matrix(s, Frequency(1.0, Vector::Constant(1, 1.0), 1.0));
    EXPECT_LT((g.matrix() - diag({Complex(-1, -2), Complex(1, 2)})).norm(), 1e-15);
}

TEST(ResolventMatrixTest, HomogeneousOfDegreeOne) {
    std::mt19937_64 rng(2);
    const auto r = random_symmetrizable(3, 4, 3);
    for (int i = 0; i < 20; ++i) {
        const Frequency f = random_frequency(rng, 3);
        const auto g1 = resolvent_matrix(r.system, f);
        for (double s : {0.1, 10.0}) {
            const auto g2 = resolvent_matrix(r.system, f.scaled(s));
            EXPECT_LT((g2.matrix() - s * g1.matrix()).norm(), 1e-13 * s * g1.norm());
            EXPECT_LT(max_principal_angle(stable_subspace(g1).stable.basis, stable_subspace(g2).stable.basis), 1e-8);
        }
    }
}

// ---- Hersch property and the split

TEST(Hersch, Examples) {
    EXPECT_TRUE(check_hersch(resolvent_matrix(wave(), Frequency(0.0, 1.0)), 1e-8).pass);
    const auto bad = check_hersch(raw(diag({Complex(0, 1), Complex(-1, 0)})), 1e-8);
    EXPECT_FALSE(bad.pass);
    EXPECT_NEAR(std::abs(bad.offending - Complex(0, 1)), 0.0, 1e-14);
    EXPECT_TRUE(check_hersch(resolvent_matrix(FirstOrderSystem({mat({{3}})}), Frequency(0.0, 0.5)), 1e-8).pass);
}

TEST(Hersch, RandomSymmetrizableDimensionCount) {
    std::mt19937_64 rng(21);
    for (int sys = 0; sys < 10; ++sys) {
        const Index n = 2 + sys % 5, d = 1 + sys % 3;
        const auto r = random_symmetrizable(100 + sys, n, d);
        const Index nplus = positive_eigenvalues(r.system.normal());
        EXPECT_EQ(r.system.incoming_count(), nplus);
        for (int i = 0; i < 20; ++i) {
            const auto g = resolvent_matrix(r.system, random_frequency(rng, d));
            EXPECT_TRUE(check_hersch(g).pass);
            EXPECT_EQ(stable_subspace(g).stable.dim(), nplus);
        }
    }
}

TEST(Split, DiagonalExample) {
    const auto split = stable_subspace(raw(diag({Complex(-1, 0), Complex(2, 0)})));
    ASSERT_EQ(split.stable.dim(), 1);
    EXPECT_NEAR(std::abs(split.stable.basis(0, 0)), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(split.stable.basis(1, 0)), 0.0, 1e-15);
    EXPECT_EQ(split.unstable.dim(), 1);
}

TEST(Split, WaveStableVector) {
    const auto split = stable_subspace(resolvent_matrix(wave(), Frequency(0.0, 1.0)));
    ASSERT_EQ(split.stable.dim(), 1);
    const CVector v = split.stable.basis.col(0);
    EXPECT_NEAR(std::abs(v(0)), 1 / std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(std::abs(v(0) - v(1)), 0.0, 1e-14);
    EXPECT_NEAR(split.stable.generator(0, 0).real(), -1.0, 1e-14);
}

TEST(Split, NearImaginaryEigenvalue) {
    EXPECT_EQ(kind_of([] { stable_subspace(raw(diag({Complex(0, 1), Complex(-1, 0)}))); }),
              ErrorKind::NearImaginaryEigenvalue);
}

TEST(Split, BasisIsOrthonormalAndInvariant) {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 30; ++t) {
        const auto r = random_symmetrizable(200 + t, 5, 2);
        const auto g = resolvent_matrix(r.system, random_frequency(rng, 2));
        const auto split = stable_subspace(g);
        for (const SubspaceBasis* b : {&split.stable, &split.unstable}) {
            const Index m = b->dim();
            EXPECT_LT((b->basis.adjoint() * b->basis - CMatrix::Identity(m, m)).norm(), 1e-12);
            EXPECT_LT((g.matrix() * b->basis - b->basis * b->generator).norm(), 1e-10 * g.norm());
        }
        // independent eigenvector basis spans the same space
        EXPECT_LT(max_principal_angle(split.stable.basis, oracle::stable_basis(g.matrix())), 1e-8);
    }
}

TEST(Split, JordanBlocksInsideTheStableSpace) {
    // exact 2x2 Jordan block at -1 next to an unstable eigenvalue
    CMatrix g = CMatrix::Zero(3, 3);
    g(0, 0) = -1.0;
    g(0, 1) = 1.0;
    g(1, 1) = -1.0;
    g(2, 2) = 2.0;
    const auto split = stable_subspace(raw(g));
    EXPECT_EQ(split.stable.dim(), 2);
    const ExponentialProfile f = ExponentialProfile::single(CVector::Ones(3), Complex(-3.0, 0.5), 1);
    CMatrix gamma(2, 3);
    gamma << 1, 0, 0, 0, 1, 1;
    const auto sol = solve_resolvent(raw(g), gamma, f, CVector::Ones(2));
    EXPECT_LT(profile_norm(resolvent_residual(raw(g), sol.u, f)), 1e-12);
    EXPECT_LT((gamma * sol.u.trace() - CVector::Ones(2)).norm(), 1e-12);
}

// ---- propagation

TEST(Propagate, DiagonalExample) {
    const auto split = stable_subspace(raw(diag({Complex(-1, 0), Complex(2, 0)})));
    CVector c(1);
    c << 1.0;
    const CVector u0 = split.stable.basis * c;
    EXPECT_LT((propagate(split.stable, c, 1.0) - std::exp(-1.0) * u0).norm(), 1e-15);
    EXPECT_LT((propagate(split.stable, c, 0.0) - u0).norm(), 1e-15);
}

TEST(Propagate, WaveEigenvector) {
    const auto split = stable_subspace(resolvent_matrix(wave(), Frequency(0.0, 1.0)));
    CVector c(1);
    c << 1.0;
    const CVector u0 = split.stable.basis * c;
    EXPECT_LT((propagate(split.stable, c, 2.0) - std::exp(-2.0) * u0).norm(), 1e-15);
}

TEST(Propagate, Semigroup) {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> gauss;
    for (int t = 0; t < 20; ++t) {
        const auto r = random_symmetrizable(300 + t, 4, 2);
        const auto split = stable_subspace(resolvent_matrix(r.system, random_frequency(rng, 2, 0.1, 10.0)));
        CVector c(split.stable.dim());
        for (Index i = 0; i < c.size(); ++i) c(i) = Complex(gauss(rng), gauss(rng));
        const double x1 = 0.37, x2 = 1.3;
        const CVector once = propagate(split.stable, c, x1 + x2);
        const CVector mid = propagate(split.stable, c, x1);
        const CVector twice = propagate(split.stable, split.stable.basis.adjoint() * mid, x2);
        EXPECT_LT((once - twice).norm(), 1e-10 * std::max(1.0, c.norm()));
    }
}

// ---- profiles

TEST(Profile, NormsAndTraces) {
    const CVector one = CVector::Ones(1);
    EXPECT_NEAR(squared_norm(ExponentialProfile::single(one, -1.0)), 0.5, 1e-15);
    EXPECT_NEAR(squared_norm(ExponentialProfile::single(one, -1.0, 1)), 0.25, 1e-15);
    CVector v(2), w(2);
    v << 1.0, 2.0;
    w << 3.0, -1.0;
    const auto p = ExponentialProfile::single(v, -1.0) + ExponentialProfile::single(w, -1.0, 1);
    EXPECT_LT((profile_trace(p) - v).norm(), 1e-15);
}

TEST(Profile, GramIntegralsMatchQuadrature) {
    std::mt19937_64 rng(12);
    for (int t = 0; t < 20; ++t) {
        const auto g = raw(CMatrix::Identity(3, 3) * Complex(-1.0, 0.0));
        const auto p = random_profile(rng, 3, g);
        EXPECT_NEAR(squared_norm(p), oracle::quadrature_norm2(p), 1e-9 * squared_norm(p));
    }
    for (int m = 0; m < 5; ++m) {
        const Complex s(-0.7, 1.3);
        const Complex q = oracle::integrate([&](double x) { return std::pow(x, m) * std::exp(s * x); }, 0.0,
                                            std::numeric_limits<double>::infinity());
        EXPECT_NEAR(std::abs(gamma_integral(m, s) - q), 0.0, 1e-10);
    }
}

TEST(Profile, CanonicalFormMergesAndDrops) {
    const CVector one = CVector::Ones(2);
    const auto a = ExponentialProfile::single(one, Complex(-1, 1));
    const auto sum = a + a;
    ASSERT_EQ(sum.terms().size(), 1u);
    EXPECT_LT((sum.terms()[0].v - 2.0 * one).norm(), 1e-15);
    EXPECT_TRUE((a - a).empty());
}

TEST(Profile, DerivativeMatchesFiniteDifference) {
    std::mt19937_64 rng(13);
    const auto p = random_profile(rng, 2, raw(-CMatrix::Identity(2, 2)));
    const double x = 0.8, h = 1e-5;
    const CVector fd = (p(x + h) - p(x - h)) / (2 * h);
    EXPECT_LT((p.derivative()(x) - fd).norm(), 1e-6 * std::max(1.0, fd.norm()));
}

// ---- solve

TEST(Solve, ScalarHandSolution) {
    const auto g = raw(CMatrix::Constant(1, 1, -1.0));
    const auto f = ExponentialProfile::single(CVector::Ones(1), -2.0);
    const auto sol = solve_resolvent(g, CMatrix::Ones(1, 1), f, CVector::Zero(1));
    const auto expected = ExponentialProfile::single(CVector::Constant(1, -1.0), -2.0) +
                          ExponentialProfile::single(CVector::Ones(1), -1.0);
    EXPECT_LT(profile_norm(sol.u - expected), 1e-14);
}

TEST(Solve, ZeroDataGivesZero) {
    const auto g = resolvent_matrix(wave(), Frequency(0.3, 0.5));
    const auto sol = solve_resolvent(g, cmat({{1, 0}}), ExponentialProfile(2), CVector::Zero(1));
    EXPECT_TRUE(sol.u.empty());
}

TEST(Solve, ResonantForcing) {
    const auto g = raw(CMatrix::Constant(1, 1, -1.0));
    EXPECT_EQ(kind_of([&] {
                  solve_resolvent(g, CMatrix::Ones(1, 1), ExponentialProfile::single(CVector::Ones(1), -1.0),
                                  CVector::Zero(1));
              }),
              ErrorKind::ResonantMode);
}

TEST(Solve, LopatinskiSingular) {
    const auto g = resolvent_matrix(wave(), Frequency(0.3, 0.5));
    EXPECT_EQ(kind_of([&] { solve_resolvent(g, cmat({{1, -1}}), ExponentialProfile(2), CVector::Ones(1)); }),
              ErrorKind::LopatinskiSingular);
}

TEST(Solve, MatchesGreenFunctionQuadrature) {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> gauss;
    for (int t = 0; t < 12; ++t) {
        const Index n = 2 + t % 3, d = 1 + t % 2;
        const auto r = random_symmetrizable(400 + t, n, d);
        const auto g = resolvent_matrix(r.system, random_frequency(rng, d, 0.2, 2.0, 1.0));
        const Index k = r.system.incoming_count();
        CMatrix gamma(k, n);
        for (Index i = 0; i < gamma.size(); ++i) gamma.data()[i] = Complex(gauss(rng), gauss(rng));
        CVector data(k);
        for (Index i = 0; i < k; ++i) data(i) = Complex(gauss(rng), gauss(rng));
        const auto f = random_profile(rng, n, g);
        const auto sol = solve_resolvent(g, gamma, f, data);
        EXPECT_LT(profile_norm(resolvent_residual(g, sol.u, f)), 1e-10 * std::max(1.0, profile_norm(sol.u)));

        const oracle::GreenSolver green(g.matrix(), gamma, f, data);
        double err = 0, ref = 0;
        for (int i = 0; i <= 20; ++i) {
            const double x = 0.5 * i;
            err += (sol.u(x) - green(x)).squaredNorm();
            ref += green(x).squaredNorm();
        }
        EXPECT_LT(std::sqrt(err / ref), 1e-6);
    }
}

TEST(Solve, SolverReuseMatchesOneShot) {
    const auto r = random_symmetrizable(17, 4, 2);
    const auto g = resolvent_matrix(r.system, Frequency(0.4, Vector::Constant(1, -0.2), 0.3));
    const CMatrix gamma = CMatrix::Identity(r.system.incoming_count(), 4);
    const ResolventSolver solver(g, gamma);
    std::mt19937_64 rng(1);
    for (int t = 0; t < 5; ++t) {
        const auto f = random_profile(rng, 4, g);
        const CVector data = CVector::Ones(gamma.rows());
        EXPECT_LT(profile_norm(solver.solve(f, data).u - solve_resolvent(g, gamma, f, data).u), 1e-13);
    }
}
