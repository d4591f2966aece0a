#include "helpers.hpp"
#include "oracles.hpp"

#include "lopa/catalog.hpp"
#include "lopa/viscous.hpp"

#include <gtest/gtest.h>

using namespace lopa;
using namespace testing_helpers;

namespace {

// Symbol of the second-order operator on u = v e^{mu x}, assembled term by term.
CMatrix operator_symbol(const SecondOrderSystem& s, const Frequency& f, Complex mu) {
    const Index d = s.d();
    const Complex i(0.0, 1.0);
    CMatrix l = f.lambda() * s.a0.cast<Complex>() + mu * s.a[d - 1].cast<Complex>() -
                mu * mu * s.b[d - 1][d - 1].cast<Complex>();
    for (Index j = 0; j + 1 < d; ++j) {
        const double ej = f.eta()(j);
        l += i * ej * s.a[j].cast<Complex>();
        l -= i * ej * mu * (s.b[j][d - 1] + s.b[d - 1][j]).cast<Complex>();
        for (Index k = 0; k + 1 < d; ++k) l += ej * f.eta()(k) * s.b[j][k].cast<Complex>();
    }
    return l;
}

SecondOrderSystem two_d_identity_viscosity() {
    SecondOrderSystem s;
    s.n1 = 1;
    s.n2 = 1;
    s.a0 = Matrix::Identity(2, 2);
    s.a = {mat({{0, 1}, {1, 0}}), mat({{1, 0.5}, {0.5, -1}})};
    s.b.assign(2, std::vector<Matrix>(2, Matrix::Zero(2, 2)));
    s.b[0][0](1, 1) = 1.0;
    s.b[1][1](1, 1) = 1.0;
    s.theta = 1.0;
    return s;
}

std::vector<Frequency> bounded_set(int gamma_levels, int tau_levels) {
    return box_grid(1, 1e-2, 1.0, 1.0, gamma_levels, tau_levels);
}

}  // namespace

TEST(ViscousValidate, Examples) {
    const auto scalar = validate_second_order(scalar_viscous(1.0, 0.7));
    EXPECT_NEAR(scalar.measured_theta, 0.7, 1e-15);

    EXPECT_NEAR(validate_second_order(two_d_identity_viscosity()).measured_theta, 1.0, 1e-12);

    auto structural = two_d_identity_viscosity();
    structural.b[0][0](0, 0) = 1.0;
    EXPECT_EQ(kind_of([&] { validate_second_order(structural); }), ErrorKind::StructuralFailure);

    auto overclaimed = scalar_viscous(1.0, 0.7);
    overclaimed.theta = 2.0;
    EXPECT_EQ(kind_of([&] { validate_second_order(overclaimed); }), ErrorKind::EllipticityFailure);

    auto characteristic = two_d_identity_viscosity();
    characteristic.a[1](0, 0) = 0.0;
    EXPECT_EQ(kind_of([&] { validate_second_order(characteristic); }), ErrorKind::HyperbolicBlockCharacteristic);

    auto hyperbolic_only = scalar_viscous(1.0, 1.0);
    hyperbolic_only.n1 = 1;
    hyperbolic_only.n2 = 0;
    EXPECT_EQ(kind_of([&] { validate_second_order(hyperbolic_only); }), ErrorKind::ValueError);
    EXPECT_EQ(kind_of([&] { reduce(hyperbolic_only, Frequency(0.0, 1.0)); }), ErrorKind::ValueError);
}

TEST(Reduce, ScalarMatrix) {
    for (double a : {-1.0, 0.5, 2.0})
        for (double b : {0.3, 1.0}) {
            const Frequency f(0.7, 0.4);
            const auto r = reduce(scalar_viscous(a, b), f);
            CMatrix expected(2, 2);
            expected << 0.0, 1.0, f.lambda() / b, a / b;
            EXPECT_LT((r.gg.matrix() - expected).norm(), 1e-15);
        }
}

TEST(Reduce, ExponentialModesSatisfyReducedSystem) {
    // U = (v, mu v_2) e^{mu x}, f = L(mu) v e^{mu x}  =>  mu U = GG U + P f
    std::mt19937_64 rng(41);
    std::normal_distribution<double> gauss;
    for (int t = 0; t < 30; ++t) {
        const Index n1 = t % 3, n2 = 1 + t % 2, d = 1 + t % 3;
        const auto s = random_second_order(2000 + t, n1, n2, d);
        const Frequency f = random_frequency(rng, d, 1e-2, 10.0, 2.0);
        const auto r = reduce(s, f);
        const Complex mu(gauss(rng), gauss(rng));
        CVector v(s.n());
        for (Index i = 0; i < v.size(); ++i) v(i) = Complex(gauss(rng), gauss(rng));
        CVector big(r.dim());
        big << v, mu * v.tail(n2);
        const CVector forcing = operator_symbol(s, f, mu) * v;
        const CVector lhs = mu * big;
        const CVector rhs = r.gg.matrix() * big + r.forcing_map * forcing;
        EXPECT_LT((lhs - rhs).norm(), 1e-10 * std::max(1.0, lhs.norm()));
    }
}

TEST(Reduce, DirectAndReducedResidualsAgree) {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> gauss;
    for (int t = 0; t < 30; ++t) {
        const Index n1 = t % 3, n2 = 1 + t % 2, d = 1 + t % 3;
        const auto s = random_second_order(2100 + t, n1, n2, d);
        const Frequency f = random_frequency(rng, d, 1e-2, 10.0, 2.0);
        const auto r = reduce(s, f);
        std::vector<ProfileTerm> terms;
        for (int m = 0; m < 2; ++m) {
            CVector v(s.n());
            for (Index i = 0; i < v.size(); ++i) v(i) = Complex(gauss(rng), gauss(rng));
            terms.push_back({v, Complex(-0.5 - std::abs(gauss(rng)), gauss(rng)), m});
        }
        const ExponentialProfile u(s.n(), terms);
        // forcing that makes u an exact solution
        const auto forcing = direct_residual(s, f, u, ExponentialProfile(s.n()));
        EXPECT_LT(profile_norm(direct_residual(s, f, u, forcing)), 1e-12 * profile_norm(forcing));
        EXPECT_LT(profile_norm(reduced_residual(r, u, forcing)), 1e-10 * std::max(1.0, profile_norm(r.lift(u))));
    }
}

TEST(Reduce, NoImaginaryEigenvaluesForPositiveGamma) {
    std::mt19937_64 rng(43);
    for (int t = 0; t < 20; ++t) {
        const auto s = random_second_order(2200 + t, 1 + t % 2, 1 + t % 2, 1 + t % 2);
        for (int i = 0; i < 10; ++i) {
            const auto r = reduce(s, random_frequency(rng, s.d(), 1e-2, 10.0, 3.0));
            const CVector ev = r.gg.eigenvalues();
            for (Index k = 0; k < ev.size(); ++k)
                EXPECT_GT(std::abs(ev(k).real()), 1e-10 * (1 + r.gg.norm()));
        }
    }
}

TEST(RoussetBc, Examples) {
    const CMatrix dirichlet = rousset_bc(scalar_viscous(1.0, 1.0), CMatrix(0, 0));
    EXPECT_EQ(dirichlet, cmat({{1, 0}}));

    SecondOrderSystem s = two_d_identity_viscosity();
    s.a = {mat({{1, 0}, {0, 1}})};
    s.b = {{s.b[1][1]}};
    EXPECT_EQ(rousset_bc(s, cmat({{1}})), cmat({{1, 0, 0}, {0, 1, 0}}));

    s.a = {mat({{-1, 0}, {0, 1}})};
    EXPECT_EQ(kind_of([&] { rousset_bc(s, cmat({{1}})); }), ErrorKind::WrongBoundaryCount);
}

TEST(EvansScan, ScalarMatchesQuadraticRoot) {
    const double a = 0.8, b = 1.3;
    const auto s = scalar_viscous(a, b);
    const auto grid = bounded_set(7, 5);
    for (const auto& [p, q] : {std::pair{1.0, 0.0}, std::pair{0.0, 1.0}, std::pair{1.0, 2.0}}) {
        const auto scan = evans_scan(s, cmat({{p, q}}), grid);
        double expected = std::numeric_limits<double>::infinity();
        for (const auto& f : grid) {
            const double oracle_sigma = oracle::scalar_viscous_sigma(a, b, f.lambda(), p, q);
            expected = std::min(expected, oracle_sigma);
            const auto v = lopatinski_value(reduce(s, f).gg, cmat({{p, q}}));
            EXPECT_NEAR(v.sigma, oracle_sigma, 1e-10);
        }
        EXPECT_NEAR(scan.inf_sigma, expected, 1e-10);
        EXPECT_EQ(scan.verdict, ScanVerdict::Holds);
    }
}

TEST(EvansScan, EmptySetRejected) {
    EXPECT_EQ(kind_of([] { evans_scan(scalar_viscous(1, 1), cmat({{1, 0}}), {}); }), ErrorKind::InvalidGrid);
}

TEST(EvansScan, BasisInvariance) {
    std::mt19937_64 rng(44);
    const auto s = random_second_order(2300, 1, 1, 2);
    const CMatrix gamma = rousset_bc(s, build_dissipative_bc(make_symmetrizer(s.a0.topLeftCorner(1, 1),
                                                                              hyperbolic_block(s)),
                                                             hyperbolic_block(s))
                                           .cast<Complex>());
    for (int t = 0; t < 10; ++t) {
        const auto g = reduce(s, random_frequency(rng, 2, 1e-2, 1.0, 1.0)).gg;
        const CMatrix v = stable_subspace(g).stable.basis;
        const CMatrix w = oracle::stable_basis(g.matrix());
        ASSERT_EQ(v.cols(), gamma.rows());
        EXPECT_NEAR(lopatinski_sigma(v, gamma), lopatinski_sigma(w, gamma), 1e-8);
    }
}

TEST(ViscousKreiss, ZeroDataAndWeights) {
    const auto s = scalar_viscous(1.0, 1.0);
    const auto p = viscous_problem(s, Frequency(0.0, 0.5), ViscousWeights{});
    EXPECT_EQ(kreiss_parts(p.weights, ExponentialProfile(2), ExponentialProfile(1), CVector::Zero(1)).ratio(), 0.0);
    EXPECT_NEAR(p.weights.state(0), 0.5, 0.0);
    EXPECT_NEAR(p.weights.state(1), 1.0, 0.0);
    EXPECT_NEAR(p.weights.forcing, 0.5, 0.0);

    ViscousWeights zero;
    zero.u.scale = 0.0;
    EXPECT_EQ(kind_of([&] { zero.validate(); }), ErrorKind::InvalidWeights);
    EXPECT_EQ(kind_of([&] { viscous_problem(s, Frequency(0.0, 0.5), zero); }), ErrorKind::InvalidWeights);
}

TEST(ViscousKreiss, ScalarDirichletRefinementStable) {
    const auto s = scalar_viscous(1.0, 1.0);
    const CMatrix ref = rousset_bc(s, CMatrix(0, 0));
    const auto coarse = viscous_stability_check(s, ref, bounded_set(5, 5), TrialOptions{});
    const auto fine = viscous_stability_check(s, ref, bounded_set(9, 9), TrialOptions{});
    ASSERT_TRUE(coarse.stable_on_grid);
    ASSERT_TRUE(fine.stable_on_grid);
    EXPECT_GE(fine.max_ratio, coarse.max_ratio * (1 - 1e-12));
    EXPECT_LE(fine.max_ratio, 1.1 * coarse.max_ratio);
}

TEST(ViscousKreiss, DecompositionChainWithWeightedNorms) {
    const auto s = scalar_viscous(0.6, 1.0);
    const CMatrix ref = rousset_bc(s, CMatrix(0, 0));
    const CMatrix gamma = cmat({{1.0, 2.0}});
    std::mt19937_64 rng(45);
    for (const auto& f : bounded_set(4, 3)) {
        const auto p = viscous_problem(s, f, ViscousWeights{});
        const auto forcing = random_forcing(p, rng, 1);
        const CVector g = random_vector(1, rng);
        const auto tr = decompose(p, gamma, ref, forcing, g);
        for (const auto& c : tr.chain) EXPECT_GE(c.residual, -kChainTolerance) << c.name;
        EXPECT_LT(tr.direct_relative_error, 1e-8);
    }
}
