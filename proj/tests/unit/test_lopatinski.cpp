#include "helpers.hpp"
#include "oracles.hpp"

#include "lopa/catalog.hpp"
#include "lopa/lopatinski.hpp"
#include "lopa/symmetrizer.hpp"

#include <gtest/gtest.h>

using namespace lopa;
using namespace testing_helpers;

namespace {

BoundarySymbol constant(const CMatrix& m) { return BoundarySymbol::constant(m); }

CMatrix random_unitary(std::mt19937_64& rng, Index m) {
    std::normal_distribution<double> gauss;
    CMatrix z(m, m);
    for (Index i = 0; i < z.size(); ++i) z.data()[i] = Complex(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<CMatrix> qr(z);
    return qr.householderQ() * CMatrix::Identity(m, m);
}

CMatrix random_boundary(std::mt19937_64& rng, Index k, Index n) {
    std::normal_distribution<double> gauss;
    CMatrix g(k, n);
    for (Index i = 0; i < g.size(); ++i) g.data()[i] = Complex(gauss(rng), gauss(rng));
    return g;
}

}  // namespace

TEST(LopatinskiValue, Examples) {
    const auto scalar = lopatinski_value(FirstOrderSystem({mat({{2}})}), constant(cmat({{1}})), Frequency(0.3, 0.7));
    EXPECT_NEAR(scalar.sigma, 1.0, 1e-14);

    for (double gamma : {1e-3, 1.0, 1e3}) {
        const auto w = lopatinski_value(wave(), constant(cmat({{1, 0}})), Frequency(0.0, gamma));
        EXPECT_NEAR(w.sigma, 1 / std::sqrt(2.0), 1e-14);
        EXPECT_NEAR(w.trace_constant, 2.0, 1e-12);
        EXPECT_TRUE(w.rank_ok);
    }
    const auto bad = lopatinski_value(wave(), constant(cmat({{1, -1}})), Frequency(0.0, 1.0));
    EXPECT_LT(bad.sigma, 1e-14);
}

TEST(LopatinskiValue, SigmaBoundedByBoundaryNorm) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 30; ++t) {
        const auto r = random_symmetrizable(1000 + t, 4, 2);
        const CMatrix gamma = random_boundary(rng, r.system.incoming_count(), 4);
        const auto v = lopatinski_value(r.system, constant(gamma), random_frequency(rng, 2));
        if (gamma.rows() == 0) {
            EXPECT_TRUE(std::isinf(v.sigma));
            continue;
        }
        EXPECT_GE(v.sigma, 0.0);
        EXPECT_LE(v.sigma, op_norm(gamma) * (1 + 1e-12));
    }
}

TEST(LopatinskiValue, RankMismatchReported) {
    // two rows against a one-dimensional stable space
    const auto v = lopatinski_value(wave(), constant(cmat({{1, 0}, {0, 1}})), Frequency(0.0, 1.0));
    EXPECT_FALSE(v.rank_ok);
    EXPECT_FALSE(v.rank_detail.empty());
    EXPECT_EQ(kind_of([] { lopatinski_value(wave(), constant(cmat({{1, 0}, {0, 1}})), Frequency(0.0, 1.0), true); }),
              ErrorKind::RankMismatch);
}

TEST(LopatinskiValue, BasisChangeInvariance) {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 20; ++t) {
        const auto r = random_symmetrizable(1100 + t, 5, 3);
        const auto g = resolvent_matrix(r.system, random_frequency(rng, 3));
        const CMatrix v = stable_subspace(g).stable.basis;
        const CMatrix gamma = random_boundary(rng, v.cols(), 5);
        const double sigma = lopatinski_sigma(v, gamma);
        EXPECT_NEAR(lopatinski_sigma(v * random_unitary(rng, v.cols()), gamma), sigma, 1e-12 * op_norm(gamma));
        // independent eigenvector basis
        EXPECT_NEAR(lopatinski_sigma(oracle::stable_basis(g.matrix()), gamma), sigma, 1e-8 * op_norm(gamma));
    }
}

TEST(LopatinskiValue, ScalingInvariance) {
    std::mt19937_64 rng(10);
    const auto r = random_symmetrizable(1200, 4, 2);
    const auto gamma = constant(random_boundary(rng, r.system.incoming_count(), 4));
    for (int t = 0; t < 20; ++t) {
        const Frequency f = random_frequency(rng, 2);
        const double s0 = lopatinski_value(r.system, gamma, f).sigma;
        for (double s : {0.1, 10.0}) EXPECT_NEAR(lopatinski_value(r.system, gamma, f.scaled(s)).sigma, s0, 1e-8);
    }
}

TEST(LopatinskiValue, TraceLemmaAttained) {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> gauss;
    for (int t = 0; t < 10; ++t) {
        const auto r = random_symmetrizable(1300 + t, 4, 2);
        const auto g = resolvent_matrix(r.system, random_frequency(rng, 2));
        const CMatrix v = stable_subspace(g).stable.basis;
        const CMatrix gamma = random_boundary(rng, v.cols(), 4);
        const double sigma = lopatinski_sigma(v, gamma);
        for (int i = 0; i < 100; ++i) {
            CVector c(v.cols());
            for (Index j = 0; j < c.size(); ++j) c(j) = Complex(gauss(rng), gauss(rng));
            const CVector h = v * c;
            EXPECT_LE(h.norm(), (gamma * h).norm() / sigma * (1 + 1e-10));
        }
        Eigen::JacobiSVD<CMatrix> svd(gamma * v, Eigen::ComputeFullV);
        const CVector worst = v * svd.matrixV().col(v.cols() - 1);
        EXPECT_NEAR(worst.norm() / (gamma * worst).norm(), 1 / sigma, 1e-6 / sigma);
    }
}

TEST(LopatinskiValue, SingularBoundaryBlocksSolve) {
    const auto g = resolvent_matrix(wave(), Frequency(0.2, 1.0));
    const CMatrix gamma = cmat({{1, -1}});
    ASSERT_LT(lopatinski_value(g, gamma).sigma, 1e-14);
    for (double datum : {0.0, 1.0})
        EXPECT_EQ(kind_of([&] { solve_resolvent(g, gamma, ExponentialProfile(2), CVector::Constant(1, datum)); }),
                  ErrorKind::LopatinskiSingular);
}

TEST(UniformScan, Wave) {
    ScanGrid grid;
    grid.gamma_min = 1e-3;
    const auto good = uniform_scan(wave(), constant(cmat({{1, 0}})), grid);
    EXPECT_EQ(good.verdict, ScanVerdict::Holds);
    EXPECT_NEAR(good.inf_sigma, 1 / std::sqrt(2.0), 1e-6);
    EXPECT_GT(good.points, 0);
    EXPECT_FALSE(good.radial_cutoff.has_value());

    const auto bad = uniform_scan(wave(), constant(cmat({{1, -1}})), grid);
    EXPECT_EQ(bad.verdict, ScanVerdict::Fails);
    EXPECT_LT(bad.inf_sigma, 1e-8);
    ASSERT_TRUE(bad.worst.has_value());
}

TEST(UniformScan, EmptyBoundaryHoldsVacuously) {
    const FirstOrderSystem outgoing({-Matrix::Identity(3, 3)});
    const auto r = uniform_scan(outgoing, constant(CMatrix(0, 3)), ScanGrid{});
    EXPECT_EQ(r.verdict, ScanVerdict::Holds);
    EXPECT_TRUE(std::isinf(r.inf_sigma));
}

TEST(UniformScan, RankFailure) {
    const auto r = uniform_scan(wave(), constant(cmat({{1, 0}, {0, 1}})), ScanGrid{});
    EXPECT_EQ(r.verdict, ScanVerdict::RankFailure);
    EXPECT_GT(r.rank_failures, 0);
}

TEST(UniformScan, InfIsMinimumOverGrid) {
    const auto e = acoustics_entry();
    const auto& gamma = e.boundaries.front().symbol;
    ScanGrid grid;
    grid.resolution = 8;
    const auto r = uniform_scan(*e.system, gamma, grid);
    double m = std::numeric_limits<double>::infinity();
    for (const auto& f : hemisphere_grid(e.system->d(), grid.gamma_min, grid.resolution))
        m = std::min(m, lopatinski_value(*e.system, gamma, f).sigma);
    EXPECT_DOUBLE_EQ(r.inf_sigma, m);
}

TEST(UniformScan, FrequencyDependentSymbolUsesRadialSamples) {
    const auto symbol = scaled_dirichlet_symbol(cmat({{1, 0}}));
    ScanGrid grid;
    grid.resolution = 6;
    const auto r = uniform_scan(wave(), symbol, grid);
    ASSERT_TRUE(r.radial_cutoff.has_value());
    EXPECT_EQ(*r.radial_cutoff, grid.radial_cutoff);
    EXPECT_EQ(r.verdict, ScanVerdict::Holds);
}

TEST(UniformScan, Deterministic) {
    const auto e = acoustics_entry();
    ScanOptions one, many;
    many.threads = 4;
    const auto a = uniform_scan(*e.system, e.boundaries.front().symbol, ScanGrid{}, one);
    const auto b = uniform_scan(*e.system, e.boundaries.front().symbol, ScanGrid{}, many);
    EXPECT_EQ(a.inf_sigma, b.inf_sigma);
    EXPECT_EQ(a.points, b.points);
}

TEST(UniformScan, AdjointHoldsWhenForwardHolds) {
    for (const auto& entry : catalog()) {
        if (!entry.system || !entry.expected.symmetrizable) continue;
        for (const auto& b : entry.boundaries) {
            if (!b.symbol.is_constant()) continue;
            const auto forward = uniform_scan(*entry.system, b.symbol, ScanGrid{});
            if (forward.verdict != ScanVerdict::Holds) continue;
            const auto adj = adjoint_forward_form(*entry.system, b.symbol.matrix());
            const auto backward = uniform_scan(adj.system, constant(adj.boundary), ScanGrid{});
            EXPECT_EQ(backward.verdict, ScanVerdict::Holds) << entry.name << "/" << b.label;
        }
    }
}

TEST(Grids, HemisphereAndBox) {
    for (Index d : {1, 2, 3}) {
        const auto h = hemisphere_grid(d, 1e-3, 8);
        ASSERT_FALSE(h.empty());
        for (const auto& f : h) {
            EXPECT_NEAR(f.magnitude(), 1.0, 1e-12);
            EXPECT_GE(f.gamma(), 1e-3 * (1 - 1e-12));
        }
        const auto b = box_grid(d, 1e-2, 1e2, 5.0, 5, 3);
        for (const auto& f : b) {
            EXPECT_GE(f.gamma(), 1e-2 * (1 - 1e-12));
            EXPECT_LE(f.gamma(), 1e2 * (1 + 1e-12));
            EXPECT_LE(std::abs(f.tau()), 5.0);
        }
    }
    EXPECT_EQ(kind_of([] { hemisphere_grid(2, 0.0, 8); }), ErrorKind::InvalidGrid);
}
