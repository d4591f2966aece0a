#include "helpers.hpp"

#include "lopa/catalog.hpp"
#include "lopa/document.hpp"
#include "lopa/error.hpp"

#include <gtest/gtest.h>

using namespace lopa;
using namespace testing_helpers;

namespace {

Matrix random_symmetric(std::mt19937_64& rng, Index n) {
    std::normal_distribution<double> g;
    Matrix x(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) x(i, j) = g(rng);
    return 0.5 * (x + x.transpose());
}

}  // namespace

TEST(ValidateSystem, WaveHasUnitSmallestSingularValue) {
    const ValidationReport r = validate_system(wave());
    EXPECT_TRUE(r.pass());
    EXPECT_NEAR(r.normal_sigma_min, 1.0, 1e-14);
}

TEST(ValidateSystem, SingularNormalMatrixIsCharacteristic) {
    FirstOrderSystem s({mat({{1, 0}, {0, 0}})});
    EXPECT_EQ(kind_of([&] { validate_system(s); }), ErrorKind::CharacteristicBoundary);
}

TEST(ValidateSystem, TwoDimensionalSymmetricPasses) {
    FirstOrderSystem s({mat({{1, 0}, {0, -1}}), mat({{0, 1}, {1, 0}})});
    EXPECT_TRUE(validate_system(s).pass());
}

TEST(ValidateSystem, ShapeErrors) {
    EXPECT_EQ(kind_of([] { FirstOrderSystem({mat({{1, 0}, {0, 1}}), Matrix::Identity(3, 3)}); }),
              ErrorKind::DimensionMismatch);
    EXPECT_EQ(kind_of([] { FirstOrderSystem(std::vector<Matrix>{}); }), ErrorKind::DimensionMismatch);
    EXPECT_EQ(kind_of([] { FirstOrderSystem({Matrix(2, 3)}); }), ErrorKind::DimensionMismatch);
}

TEST(Hyperbolicity, WavePasses) {
    const auto r = check_hyperbolicity(wave(), 32, 1e-8);
    EXPECT_TRUE(r.pass);
    EXPECT_TRUE(r.semisimple);
}

TEST(Hyperbolicity, JordanBlockFailsSemisimplicity) {
    FirstOrderSystem s({mat({{0, 1}, {0, 0}})});
    const auto r = check_hyperbolicity(s, 32, 1e-8);
    EXPECT_FALSE(r.pass);
    EXPECT_FALSE(r.semisimple);
    EXPECT_NEAR(std::abs(r.nonsemisimple_eigenvalue), 0.0, 1e-8);
}

TEST(Hyperbolicity, SymmetricPencilPasses) {
    FirstOrderSystem s({mat({{2, 0}, {0, -1}}), mat({{0, 3}, {3, 0}})});
    const auto r = check_hyperbolicity(s, 64, 1e-8);
    EXPECT_TRUE(r.pass);
    // eigenvalues of [[2a, 3b], [3b, -a]] are (a +- sqrt(9a^2 + 36 b^2)) / 2, real for every xi
    for (const Vector& xi : sphere_points(2, 16)) {
        const Matrix m = xi(0) * s.coefficient(0) + xi(1) * s.coefficient(1);
        const double a = xi(0), b = xi(1);
        Eigen::SelfAdjointEigenSolver<Matrix> es(m);
        const double disc = std::sqrt(9 * a * a + 36 * b * b);
        EXPECT_NEAR(es.eigenvalues()(0), (a - disc) / 2, 1e-12);
        EXPECT_NEAR(es.eigenvalues()(1), (a + disc) / 2, 1e-12);
    }
}

TEST(Hyperbolicity, NonRealSpectrumFails) {
    // rotation generator: eigenvalues +-i
    FirstOrderSystem s({mat({{0, 1}, {-1, 0}})});
    const auto r = check_hyperbolicity(s, 16, 1e-8);
    EXPECT_FALSE(r.pass);
    EXPECT_NEAR(r.worst_defect, 1.0, 1e-12);
}

TEST(Hyperbolicity, VerdictInvariantUnderReflectionAndScaling) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Matrix> a;
        for (int j = 0; j < 2; ++j) a.push_back(random_symmetric(rng, 3) + (trial % 2 ? Matrix::Zero(3, 3) : Matrix(mat({{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}}))));
        FirstOrderSystem s(a);
        std::vector<Matrix> neg, scaled;
        for (const auto& m : a) {
            neg.push_back(-m);
            scaled.push_back(7.5 * m);
        }
        const auto base = check_hyperbolicity(s, 40, 1e-8);
        const auto r1 = check_hyperbolicity(FirstOrderSystem(neg), 40, 1e-8);
        const auto r2 = check_hyperbolicity(FirstOrderSystem(scaled), 40, 1e-8);
        EXPECT_EQ(base.pass, r1.pass);
        EXPECT_EQ(base.pass, r2.pass);
        EXPECT_NEAR(base.worst_defect, r2.worst_defect, 1e-10);
    }
}

TEST(Hyperbolicity, SymmetricSystemsPassForAnyTolerance) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Matrix> a;
        for (int j = 0; j < 3; ++j) a.push_back(random_symmetric(rng, 4));
        for (double tol : {1e-13, 1e-8, 1e-2}) EXPECT_TRUE(check_hyperbolicity(FirstOrderSystem(a), 50, tol).pass);
    }
}

TEST(Hyperbolicity, SpherePointsAreUnitAndAntipodal) {
    const auto pts = sphere_points(3, 40);
    ASSERT_EQ(pts.size(), 40u);
    for (const auto& p : pts) {
        EXPECT_NEAR(p.norm(), 1.0, 1e-14);
        bool found = false;
        for (const auto& q : pts) found = found || (p + q).norm() < 1e-14;
        EXPECT_TRUE(found);
    }
}

TEST(Frequency, RejectsNonpositiveGamma) {
    EXPECT_EQ(kind_of([] { Frequency(0.0, 0.0); }), ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of([] { Frequency(1.0, -1.0); }), ErrorKind::InvalidArgument);
    EXPECT_EQ(Frequency(2.0, 3.0).lambda(), Complex(3.0, 2.0));
}

TEST(BoundarySymbolTest, EvaluationShapeAndBound) {
    const BoundarySymbol s = scaled_dirichlet_symbol(cmat({{1, 2, 0}}));
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) {
        const CMatrix m = s(random_frequency(rng, 2));
        EXPECT_EQ(m.rows(), 1);
        EXPECT_EQ(m.cols(), 3);
    }
    EXPECT_LE(s.spot_check_bound(2, 64), 1.0 + 1e-12);
    EXPECT_EQ(kind_of([&] { s.matrix(); }), ErrorKind::InvalidArgument);
}

TEST(ParseSystem, WaveDocument) {
    const auto doc = parse_system_text(R"({"n":2,"d":1,"A":[[[0,1],[1,0]]],"boundary":{"k":1,"matrix":[[1,0]]}})");
    EXPECT_EQ(doc.system.n(), 2);
    EXPECT_EQ(doc.system.d(), 1);
    EXPECT_TRUE(doc.system.normal().isApprox(wave().normal()));
    ASSERT_TRUE(doc.boundary);
    EXPECT_TRUE(doc.boundary->is_constant());
    EXPECT_EQ(doc.boundary->matrix(), cmat({{1, 0}}));
}

TEST(ParseSystem, ComplexBoundaryEntries) {
    const auto doc = parse_system_text(R"({"n":2,"d":1,"A":[[[0,1],[1,0]]],"boundary":{"k":1,"matrix":[[[1,0.5],0]]}})");
    EXPECT_EQ(doc.boundary->matrix()(0, 0), Complex(1.0, 0.5));
}

TEST(ParseSystem, SchemaErrors) {
    EXPECT_EQ(kind_of([] { parse_system_text(R"({"n":2,"d":1,"A":[[[0,1],[1,0]],[[1,0],[0,1]]]})"); }),
              ErrorKind::SchemaError);
    EXPECT_EQ(kind_of([] { parse_system_text(R"({"n":2,"A":[[[0,1],[1,0]]]})"); }), ErrorKind::SchemaError);
    EXPECT_EQ(kind_of([] { parse_system_text(R"({"n":2,"d":1,"A":[[[0,1],[1,0]]],"extra":1})"); }),
              ErrorKind::SchemaError);
    EXPECT_EQ(kind_of([] { parse_system_text(R"({"n":2,"d":1,"A":[[[0,1],[1]]]})"); }), ErrorKind::SchemaError);
    EXPECT_EQ(kind_of([] { parse_system_text("{not json"); }), ErrorKind::SchemaError);
    EXPECT_EQ(kind_of([] { parse_system_text(R"({"n":2,"d":1,"A":[[[0,"x"],[1,0]]]})"); }), ErrorKind::ValueError);
    EXPECT_EQ(kind_of([] { parse_system_text(R"({"n":2,"d":1,"A":[[[0,1],[1,0]]],"boundary":{"k":1,"symbol":"nope"}})"); }),
              ErrorKind::SchemaError);
}

TEST(ParseSystem, NamedSymbol) {
    const auto doc = parse_system_text(
        R"({"n":2,"d":1,"A":[[[0,1],[1,0]]],"boundary":{"k":1,"symbol":"scaled-dirichlet","params":{"matrix":[[1,0]]}}})");
    ASSERT_TRUE(doc.boundary);
    EXPECT_FALSE(doc.boundary->is_constant());
    const Frequency f(3.0, 4.0);
    EXPECT_NEAR(std::abs(doc.boundary->operator()(f)(0, 0) - Complex(4.0, 3.0) / 5.0), 0.0, 1e-15);
}

TEST(ParseSystem, RoundTripIsBitExact) {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 25; ++trial) {
        const Index n = 1 + trial % 5, d = 1 + trial % 3;
        std::vector<Matrix> a;
        for (Index j = 0; j < d; ++j) {
            Matrix m(n, n);
            for (Index i = 0; i < n * n; ++i) m.data()[i] = g(rng) * std::pow(10.0, static_cast<double>(trial % 7) - 3);
            a.push_back(m);
        }
        CMatrix gm(1, n);
        for (Index i = 0; i < n; ++i) gm(0, i) = Complex(g(rng), g(rng));
        const FirstOrderSystem s(a, "random");
        for (const BoundarySymbol& b : {BoundarySymbol::constant(gm), impedance_symbol(gm, 0.5 * gm)}) {
            const std::string text = serialize_system(s, b).dump();
            const SystemDocument back = parse_system_text(text);
            for (Index j = 0; j < d; ++j) EXPECT_TRUE((back.system.coefficient(j).array() == a[j].array()).all());
            const Frequency f(0.3, Vector::Constant(d - 1, 0.2), 0.7);
            EXPECT_TRUE((back.boundary->operator()(f).array() == b(f).array()).all());
            EXPECT_EQ(serialize_system(back.system, back.boundary).dump(), text);
        }
    }
}

TEST(ParseSystem, FrequencyAndWeightDocuments) {
    const auto freqs = parse_frequencies(json::parse(R"({"frequencies":[{"tau":1,"eta":[2],"gamma":0.5}]})"), 2);
    ASSERT_EQ(freqs.size(), 1u);
    EXPECT_EQ(freqs[0].eta()(0), 2.0);
    EXPECT_EQ(kind_of([] { parse_frequencies(json::parse(R"([{"tau":1,"gamma":0}])"), 1); }), ErrorKind::InvalidGrid);
    const auto w = parse_weights(json::parse(R"({"u":{"scale":2}})"));
    EXPECT_EQ(w.u.scale, 2.0);
    EXPECT_EQ(w.u.power, 1.0);
    EXPECT_EQ(kind_of([] { parse_weights(json::parse(R"({"u":{"scale":0}})")); }), ErrorKind::InvalidWeights);
}

TEST(ParseSystem, ViscousDocumentRoundTrip) {
    const SecondOrderSystem s = random_second_order(4, 2, 1, 2);
    const ViscousDocument back = parse_viscous(serialize_viscous(s));
    EXPECT_TRUE((back.system.a0.array() == s.a0.array()).all());
    EXPECT_TRUE((back.system.b[0][1].array() == s.b[0][1].array()).all());
    json doc = serialize_viscous(s);
    doc["cross_term"] = "j1";
    EXPECT_EQ(kind_of([&] { parse_viscous(doc); }), ErrorKind::SchemaError);
    doc["cross_term"] = "jd";
    EXPECT_NO_THROW(parse_viscous(doc));
}
