#include "lopa/catalog.hpp"

#include "lopa/error.hpp"

#include <random>

namespace lopa {

namespace {

Matrix gaussian(Index rows, Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
    return m;
}

Matrix random_symmetric(Index n, std::mt19937_64& rng) {
    const Matrix x = gaussian(n, n, rng);
    return 0.5 * (x + x.transpose());
}

Matrix random_spd(Index n, std::mt19937_64& rng) {
    const Matrix r = gaussian(n, n, rng);
    return r * r.transpose() / static_cast<double>(n) + 0.5 * Matrix::Identity(n, n);
}

CMatrix row(std::initializer_list<double> values) {
    CMatrix m(1, static_cast<Index>(values.size()));
    Index i = 0;
    for (double v : values) m(0, i++) = v;
    return m;
}

}  // namespace

RandomSymmetrizable random_symmetrizable(std::uint64_t seed, Index n, Index d) {
    if (n < 1 || d < 1) throw Error(ErrorKind::InvalidArgument, "need n >= 1 and d >= 1");
    std::mt19937_64 rng(seed);
    const Matrix s = random_spd(n, rng);
    const Eigen::LLT<Matrix> llt(s);
    std::vector<Matrix> a;
    for (Index j = 0; j < d; ++j) a.push_back(llt.solve(random_symmetric(n, rng)));
    return {FirstOrderSystem(std::move(a), "random-symmetrizable"), s};
}

SecondOrderSystem random_second_order(std::uint64_t seed, Index n1, Index n2, Index d) {
    if (n2 < 1 || n1 < 0 || d < 1) throw Error(ErrorKind::InvalidArgument, "need n2 >= 1, n1 >= 0, d >= 1");
    std::mt19937_64 rng(seed);
    const Index n = n1 + n2;
    SecondOrderSystem s;
    s.n1 = n1;
    s.n2 = n2;
    s.a0 = random_spd(n, rng);
    for (Index j = 0; j < d; ++j) s.a.push_back(random_symmetric(n, rng));
    // B^{jk}_22 = sum_l C_{lj}^T C_{lk} + delta_jk I is elliptic with theta >= 1
    std::vector<Matrix> c;
    for (Index l = 0; l < d; ++l) c.push_back(gaussian(n2, n2 * d, rng) / std::sqrt(static_cast<double>(n2 * d)));
    s.b.assign(static_cast<std::size_t>(d), std::vector<Matrix>(static_cast<std::size_t>(d), Matrix::Zero(n, n)));
    for (Index j = 0; j < d; ++j)
        for (Index k = 0; k < d; ++k) {
            Matrix blk = Matrix::Zero(n2, n2);
            for (Index l = 0; l < d; ++l)
                blk += c[l].middleCols(j * n2, n2).transpose() * c[l].middleCols(k * n2, n2);
            if (j == k) blk += Matrix::Identity(n2, n2);
            s.b[j][k].bottomRightCorner(n2, n2) = blk;
        }
    s.theta = 1.0;
    s.name = "random-second-order";
    return s;
}

SecondOrderSystem scalar_viscous(double a, double b) {
    SecondOrderSystem s;
    s.n1 = 0;
    s.n2 = 1;
    s.a0 = Matrix::Identity(1, 1);
    s.a = {Matrix::Constant(1, 1, a)};
    s.b = {{Matrix::Constant(1, 1, b)}};
    s.theta = b;
    s.name = "scalar-viscous";
    return s;
}

CatalogEntry scalar_transport_entry(double a) {
    CatalogEntry e;
    e.name = "scalar-transport";
    e.description = "u_t + a u_x = 0 with a > 0: one incoming characteristic";
    e.system = FirstOrderSystem({Matrix::Constant(1, 1, a)}, e.name);
    e.symmetrizer = Matrix::Identity(1, 1);
    e.boundaries.push_back({"good", BoundarySymbol::constant(row({1.0})), true});
    e.boundaries.push_back({"bad", BoundarySymbol::constant(row({0.0})), false});
    e.expected.incoming = a > 0.0 ? 1 : 0;
    return e;
}

CatalogEntry wave_entry() {
    CatalogEntry e;
    e.name = "wave-1d";
    e.description = "1-D wave system A = [[0,1],[1,0]]";
    Matrix a(2, 2);
    a << 0, 1, 1, 0;
    e.system = FirstOrderSystem({a}, e.name);
    e.symmetrizer = Matrix::Identity(2, 2);
    e.boundaries.push_back({"good", BoundarySymbol::constant(row({1.0, 0.0})), true});
    e.boundaries.push_back({"bad", BoundarySymbol::constant(row({1.0, -1.0})), false});
    e.expected.incoming = 1;
    return e;
}

CatalogEntry acoustics_entry(double mach) {
    CatalogEntry e;
    e.name = "acoustics-2d";
    e.description = "linearized 2-D acoustics (p, v1, v2) with normal background flow";
    Matrix a1(3, 3), a2(3, 3);
    a1 << 0, 1, 0, 1, 0, 0, 0, 0, 0;
    a2 << mach, 0, 1, 0, mach, 0, 1, 0, mach;
    e.system = FirstOrderSystem({a1, a2}, e.name);
    e.symmetrizer = Matrix::Identity(3, 3);
    const Symmetrizer sym = make_symmetrizer(Matrix::Identity(3, 3), *e.system);
    e.boundaries.push_back(
        {"good", BoundarySymbol::constant(build_dissipative_bc(sym, *e.system).cast<Complex>()), true});
    // annihilates the eigenvector (1, 0, 1) of A_2, which spans part of E_- at tau = eta = 0
    CMatrix bad(2, 3);
    bad << 1, 0, -1, 1, 1, -1;
    e.boundaries.push_back({"bad", BoundarySymbol::constant(bad), false});
    e.expected.incoming = mach < 1.0 ? 2 : 3;
    return e;
}

CatalogEntry random_symmetrizable_entry(std::uint64_t seed, Index n, Index d) {
    CatalogEntry e;
    e.name = "random-symmetrizable";
    e.description = "S^{-1} Sigma_j with random SPD S and random symmetric Sigma_j";
    RandomSymmetrizable r = random_symmetrizable(seed, n, d);
    e.system = r.system;
    e.symmetrizer = r.symmetrizer;
    const Symmetrizer sym = make_symmetrizer(r.symmetrizer, r.system);
    e.boundaries.push_back(
        {"good", BoundarySymbol::constant(build_dissipative_bc(sym, r.system).cast<Complex>()), true});
    e.expected.incoming = r.system.incoming_count();
    return e;
}

CatalogEntry jordan_block_entry() {
    CatalogEntry e;
    e.name = "jordan-block";
    e.description = "A = [[0,1],[0,0]]: not hyperbolic, not symmetrizable, characteristic";
    Matrix a(2, 2);
    a << 0, 1, 0, 0;
    e.system = FirstOrderSystem({a}, e.name);
    e.expected.noncharacteristic = false;
    e.expected.hyperbolic = false;
    e.expected.symmetrizable = false;
    e.expected.incoming = 0;
    return e;
}

CatalogEntry scalar_viscous_entry(double a, double b) {
    CatalogEntry e;
    e.name = "scalar-viscous";
    e.description = "u_t + a u_x - b u_xx = f with Dirichlet or Neumann data";
    e.viscous = scalar_viscous(a, b);
    e.boundaries.push_back({"dirichlet", BoundarySymbol::constant(rousset_bc(*e.viscous, CMatrix(0, 0))), true});
    e.boundaries.push_back({"neumann", BoundarySymbol::constant(row({0.0, 1.0})), true});
    e.expected.incoming = 1;
    return e;
}

std::vector<CatalogEntry> catalog() {
    return {scalar_transport_entry(), wave_entry(), acoustics_entry(), random_symmetrizable_entry(),
            jordan_block_entry(), scalar_viscous_entry()};
}

CatalogEntry catalog_entry(const std::string& name) {
    for (auto& e : catalog())
        if (e.name == name) return e;
    throw Error(ErrorKind::InvalidArgument, "unknown catalog entry '" + name + "'");
}

}  // namespace lopa
