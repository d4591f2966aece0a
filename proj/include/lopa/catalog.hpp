#pragma once

#include "lopa/symmetrizer.hpp"
#include "lopa/system.hpp"
#include "lopa/viscous.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lopa {

struct CatalogBoundary {
    std::string label;
    BoundarySymbol symbol;
    /// expected uniform Lopatinski (or Evans) verdict
    bool expect_holds = true;
};

struct CatalogExpectations {
    bool noncharacteristic = true;
    bool hyperbolic = true;
    bool symmetrizable = true;
    Index incoming = 0;
};

struct CatalogEntry {
    std::string name;
    std::string description;
    std::optional<FirstOrderSystem> system;
    std::optional<SecondOrderSystem> viscous;
    /// known symmetrizer when the construction provides one
    std::optional<Matrix> symmetrizer;
    std::vector<CatalogBoundary> boundaries;
    CatalogExpectations expected;
};

/// S^{-1} Sigma_j with Sigma_j random symmetric and S = R R^T / n + I / 2.
struct RandomSymmetrizable {
    FirstOrderSystem system;
    Matrix symmetrizer;
};
RandomSymmetrizable random_symmetrizable(std::uint64_t seed, Index n, Index d);

/// Random SecondOrderSystem with symmetric A^j, SPD A^0 and parabolic
/// coupling confined to the (2,2) blocks.
SecondOrderSystem random_second_order(std::uint64_t seed, Index n1, Index n2, Index d);

SecondOrderSystem scalar_viscous(double a, double b);

CatalogEntry scalar_transport_entry(double a = 1.0);
CatalogEntry wave_entry();
CatalogEntry acoustics_entry(double mach = 0.5);
CatalogEntry random_symmetrizable_entry(std::uint64_t seed = 7, Index n = 5, Index d = 2);
CatalogEntry jordan_block_entry();
CatalogEntry scalar_viscous_entry(double a = 1.0, double b = 1.0);

std::vector<CatalogEntry> catalog();
/// Throws InvalidArgument for unknown names.
CatalogEntry catalog_entry(const std::string& name);

}  // namespace lopa
