#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lopa {

/// Failure categories raised by the library. The CLI maps input-shaped
/// errors (schema, dimension, value) to exit code 2 and analytic failures
/// to exit code 1.
enum class ErrorKind {
    DimensionMismatch,
    CharacteristicBoundary,
    SchemaError,
    ValueError,
    RankDeficient,
    WrongBoundaryCount,
    NotNegativeOnKernel,
    DegenerateSplitting,
    NearImaginaryEigenvalue,
    DimensionAnomaly,
    ResonantMode,
    LopatinskiSingular,
    RankMismatch,
    ChainViolation,
    EllipticityFailure,
    HyperbolicBlockCharacteristic,
    StructuralFailure,
    InvalidGrid,
    InvalidWeights,
    InvalidArgument,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// True for errors describing malformed input rather than a failed condition.
bool is_input_error(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace lopa
