#include "lopa/error.hpp"

namespace lopa {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::CharacteristicBoundary: return "CharacteristicBoundary";
        case ErrorKind::SchemaError: return "SchemaError";
        case ErrorKind::ValueError: return "ValueError";
        case ErrorKind::RankDeficient: return "RankDeficient";
        case ErrorKind::WrongBoundaryCount: return "WrongBoundaryCount";
        case ErrorKind::NotNegativeOnKernel: return "NotNegativeOnKernel";
        case ErrorKind::DegenerateSplitting: return "DegenerateSplitting";
        case ErrorKind::NearImaginaryEigenvalue: return "NearImaginaryEigenvalue";
        case ErrorKind::DimensionAnomaly: return "DimensionAnomaly";
        case ErrorKind::ResonantMode: return "ResonantMode";
        case ErrorKind::LopatinskiSingular: return "LopatinskiSingular";
        case ErrorKind::RankMismatch: return "RankMismatch";
        case ErrorKind::ChainViolation: return "ChainViolation";
        case ErrorKind::EllipticityFailure: return "EllipticityFailure";
        case ErrorKind::HyperbolicBlockCharacteristic: return "HyperbolicBlockCharacteristic";
        case ErrorKind::StructuralFailure: return "StructuralFailure";
        case ErrorKind::InvalidGrid: return "InvalidGrid";
        case ErrorKind::InvalidWeights: return "InvalidWeights";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

bool is_input_error(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::DimensionMismatch:
        case ErrorKind::SchemaError:
        case ErrorKind::ValueError:
        case ErrorKind::InvalidGrid:
        case ErrorKind::InvalidWeights:
        case ErrorKind::InvalidArgument:
            return true;
        default:
            return false;
    }
}

}  // namespace lopa
