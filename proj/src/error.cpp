#include "isaacs/error.hpp"

namespace isaacs {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::ConfigError: return "ConfigError";
        case ErrorKind::NotFound: return "NotFound";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::ObstacleOrderViolation: return "ObstacleOrderViolation";
        case ErrorKind::TerminalSandwichViolation: return "TerminalSandwichViolation";
        case ErrorKind::GrowthViolation: return "GrowthViolation";
        case ErrorKind::LipschitzViolation: return "LipschitzViolation";
        case ErrorKind::DerivativeBoundViolation: return "DerivativeBoundViolation";
        case ErrorKind::NonFiniteState: return "NonFiniteState";
        case ErrorKind::CFLViolation: return "CFLViolation";
        case ErrorKind::DegenerateModel: return "DegenerateModel";
        case ErrorKind::StabilityBlowup: return "StabilityBlowup";
        case ErrorKind::NonpositiveTransformedValue: return "NonpositiveTransformedValue";
        case ErrorKind::NonpositiveInput: return "NonpositiveInput";
        case ErrorKind::DimensionUnsupported: return "DimensionUnsupported";
        case ErrorKind::BarrierOrderViolation: return "BarrierOrderViolation";
        case ErrorKind::TerminalOutsideBarriers: return "TerminalOutsideBarriers";
        case ErrorKind::HypothesisViolated: return "HypothesisViolated";
        case ErrorKind::TooLarge: return "TooLarge";
        case ErrorKind::CheckFailure: return "CheckFailure";
    }
    return "Unknown";
}

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::ConfigError:
        case ErrorKind::NotFound:
            return 2;
        case ErrorKind::CheckFailure:
            return 4;
        default:
            return 3;
    }
}

}  // namespace isaacs
