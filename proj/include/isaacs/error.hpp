#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace isaacs {

enum class ErrorKind {
    ConfigError,
    NotFound,
    InvalidArgument,
    ObstacleOrderViolation,
    TerminalSandwichViolation,
    GrowthViolation,
    LipschitzViolation,
    DerivativeBoundViolation,
    NonFiniteState,
    CFLViolation,
    DegenerateModel,
    StabilityBlowup,
    NonpositiveTransformedValue,
    NonpositiveInput,
    DimensionUnsupported,
    BarrierOrderViolation,
    TerminalOutsideBarriers,
    HypothesisViolated,
    TooLarge,
    CheckFailure,
};

std::string_view to_string(ErrorKind kind);

/// Process exit status for an error kind: 2 config, 3 numerical, 4 check.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace isaacs
