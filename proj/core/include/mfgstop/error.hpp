#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mfgstop {

enum class ErrorCode {
    NonPositiveHorizon,
    EmptyDomain,
    DegenerateGrid,
    EllipticityViolation,
    SingularSystem,
    ShapeMismatch,
    MissingDerivative,
    InvalidCoefficient,
    InvalidMeasure,
    RhoOutOfRange,
    MomentOutOfRange,
    MissingAntiderivative,
    InvalidReward,
    SupportViolation,
    InstanceTooLarge,
    SimplexIterationLimit,
    NonConcaveDetected,
    UnboundedLp,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying a machine-readable error code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace mfgstop
