#include "mfgstop/error.hpp"

namespace mfgstop {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NonPositiveHorizon: return "NonPositiveHorizon";
        case ErrorCode::EmptyDomain: return "EmptyDomain";
        case ErrorCode::DegenerateGrid: return "DegenerateGrid";
        case ErrorCode::EllipticityViolation: return "EllipticityViolation";
        case ErrorCode::SingularSystem: return "SingularSystem";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::MissingDerivative: return "MissingDerivative";
        case ErrorCode::InvalidCoefficient: return "InvalidCoefficient";
        case ErrorCode::InvalidMeasure: return "InvalidMeasure";
        case ErrorCode::RhoOutOfRange: return "RhoOutOfRange";
        case ErrorCode::MomentOutOfRange: return "MomentOutOfRange";
        case ErrorCode::MissingAntiderivative: return "MissingAntiderivative";
        case ErrorCode::InvalidReward: return "InvalidReward";
        case ErrorCode::SupportViolation: return "SupportViolation";
        case ErrorCode::InstanceTooLarge: return "InstanceTooLarge";
        case ErrorCode::SimplexIterationLimit: return "SimplexIterationLimit";
        case ErrorCode::NonConcaveDetected: return "NonConcaveDetected";
        case ErrorCode::UnboundedLp: return "UnboundedLp";
    }
    return "Unknown";
}

}  // namespace mfgstop
