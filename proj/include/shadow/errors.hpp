#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace shadow {

enum class ErrorCode {
    PointInsideBall,
    NonPositiveCoefficient,
    DimensionMismatch,
    InvalidSampleCount,
    InvalidStartCount,
    RadiusNonPositive,
    RatioTooSmall,
    NoFeasibleTheta,
    ConstructionUnverified,
    ThresholdViolated,
    EmbeddingFailed,
    ShadowLost,
    DisjointnessLost,
    MixedBallKinds,
    SchemaError,
    DegeneratePlane,
    InvalidParameter,
};

constexpr std::string_view error_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::PointInsideBall: return "PointInsideBall";
    case ErrorCode::NonPositiveCoefficient: return "NonPositiveCoefficient";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidSampleCount: return "InvalidSampleCount";
    case ErrorCode::InvalidStartCount: return "InvalidStartCount";
    case ErrorCode::RadiusNonPositive: return "RadiusNonPositive";
    case ErrorCode::RatioTooSmall: return "RatioTooSmall";
    case ErrorCode::NoFeasibleTheta: return "NoFeasibleTheta";
    case ErrorCode::ConstructionUnverified: return "ConstructionUnverified";
    case ErrorCode::ThresholdViolated: return "ThresholdViolated";
    case ErrorCode::EmbeddingFailed: return "EmbeddingFailed";
    case ErrorCode::ShadowLost: return "ShadowLost";
    case ErrorCode::DisjointnessLost: return "DisjointnessLost";
    case ErrorCode::MixedBallKinds: return "MixedBallKinds";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::DegeneratePlane: return "DegeneratePlane";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above; the
/// message always starts with the code name so diagnostics can be grepped.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace shadow
