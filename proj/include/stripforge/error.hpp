#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stripforge {

/// Domain and guard failures raised by the numerical modules.
enum class ErrorCode {
    NonOrthonormalInitialFrame,
    NonPositiveCurvature,
    GridTooSmall,
    NonPositiveSpeed,
    MissingJets,
    MultiplierMismatch,
    LambdaHasZeros,
    LambdaNotConstant,
    ConstantCurvature,
    WidthExceedsRegression,
    DomainViolation,
    NonPositiveKappa,
    InvalidArgument,
};

std::string_view to_string(ErrorCode code);

class StripError : public std::runtime_error {
public:
    StripError(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Malformed input files (CSV rows, sidecar metadata).
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::NonOrthonormalInitialFrame: return "NonOrthonormalInitialFrame";
    case ErrorCode::NonPositiveCurvature: return "NonPositiveCurvature";
    case ErrorCode::GridTooSmall: return "GridTooSmall";
    case ErrorCode::NonPositiveSpeed: return "NonPositiveSpeed";
    case ErrorCode::MissingJets: return "MissingJets";
    case ErrorCode::MultiplierMismatch: return "MultiplierMismatch";
    case ErrorCode::LambdaHasZeros: return "LambdaHasZeros";
    case ErrorCode::LambdaNotConstant: return "LambdaNotConstant";
    case ErrorCode::ConstantCurvature: return "ConstantCurvature";
    case ErrorCode::WidthExceedsRegression: return "WidthExceedsRegression";
    case ErrorCode::DomainViolation: return "DomainViolation";
    case ErrorCode::NonPositiveKappa: return "NonPositiveKappa";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

} // namespace stripforge
