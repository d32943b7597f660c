#include "starcalc/error.hpp"

namespace starcalc {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicatePoint: return "DuplicatePoint";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::GroundMismatch: return "GroundMismatch";
    case ErrorCode::OverlappingGrounds: return "OverlappingGrounds";
    case ErrorCode::OverlappingConfigurations: return "OverlappingConfigurations";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NotInIdeal: return "NotInIdeal";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::DivergentSeries: return "DivergentSeries";
    case ErrorCode::IntegrationBudgetExceeded: return "IntegrationBudgetExceeded";
    case ErrorCode::ZeroMassWindow: return "ZeroMassWindow";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::NegativeDensity: return "NegativeDensity";
    case ErrorCode::GrowthViolation: return "GrowthViolation";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace starcalc
