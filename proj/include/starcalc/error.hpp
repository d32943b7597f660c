#pragma once

#include <stdexcept>
#include <string>

namespace starcalc {

enum class ErrorCode {
  InvalidArgument,
  ParseError,
  DuplicatePoint,
  TooLarge,
  GroundMismatch,
  OverlappingGrounds,
  OverlappingConfigurations,
  IndexOutOfRange,
  NotInIdeal,
  NotNormalized,
  DivergentSeries,
  IntegrationBudgetExceeded,
  ZeroMassWindow,
  QuadratureFailure,
  NegativeDensity,
  GrowthViolation,
  HypothesisViolated,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace starcalc
