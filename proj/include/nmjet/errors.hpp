#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nmjet {

enum class ErrorCode {
  NotAntisymmetric,
  JacobiViolation,
  KillingNotNegativeDefinite,
  UnknownAlgebra,
  DimensionMismatch,
  IndexOutOfRange,
  BadSmoothingParameter,
  BadOrders,
  DegreeTooHigh,
  DegreeMismatch,
  NotLinear,
  WhiteheadViolation,
  RadiusExhausted,
  NotInvertible,
  SmallnessViolated,
  FlowNotFixingOrigin,
  SeriesNotConverged,
  InfeasibleParameters,
  MonitorViolated,
  NoConvergence,
  NotMomentumMap,
  BadInput,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries a stable machine-readable code;
/// the CLI serializes it as {"error": "<code>", "message": "..."}.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        message_(message) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace nmjet
