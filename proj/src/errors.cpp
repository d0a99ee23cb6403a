#include "nmjet/errors.hpp"

namespace nmjet {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotAntisymmetric: return "NotAntisymmetric";
    case ErrorCode::JacobiViolation: return "JacobiViolation";
    case ErrorCode::KillingNotNegativeDefinite: return "KillingNotNegativeDefinite";
    case ErrorCode::UnknownAlgebra: return "UnknownAlgebra";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::BadSmoothingParameter: return "BadSmoothingParameter";
    case ErrorCode::BadOrders: return "BadOrders";
    case ErrorCode::DegreeTooHigh: return "DegreeTooHigh";
    case ErrorCode::DegreeMismatch: return "DegreeMismatch";
    case ErrorCode::NotLinear: return "NotLinear";
    case ErrorCode::WhiteheadViolation: return "WhiteheadViolation";
    case ErrorCode::RadiusExhausted: return "RadiusExhausted";
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::SmallnessViolated: return "SmallnessViolated";
    case ErrorCode::FlowNotFixingOrigin: return "FlowNotFixingOrigin";
    case ErrorCode::SeriesNotConverged: return "SeriesNotConverged";
    case ErrorCode::InfeasibleParameters: return "InfeasibleParameters";
    case ErrorCode::MonitorViolated: return "MonitorViolated";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotMomentumMap: return "NotMomentumMap";
    case ErrorCode::BadInput: return "BadInput";
  }
  return "Unknown";
}

}  // namespace nmjet
