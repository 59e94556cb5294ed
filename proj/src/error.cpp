#include "casimir/error.hpp"

namespace casimir {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositivePeriod: return "NonPositivePeriod";
    case ErrorCode::SlitNonPositive: return "SlitNonPositive";
    case ErrorCode::PeriodMismatch: return "PeriodMismatch";
    case ErrorCode::GapOutOfRange: return "GapOutOfRange";
    case ErrorCode::InvalidNumerics: return "InvalidNumerics";
    case ErrorCode::InvalidMaterial: return "InvalidMaterial";
    case ErrorCode::PlasmaAtZeroFrequency: return "PlasmaAtZeroFrequency";
    case ErrorCode::TableOutOfRange: return "TableOutOfRange";
    case ErrorCode::DegenerateMomentum: return "DegenerateMomentum";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::SingularToeplitz: return "SingularToeplitz";
    case ErrorCode::IllConditionedMatching: return "IllConditionedMatching";
    case ErrorCode::ShiftOutOfRange: return "ShiftOutOfRange";
    case ErrorCode::NonPositiveDeterminant: return "NonPositiveDeterminant";
    case ErrorCode::DerivativeMismatch: return "DerivativeMismatch";
    case ErrorCode::ConfigParse: return "ConfigParse";
    case ErrorCode::ConfigValidation: return "ConfigValidation";
  }
  return "Unknown";
}

bool Error::is_input_error() const noexcept {
  switch (code_) {
    case ErrorCode::NonPositivePeriod:
    case ErrorCode::SlitNonPositive:
    case ErrorCode::PeriodMismatch:
    case ErrorCode::GapOutOfRange:
    case ErrorCode::InvalidNumerics:
    case ErrorCode::InvalidMaterial:
    case ErrorCode::ShiftOutOfRange:
    case ErrorCode::ConfigParse:
    case ErrorCode::ConfigValidation:
      return true;
    default:
      return false;
  }
}

}  // namespace casimir
