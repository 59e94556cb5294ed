#pragma once

#include <stdexcept>
#include <string>

namespace casimir {

enum class ErrorCode {
  NonPositivePeriod,
  SlitNonPositive,
  PeriodMismatch,
  GapOutOfRange,
  InvalidNumerics,
  InvalidMaterial,
  PlasmaAtZeroFrequency,
  TableOutOfRange,
  DegenerateMomentum,
  QuadratureNotConverged,
  SingularToeplitz,
  IllConditionedMatching,
  ShiftOutOfRange,
  NonPositiveDeterminant,
  DerivativeMismatch,
  ConfigParse,
  ConfigValidation,
};

const char* to_string(ErrorCode code);

/// Single exception type for the library; `code()` lets callers map
/// failures onto exit codes without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// True for failures of the input description rather than of the numerics.
  bool is_input_error() const noexcept;

 private:
  ErrorCode code_;
};

}  // namespace casimir
