#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fspec {

enum class ErrorCode {
  // parameter / input validation
  LengthMismatch,
  ScaleSumMismatch,
  NonPositiveScale,
  ContractionViolation,
  NoSpectralOrder,
  FixedPointSingular,
  BudgetExceeded,
  CoefficientInvariantViolation,
  NonDegenerateParity,
  ForcingOnNegativeAxis,
  UnstableStep,
  EnvelopeTooWide,
  WindowTooNarrow,
  InvalidArgument,
  // numerical failures
  SeriesDivergence,
  RayExhausted,
  NotConverged,
  // I/O
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Category used by the CLI to pick an exit status.
enum class ErrorKind { Validation, Numerical, Io };

ErrorKind kind_of(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fspec
