#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gaussmax {

enum class ErrorCode {
  InvalidArgument,
  NonUnitDiagonal,
  Asymmetric,
  NotPositiveSemidefinite,
  NotPositiveDefinite,
  OutOfRangeEntry,
  EllOutOfRange,
  RhoOutOfRange,
  IndexOutOfRange,
  DuplicateIndex,
  DegenerateDifference,
  DegenerateConditioning,
  DegenerateCorrelation,
  NonpositiveRadicand,
  UnsupportedDimension,
  NoInteriorMaximum,
  InvalidSpec,
  QuadratureFailure,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Pulls a correlation-like value back into [-1, 1] when it overshoots by at
/// most `tolerance`; anything further out is an error.
double clamp_unit(double value, double tolerance = 1e-12);

}  // namespace gaussmax
