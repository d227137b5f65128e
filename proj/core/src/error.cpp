#include "gaussmax/error.hpp"

#include <cmath>
#include <sstream>

namespace gaussmax {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonUnitDiagonal: return "NonUnitDiagonal";
    case ErrorCode::Asymmetric: return "Asymmetric";
    case ErrorCode::NotPositiveSemidefinite: return "NotPositiveSemidefinite";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::OutOfRangeEntry: return "OutOfRangeEntry";
    case ErrorCode::EllOutOfRange: return "EllOutOfRange";
    case ErrorCode::RhoOutOfRange: return "RhoOutOfRange";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DuplicateIndex: return "DuplicateIndex";
    case ErrorCode::DegenerateDifference: return "DegenerateDifference";
    case ErrorCode::DegenerateConditioning: return "DegenerateConditioning";
    case ErrorCode::DegenerateCorrelation: return "DegenerateCorrelation";
    case ErrorCode::NonpositiveRadicand: return "NonpositiveRadicand";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::NoInteriorMaximum: return "NoInteriorMaximum";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
  }
  return "Unknown";
}

double clamp_unit(double value, double tolerance) {
  if (std::isnan(value)) {
    throw Error(ErrorCode::InvalidArgument, "correlation value is NaN");
  }
  if (value > 1.0) {
    if (value - 1.0 <= tolerance) return 1.0;
  } else if (value < -1.0) {
    if (-1.0 - value <= tolerance) return -1.0;
  } else {
    return value;
  }
  std::ostringstream msg;
  msg.precision(17);
  msg << "correlation value " << value << " lies outside [-1, 1]";
  throw Error(ErrorCode::InvalidArgument, msg.str());
}

}  // namespace gaussmax
