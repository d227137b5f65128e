#include "gaussmax/orthant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "gaussmax/error.hpp"

namespace gaussmax {

OrthantProbability orthant_prob(std::span<const double> upper, int dim) {
  using std::numbers::pi;
  if (dim < 0 || dim > kMaxOrthantDim) {
    throw Error(ErrorCode::UnsupportedDimension,
                "closed-form orthant probability only for dim <= 3, got " + std::to_string(dim));
  }
  const std::size_t expected = static_cast<std::size_t>(dim * (dim - 1) / 2);
  if (upper.size() != expected) {
    throw Error(ErrorCode::InvalidArgument, "orthant_prob: expected " + std::to_string(expected) +
                                                " correlations for dim " + std::to_string(dim));
  }
  OrthantProbability out;
  out.dim = dim;
  switch (dim) {
    case 0:
      out.value = 1.0;
      break;
    case 1:
      out.value = 0.5;
      break;
    case 2:
      out.value = 0.25 + std::asin(clamp_unit(upper[0])) / (2.0 * pi);
      break;
    default: {
      double angles = 0.0;
      for (double r : upper) angles += std::acos(clamp_unit(r));
      out.value = 0.5 - angles / (4.0 * pi);
      break;
    }
  }
  out.value = std::clamp(out.value, 0.0, 1.0);
  return out;
}

OrthantProbability orthant_prob(const ReducedMatrix& m) { return orthant_prob(m.upper(), m.dim); }

OrthantProbability orthant_prob(const CorrelationMatrix& m) {
  const int dim = static_cast<int>(m.dim());
  if (dim > kMaxOrthantDim) {
    throw Error(ErrorCode::UnsupportedDimension,
                "closed-form orthant probability only for dim <= 3, got " + std::to_string(dim));
  }
  std::vector<double> upper;
  for (std::size_t a = 0; a < m.dim(); ++a)
    for (std::size_t b = a + 1; b < m.dim(); ++b) upper.push_back(m(a, b));
  return orthant_prob(upper, dim);
}

}  // namespace gaussmax
