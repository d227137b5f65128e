#pragma once

#include <span>

#include "gaussmax/corrmat.hpp"
#include "gaussmax/partials.hpp"

namespace gaussmax {

struct OrthantProbability {
  double value = 0.0;
  int dim = 0;
};

inline constexpr int kMaxOrthantDim = 3;

/// P{X_1 >= 0, ..., X_dim >= 0} for a zero-mean Gaussian vector with the
/// given upper-triangle correlations, listed row by row ((1,2) for dim 2;
/// (1,2), (1,3), (2,3) for dim 3). dim 0 and 1 take an empty span.
OrthantProbability orthant_prob(std::span<const double> upper, int dim);

OrthantProbability orthant_prob(const ReducedMatrix& m);
OrthantProbability orthant_prob(const CorrelationMatrix& m);

}  // namespace gaussmax
