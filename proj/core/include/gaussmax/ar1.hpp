#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "gaussmax/moments.hpp"

namespace gaussmax {

enum class MomentTarget { Mean, SecondMoment };

std::string_view to_string(MomentTarget target) noexcept;

/// Moments of the maximum of ell consecutive observations of a stationary
/// AR(1) process with lag-one correlation rho, via the general formulas.
/// ell = 6 yields the second moment only.
MomentResult moments_ar1(double rho, int ell);

/// Hand-reduced closed forms for the AR(1) case, available for ell <= 4.
/// These are independent of the general path and are used to check it.
double closed_form_mean(double rho, int ell);
double closed_form_second_moment(double rho, int ell);
MomentResult closed_form_moments(double rho, int ell);

struct SweepRow {
  double rho = 0.0;
  int ell = 0;
  std::optional<double> mean;
  double second_moment = 0.0;
  std::optional<double> variance;
};

/// Rows at rho_min + k*step for k = 0, 1, ... up to rho_max, ascending.
std::vector<SweepRow> sweep(int ell, double rho_min, double rho_max, double step);

struct MaximizerResult {
  int ell = 0;
  MomentTarget target = MomentTarget::Mean;
  double rho_star = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

/// Lag-one correlation at which E(M) or E(M^2) peaks. Mean: 3 <= ell <= 5;
/// second moment: 3 <= ell <= 6. ell = 2 raises NoInteriorMaximum (the mean
/// is monotone and the second moment constant).
MaximizerResult maximize(int ell, MomentTarget target);

/// Moments at rho = 0 (independent coordinates) from their known closed
/// forms. Mean: 2 <= ell <= 5; second moment: 3 <= ell <= 6.
double independence_limit(int ell, MomentTarget target);

struct GumbelLocation {
  std::int64_t ell = 0;
  double a_ell = 0.0;
};

/// a_ell = sqrt(2 ln ell) - (ln ln ell + ln 4 pi) / (2 sqrt(2 ln ell)), the
/// centering constant of the Gumbel limit for maxima of weakly dependent
/// stationary Gaussian sequences. The matching scale is sqrt(2 ln ell).
GumbelLocation gumbel_location(std::int64_t ell);

}  // namespace gaussmax
