#include "gaussmax/ar1.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "gaussmax/corrmat.hpp"
#include "gaussmax/error.hpp"

namespace gaussmax {
namespace {

using std::numbers::pi;

constexpr double kDomainMargin = 1e-6;
constexpr int kScanPoints = 101;
constexpr double kDerivativeStep = 1e-3;
constexpr double kPolishTolerance = 1e-13;

void require_ell(int ell, int lo, int hi, std::string_view what) {
  if (ell < lo || ell > hi) {
    throw Error(ErrorCode::EllOutOfRange, std::string(what) + " requires " + std::to_string(lo) +
                                              " <= ell <= " + std::to_string(hi) + ", got " +
                                              std::to_string(ell));
  }
}

double arcsec(double x) { return std::acos(1.0 / x); }

}  // namespace

std::string_view to_string(MomentTarget target) noexcept {
  return target == MomentTarget::Mean ? "mean" : "second_moment";
}

double closed_form_mean(double rho, int ell) {
  require_ell(ell, 2, 4, "closed_form_mean");
  const double r = Ar1Parameter(rho).value();
  switch (ell) {
    case 2:
      return std::sqrt((1.0 - r) / pi);
    case 3:
      return std::sqrt((1.0 - r) / pi) + std::sqrt((1.0 - r * r) / (4.0 * pi));
    default: {
      const double c = 3.0 + r + r * r - r * r * r;
      const double q = std::sqrt((3.0 - r) * c);
      const double s1 = std::sqrt((1.0 - r) / pi);
      const double s2 = std::sqrt((1.0 - r * r) / pi);
      const double s3 = std::sqrt((1.0 - r * r * r) / pi);
      return s1 / (4.0 * pi) * (pi + 2.0 * std::asin(1.0 - 2.0 / (3.0 - r))) +
             s1 / (2.0 * pi) * (pi + 2.0 * std::asin(clamp_unit((1.0 + 2.0 * r - r * r) / q))) +
             s2 / (2.0 * pi) * (pi + 2.0 * std::asin(clamp_unit((1.0 - r) * (1.0 - r) / q))) +
             s3 / (4.0 * pi) * (pi + 2.0 * std::asin(1.0 - 2.0 / c));
    }
  }
}

double closed_form_second_moment(double rho, int ell) {
  require_ell(ell, 2, 4, "closed_form_second_moment");
  const double r = Ar1Parameter(rho).value();
  switch (ell) {
    case 2:
      return 1.0;
    case 3:
      return 1.0 + (1.0 - r) * std::sqrt((3.0 - r) * (1.0 + r)) / (2.0 * pi);
    default: {
      const double c = 3.0 + r + r * r - r * r * r;
      const double q = std::sqrt((3.0 - r) * c);
      const double r2 = r * r;
      const double numer = 3.0 + q + r * (1.0 - 2.0 * r - 2.0 * r2 - r2 * r + r2 * r2 - r * q);
      return 1.0 + numer / (2.0 * pi * std::sqrt((1.0 + r) * c));
    }
  }
}

MomentResult closed_form_moments(double rho, int ell) {
  MomentResult out;
  out.ell = ell;
  out.method = MomentMethod::Ar1ClosedForm;
  out.mean = closed_form_mean(rho, ell);
  out.second_moment = closed_form_second_moment(rho, ell);
  out.variance = out.second_moment - *out.mean * *out.mean;
  return out;
}

MomentResult moments_ar1(double rho, int ell) {
  require_ell(ell, 2, kMaxSecondMomentEll, "moments_ar1");
  const auto matrix = ar1_matrix(Ar1Parameter(rho), ell);
  MomentResult out;
  out.ell = ell;
  out.method = MomentMethod::GeneralAfonja;
  out.second_moment = second_moment_max(matrix);
  if (ell <= kMaxMeanEll) {
    out.mean = mean_max(matrix);
    out.variance = out.second_moment - *out.mean * *out.mean;
  }
#ifndef NDEBUG
  if (ell <= 4 && std::abs(rho) <= 0.999) {
    const auto check = closed_form_moments(rho, ell);
    assert(std::abs(*check.mean - *out.mean) <= 1e-10);
    assert(std::abs(check.second_moment - out.second_moment) <= 1e-10);
  }
#endif
  return out;
}

std::vector<SweepRow> sweep(int ell, double rho_min, double rho_max, double step) {
  require_ell(ell, 2, kMaxSecondMomentEll, "sweep");
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw Error(ErrorCode::InvalidArgument, "sweep step must be positive");
  }
  if (!(rho_min < rho_max)) throw Error(ErrorCode::InvalidArgument, "sweep needs rho_min < rho_max");
  if (!(rho_min > -1.0) || !(rho_max < 1.0)) {
    throw Error(ErrorCode::RhoOutOfRange, "sweep grid must lie inside (-1, 1)");
  }
  // Grid points are rho_min + k*step (never accumulated), with a slack of
  // 1e-9 steps so an endpoint that is a whole number of steps away survives
  // rounding; such a point is snapped to rho_max.
  const double span = (rho_max - rho_min) / step;
  const auto last = static_cast<std::int64_t>(std::floor(span + 1e-9));
  std::vector<SweepRow> rows;
  rows.reserve(static_cast<std::size_t>(last + 1));
  for (std::int64_t k = 0; k <= last; ++k) {
    const double rho = std::min(rho_min + static_cast<double>(k) * step, rho_max);
    const auto m = moments_ar1(rho, ell);
    rows.push_back(SweepRow{rho, ell, m.mean, m.second_moment, m.variance});
  }
  return rows;
}

MaximizerResult maximize(int ell, MomentTarget target) {
  const int max_ell = target == MomentTarget::Mean ? kMaxMeanEll : kMaxSecondMomentEll;
  if (ell == 2) {
    throw Error(ErrorCode::NoInteriorMaximum, "no interior maximum for ell=2");
  }
  require_ell(ell, 3, max_ell, "maximize");

  int evaluations = 0;
  auto objective = [&](double rho) {
    ++evaluations;
    const auto m = ar1_matrix(Ar1Parameter(rho), ell);
    return target == MomentTarget::Mean ? mean_max(m) : second_moment_max(m);
  };

  const double lo = -1.0 + kDomainMargin;
  const double hi = 1.0 - kDomainMargin;

  // Coarse scan to bracket the global maximum away from the endpoints.
  const double h = (hi - lo) / (kScanPoints - 1);
  int best = 0;
  double best_value = objective(lo);
  for (int k = 1; k < kScanPoints; ++k) {
    const double v = objective(lo + k * h);
    if (v > best_value) {
      best_value = v;
      best = k;
    }
  }
  if (best == 0 || best == kScanPoints - 1) {
    throw Error(ErrorCode::NoInteriorMaximum, "no interior maximum for ell=" + std::to_string(ell));
  }

  // Golden section with parabolic steps. Working on values alone this stops
  // near sqrt(machine epsilon) in rho because the peak is flat.
  std::uintmax_t brent_iters = 200;
  const auto brent_rho =  boost::math::tools::brent_find_minima(
      [&](double rho) { return -objective(rho); }, lo + (best - 1) * h, lo + (best + 1) * h,
      std::numeric_limits<double>::digits / 2, brent_iters).first;

  // Polish: the stationary point is a simple root of the derivative, which
  // a fourth-order central difference resolves far below sqrt(epsilon).
  auto slope = [&](double rho) {
    const double d = kDerivativeStep;
    return (objective(rho - 2 * d) - 8.0 * objective(rho - d) + 8.0 * objective(rho + d) -
            objective(rho + 2 * d)) /
           (12.0 * d);
  };
  double rho_star = brent_rho;
  for (double width = 1e-6; width <= 1e-3; width *= 10.0) {
    const double a = brent_rho - width;
    const double b = brent_rho + width;
    const double fa = slope(a);
    const double fb = slope(b);
    if (fa > 0.0 && fb < 0.0) {
      std::uintmax_t root_iters = 100;
      const auto [x0, x1] = boost::math::tools::toms748_solve(
          slope, a, b, fa, fb, [](double u, double v) { return std::abs(v - u) <= kPolishTolerance; },
          root_iters);
      rho_star = 0.5 * (x0 + x1);
      break;
    }
  }

  MaximizerResult out;
  out.ell = ell;
  out.target = target;
  out.rho_star = rho_star;
  out.value = objective(rho_star);
  out.evaluations = evaluations;
  return out;
}

double independence_limit(int ell, MomentTarget target) {
  const double sqrt_pi = std::sqrt(pi);
  const double sqrt3 = std::sqrt(3.0);
  if (target == MomentTarget::Mean) {
    require_ell(ell, 2, 5, "independence_limit(mean)");
    switch (ell) {
      case 2: return 1.0 / sqrt_pi;
      case 3: return 3.0 / (2.0 * sqrt_pi);
      case 4: return 3.0 / sqrt_pi * (1.0 - arcsec(3.0) / pi);
      default: return 5.0 / sqrt_pi * (1.0 - 3.0 / (2.0 * pi) * arcsec(3.0));
    }
  }
  require_ell(ell, 3, 6, "independence_limit(second_moment)");
  switch (ell) {
    case 3: return 1.0 + sqrt3 / (2.0 * pi);
    case 4: return 1.0 + sqrt3 / pi;
    case 5: return 1.0 + 5.0 * sqrt3 / (2.0 * pi) * (1.0 - arcsec(4.0) / pi);
    default: return 1.0 + 5.0 * sqrt3 / pi * (1.0 - 3.0 / (2.0 * pi) * arcsec(4.0));
  }
}

GumbelLocation gumbel_location(std::int64_t ell) {
  if (ell < 2) {
    throw Error(ErrorCode::EllOutOfRange, "gumbel_location requires ell >= 2, got " + std::to_string(ell));
  }
  const double log_ell = std::log(static_cast<double>(ell));
  const double scale = std::sqrt(2.0 * log_ell);
  return GumbelLocation{ell, scale - (std::log(log_ell) + std::log(4.0 * pi)) / (2.0 * scale)};
}

}  // namespace gaussmax
