#include "gaussmax/moments.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "gaussmax/error.hpp"
#include "gaussmax/orthant.hpp"
#include "gaussmax/partials.hpp"

namespace gaussmax {
namespace {

using std::numbers::pi;

void require_nondegenerate(const CorrelationMatrix& r) {
  const int ell = static_cast<int>(r.dim());
  for (int i = 1; i <= ell; ++i) {
    for (int j = i + 1; j <= ell; ++j) {
      if (!(r.rho(i, j) < 1.0)) {
        throw Error(ErrorCode::DegenerateCorrelation,
                    "rho_" + std::to_string(i) + std::to_string(j) +
                        " = 1: coincident coordinates are not supported");
      }
    }
  }
}

// Phi_{ell-2}(R_{i,j}).
double conditional_orthant_one(const CorrelationMatrix& r, int i, int j) {
  const int ell = static_cast<int>(r.dim());
  if (ell <= 3) return orthant_prob({}, ell - 2).value;
  return orthant_prob(reduced_matrix_one(r, i, j)).value;
}

// Phi_{ell-3}(R_{i,jk}).
double conditional_orthant_two(const CorrelationMatrix& r, int i, int j, int k) {
  const int ell = static_cast<int>(r.dim());
  if (ell <= 4) return orthant_prob({}, ell - 3).value;
  return orthant_prob(reduced_matrix_two(r, i, j, k)).value;
}

}  // namespace

std::string_view to_string(MomentMethod method) noexcept {
  switch (method) {
    case MomentMethod::GeneralAfonja: return "general_afonja";
    case MomentMethod::Ar1ClosedForm: return "ar1_closed_form";
    case MomentMethod::MonteCarlo: return "monte_carlo";
  }
  return "unknown";
}

double h(double x, double y, double z) {
  const double t = 1.0 - x - y + z;
  const double radicand = 4.0 * (1.0 - x) * (1.0 - y) - t * t;
  if (!(radicand > 0.0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "h(" << x << ", " << y << ", " << z << "): radicand " << radicand << " is not positive";
    throw Error(ErrorCode::NonpositiveRadicand, msg.str());
  }
  return (1.0 - x) / (4.0 * pi) * (1.0 + x - y - z) / std::sqrt(radicand);
}

double mean_max(const CorrelationMatrix& r, TermCount* count) {
  const int ell = static_cast<int>(r.dim());
  if (ell > kMaxMeanEll) {
    throw Error(ErrorCode::UnsupportedDimension,
                "E(M) has no elementary closed form for ell = " + std::to_string(ell) +
                    " (needs orthant probabilities of dimension >= 4); supported: ell <= 5");
  }
  require_nondegenerate(r);
  std::size_t terms = 0;
  double sum = 0.0;
  for (int i = 1; i <= ell; ++i) {
    for (int j = 1; j <= ell; ++j) {
      if (j == i) continue;
      sum += std::sqrt((1.0 - r.rho(i, j)) / (4.0 * pi)) * conditional_orthant_one(r, i, j);
      ++terms;
    }
  }
  if (count) count->summands = terms;
  return sum;
}

double second_moment_max(const CorrelationMatrix& r, TermCount* count) {
  const int ell = static_cast<int>(r.dim());
  if (ell > kMaxSecondMomentEll) {
    throw Error(ErrorCode::UnsupportedDimension,
                "E(M^2) is implemented for ell <= 6, got " + std::to_string(ell));
  }
  require_nondegenerate(r);
  std::size_t terms = 0;
  double sum = 0.0;
  for (int i = 1; i <= ell; ++i) {
    for (int j = 1; j <= ell; ++j) {
      if (j == i) continue;
      for (int k = 1; k <= ell; ++k) {
        if (k == i || k == j) continue;
        sum += h(r.rho(i, j), r.rho(i, k), r.rho(j, k)) * conditional_orthant_two(r, i, j, k);
        ++terms;
      }
    }
  }
  if (count) count->summands = terms;
  return 1.0 + sum;
}

MomentResult variance_max(const CorrelationMatrix& r) {
  MomentResult out;
  out.ell = static_cast<int>(r.dim());
  out.method = MomentMethod::GeneralAfonja;
  out.mean = mean_max(r);
  out.second_moment = second_moment_max(r);
  out.variance = out.second_moment - *out.mean * *out.mean;
  return out;
}

double revision_identity_lhs(const CorrelationMatrix& r, int i, int j, int k) {
  if (i == j || i == k || j == k) {
    throw Error(ErrorCode::DuplicateIndex, "revision identity needs distinct i, j, k");
  }
  const double r_ji = diff_correlation(r, i, j, i);
  const double r_ki = diff_correlation(r, i, k, i);
  const double r_jk = diff_correlation(r, i, j, k);
  const double denom = 1.0 - r_jk * r_jk;
  if (!(denom > 0.0)) {
    throw Error(ErrorCode::DegenerateCorrelation,
                "X_i - X_j and X_i - X_k are perfectly correlated");
  }
  return r_ji * (r_ki - r_jk * r_ji) / (2.0 * pi * std::sqrt(denom));
}

}  // namespace gaussmax
