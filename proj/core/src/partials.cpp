#include "gaussmax/partials.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gaussmax/error.hpp"

namespace gaussmax {
namespace {

constexpr double kDegenerateFactor = 1e-14;

void check_index(const CorrelationMatrix& r, int idx) {
  if (idx < 1 || static_cast<std::size_t>(idx) > r.dim()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "index " + std::to_string(idx) + " outside 1.." + std::to_string(r.dim()));
  }
}

void check_distinct(std::initializer_list<int> idx) {
  for (auto a = idx.begin(); a != idx.end(); ++a)
    for (auto b = a + 1; b != idx.end(); ++b)
      if (*a == *b) throw Error(ErrorCode::DuplicateIndex, "index " + std::to_string(*a) + " repeated");
}

// Variance of X_i - X_j divided by 2.
double half_diff_variance(const CorrelationMatrix& r, int i, int j) {
  const double v = 1.0 - r.rho(i, j);
  if (!(v > 0.0)) {
    throw Error(ErrorCode::DegenerateDifference,
                "X_" + std::to_string(i) + " - X_" + std::to_string(j) + " is almost surely zero");
  }
  return v;
}

}  // namespace

double ReducedMatrix::operator()(int row, int col) const noexcept {
  if (row == col) return 1.0;
  const int a = std::min(row, col);
  const int b = std::max(row, col);
  return off_diagonal[static_cast<std::size_t>(a + b - 1)];
}

CorrelationMatrix ReducedMatrix::to_correlation_matrix() const {
  const auto n = static_cast<std::size_t>(dim);
  std::vector<double> e(n * n);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) e[static_cast<std::size_t>(a) * n + static_cast<std::size_t>(b)] = (*this)(a, b);
  return CorrelationMatrix(n, std::move(e));
}

double diff_correlation(const CorrelationMatrix& r, int i, int j, int k) {
  check_index(r, i);
  check_index(r, j);
  check_index(r, k);
  if (j != i && k != i) {
    const double vij = half_diff_variance(r, i, j);
    const double vik = half_diff_variance(r, i, k);
    // Grouped so that swapping j and k is exact in floating point.
    return (1.0 - (r.rho(i, j) + r.rho(i, k)) + r.rho(j, k)) / std::sqrt(4.0 * (vij * vik));
  }
  if (j != i) return std::sqrt(half_diff_variance(r, i, j) / 2.0);
  if (k != i) return std::sqrt(half_diff_variance(r, i, k) / 2.0);
  return 1.0;
}

std::vector<int> complement_indices(int ell, std::span<const int> fixed) {
  std::vector<bool> taken(static_cast<std::size_t>(std::max(ell, 0)) + 1, false);
  for (int f : fixed) {
    if (f < 1 || f > ell) {
      throw Error(ErrorCode::IndexOutOfRange,
                  "index " + std::to_string(f) + " outside 1.." + std::to_string(ell));
    }
    if (taken[static_cast<std::size_t>(f)]) {
      throw Error(ErrorCode::DuplicateIndex, "index " + std::to_string(f) + " repeated");
    }
    taken[static_cast<std::size_t>(f)] = true;
  }
  std::vector<int> out;
  for (int v = 1; v <= ell; ++v)
    if (!taken[static_cast<std::size_t>(v)]) out.push_back(v);
  return out;
}

PartialCorrelation partial_corr_one(const CorrelationMatrix& r, int i, int j, int m, int n) {
  check_distinct({i, j, m, n});
  const double r_mn = diff_correlation(r, i, m, n);
  const double r_jm = diff_correlation(r, i, j, m);
  const double r_jn = diff_correlation(r, i, j, n);

  // Cofactors P11 and P22 of the 3x3 matrix over (X_i-X_m, X_i-X_n, X_i-X_j).
  const double p11 = 1.0 - r_jn * r_jn;
  const double p22 = 1.0 - r_jm * r_jm;
  if (p11 < kDegenerateFactor || p22 < kDegenerateFactor) {
    throw Error(ErrorCode::DegenerateConditioning,
                "conditioning difference X_" + std::to_string(i) + " - X_" + std::to_string(j) +
                    " is perfectly correlated with a target difference");
  }
  PartialCorrelation out;
  out.value = clamp_unit((r_mn - r_jm * r_jn) / std::sqrt(p22 * p11));
  out.pivot = i;
  out.pair = {m, n};
  out.given.indices = {j, 0};
  out.given.size = 1;
  return out;
}

PartialCorrelation partial_corr_two(const CorrelationMatrix& r, int i, int j, int k, int m, int n) {
  check_distinct({i, j, k, m, n});
  const double r_mn = diff_correlation(r, i, m, n);
  const double r_jm = diff_correlation(r, i, j, m);
  const double r_jn = diff_correlation(r, i, j, n);
  const double r_km = diff_correlation(r, i, k, m);
  const double r_kn = diff_correlation(r, i, k, n);
  const double r_jk = diff_correlation(r, i, j, k);

  // Cofactors of the 4x4 matrix over (X_i-X_m, X_i-X_n, X_i-X_j, X_i-X_k).
  const double numer = r_mn - (r_jm * r_jn + r_km * r_kn) + (r_km * r_jn + r_jm * r_kn) * r_jk -
                       r_mn * r_jk * r_jk;
  const double q22 = 1.0 - (r_jm * r_jm + r_km * r_km) + 2.0 * (r_jm * r_km) * r_jk - r_jk * r_jk;
  const double q11 = 1.0 - (r_jn * r_jn + r_kn * r_kn) + 2.0 * (r_jn * r_kn) * r_jk - r_jk * r_jk;
  if (q11 < kDegenerateFactor || q22 < kDegenerateFactor) {
    throw Error(ErrorCode::DegenerateConditioning,
                "conditioning differences on X_" + std::to_string(j) + ", X_" + std::to_string(k) +
                    " are degenerate for pivot " + std::to_string(i));
  }
  PartialCorrelation out;
  out.value = clamp_unit(numer / std::sqrt(q22 * q11));
  out.pivot = i;
  out.pair = {m, n};
  out.given.indices = {j, k};
  out.given.size = 2;
  return out;
}

namespace {

template <typename PartialFn>
ReducedMatrix assemble(const std::vector<int>& rest, PartialFn&& partial) {
  ReducedMatrix out;
  out.dim = static_cast<int>(rest.size());
  if (out.dim == 2) {
    out.off_diagonal[0] = partial(rest[0], rest[1]);
  } else {
    out.off_diagonal[0] = partial(rest[0], rest[1]);
    out.off_diagonal[1] = partial(rest[0], rest[2]);
    out.off_diagonal[2] = partial(rest[1], rest[2]);
  }
  return out;
}

}  // namespace

ReducedMatrix reduced_matrix_one(const CorrelationMatrix& r, int i, int j) {
  const int ell = static_cast<int>(r.dim());
  if (ell < 4 || ell > 5) {
    throw Error(ErrorCode::UnsupportedDimension,
                "R_{i,j} is implemented for ell = 4, 5; got " + std::to_string(ell));
  }
  const int fixed[] = {i, j};
  const auto rest = complement_indices(ell, fixed);
  return assemble(rest, [&](int m, int n) { return partial_corr_one(r, i, j, m, n).value; });
}

ReducedMatrix reduced_matrix_two(const CorrelationMatrix& r, int i, int j, int k) {
  const int ell = static_cast<int>(r.dim());
  if (ell < 5 || ell > 6) {
    throw Error(ErrorCode::UnsupportedDimension,
                "R_{i,jk} is implemented for ell = 5, 6; got " + std::to_string(ell));
  }
  const int fixed[] = {i, j, k};
  const auto rest = complement_indices(ell, fixed);
  return assemble(rest, [&](int m, int n) { return partial_corr_two(r, i, j, k, m, n).value; });
}

}  // namespace gaussmax
