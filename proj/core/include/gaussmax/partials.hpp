#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "gaussmax/corrmat.hpp"

namespace gaussmax {

// All indices in this header are one-based, as in the formulas they implement.

/// Conditioning set of a partial correlation: empty, one index or two.
struct Conditioning {
  std::array<int, 2> indices{};
  int size = 0;
};

/// Correlation between X_pivot - X_a and X_pivot - X_b after removing the
/// linear influence of X_pivot - X_c for every c in `given`.
struct PartialCorrelation {
  double value = 0.0;
  int pivot = 0;
  std::array<int, 2> pair{};
  Conditioning given;
};

/// The small correlation matrix R_{i,j} (one conditioning difference) or
/// R_{i,jk} (two) whose positive-orthant probability enters the moment sums.
/// Off-diagonals are kept in (0,1), (0,2), (1,2) order; a 2x2 matrix uses only
/// the first.
struct ReducedMatrix {
  int dim = 0;
  std::array<double, 3> off_diagonal{};

  [[nodiscard]] double operator()(int row, int col) const noexcept;
  [[nodiscard]] std::span<const double> upper() const noexcept {
    return {off_diagonal.data(), dim == 3 ? std::size_t{3} : std::size_t{1}};
  }
  [[nodiscard]] CorrelationMatrix to_correlation_matrix() const;
};

/// Correlation between X_i - X_j and X_i - X_k, with the degenerate cases
/// j = i and/or k = i treating X_i - X_i as X_i itself.
/// Throws DegenerateDifference when a difference has zero variance (rho = 1).
double diff_correlation(const CorrelationMatrix& r, int i, int j, int k);

/// Sorted complement of `fixed` in {1..ell}.
std::vector<int> complement_indices(int ell, std::span<const int> fixed);

/// r_{i,mn.j}: partial correlation of X_i - X_m and X_i - X_n given X_i - X_j.
PartialCorrelation partial_corr_one(const CorrelationMatrix& r, int i, int j, int m, int n);

/// r_{i,mn.jk}: partial correlation of X_i - X_m and X_i - X_n given
/// X_i - X_j and X_i - X_k.
PartialCorrelation partial_corr_two(const CorrelationMatrix& r, int i, int j, int k, int m, int n);

/// R_{i,j} for ell = 4 (2x2) or ell = 5 (3x3).
ReducedMatrix reduced_matrix_one(const CorrelationMatrix& r, int i, int j);

/// R_{i,jk} for ell = 5 (2x2) or ell = 6 (3x3).
ReducedMatrix reduced_matrix_two(const CorrelationMatrix& r, int i, int j, int k);

}  // namespace gaussmax
