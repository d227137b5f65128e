#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace gaussmax {

/// Symmetric, unit-diagonal, positive semidefinite matrix of correlations
/// rho_ij between standardized Gaussian coordinates.
///
/// Instances are only produced by validation, so every CorrelationMatrix in
/// the program satisfies the invariants. Storage is dense row-major.
class CorrelationMatrix {
 public:
  static constexpr double kSymmetryTolerance = 1e-12;
  static constexpr double kPivotTolerance = 1e-10;

  /// Validates `entries` (row-major, dim*dim values) and symmetrizes them.
  /// Throws Error with NonUnitDiagonal, Asymmetric, OutOfRangeEntry,
  /// NotPositiveSemidefinite or InvalidArgument.
  CorrelationMatrix(std::size_t dim, std::vector<double> entries);

  /// Nested-row convenience, mostly for tests and literals.
  explicit CorrelationMatrix(const std::vector<std::vector<double>>& rows);

  static CorrelationMatrix identity(std::size_t dim);

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }

  /// Zero-based element access.
  [[nodiscard]] double operator()(std::size_t row, std::size_t col) const noexcept {
    return entries_[row * dim_ + col];
  }

  /// One-based rho_ij, matching the index convention used by the formulas.
  [[nodiscard]] double rho(int i, int j) const noexcept {
    return entries_[static_cast<std::size_t>(i - 1) * dim_ + static_cast<std::size_t>(j - 1)];
  }

  [[nodiscard]] std::span<const double> entries() const noexcept { return entries_; }

  /// Leading k x k block.
  [[nodiscard]] CorrelationMatrix leading_block(std::size_t k) const;

  /// Simultaneous row/column permutation: result(a, b) = (*this)(perm[a], perm[b]).
  [[nodiscard]] CorrelationMatrix permuted(std::span<const std::size_t> perm) const;

  friend bool operator==(const CorrelationMatrix&, const CorrelationMatrix&) = default;

 private:
  std::size_t dim_;
  std::vector<double> entries_;
};

/// Lag-one serial correlation of a stationary AR(1) process, strictly inside (-1, 1).
class Ar1Parameter {
 public:
  /// Throws Error(RhoOutOfRange) unless |rho| < 1.
  explicit Ar1Parameter(double rho);

  [[nodiscard]] double value() const noexcept { return rho_; }

 private:
  double rho_;
};

inline constexpr int kMaxAr1Ell = 6;

/// rho_ij = rho^|j-i| for 2 <= ell <= 6.
CorrelationMatrix ar1_matrix(Ar1Parameter rho, int ell);

/// Reads the text matrix format: first non-comment line is ell, followed by
/// ell rows of ell whitespace-separated numbers. Lines starting with '#' are
/// ignored. Throws Error(InvalidArgument) on malformed input.
CorrelationMatrix read_correlation_matrix(std::istream& in);

std::ostream& operator<<(std::ostream& os, const CorrelationMatrix& m);

}  // namespace gaussmax
