#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "gaussmax/corrmat.hpp"

namespace gaussmax {

enum class MomentMethod { GeneralAfonja, Ar1ClosedForm, MonteCarlo };

std::string_view to_string(MomentMethod method) noexcept;

/// First two moments of M = max(X_1, ..., X_ell). The mean (and therefore
/// the variance) is absent when ell = 6, where only E(M^2) has a closed form.
struct MomentResult {
  int ell = 0;
  std::optional<double> mean;
  double second_moment = 0.0;
  std::optional<double> variance;
  MomentMethod method = MomentMethod::GeneralAfonja;
};

inline constexpr int kMaxMeanEll = 5;
inline constexpr int kMaxSecondMomentEll = 6;

/// Number of summands actually evaluated by the last call it was passed to.
struct TermCount {
  std::size_t summands = 0;
};

/// Kernel of the E(M^2) triple sum,
///   (1-x)/(4 pi) * (1+x-y-z) / sqrt(4(1-x)(1-y) - (1-x-y+z)^2),
/// symmetric in y and z. Throws NonpositiveRadicand on degenerate triples.
double h(double x, double y, double z);

/// E(M) as the ordered-pair sum over i != j of
/// sqrt((1-rho_ij)/(4 pi)) * Phi_{ell-2}(R_{i,j}); 2 <= ell <= 5.
double mean_max(const CorrelationMatrix& r, TermCount* count = nullptr);

/// E(M^2) = 1 + sum over ordered (i, j, k) distinct of
/// h(rho_ij, rho_ik, rho_jk) * Phi_{ell-3}(R_{i,jk}); 2 <= ell <= 6.
double second_moment_max(const CorrelationMatrix& r, TermCount* count = nullptr);

/// Both moments and V(M) = E(M^2) - E(M)^2; 2 <= ell <= 5.
MomentResult variance_max(const CorrelationMatrix& r);

/// Original form of the second-moment summand, written through the
/// difference correlations r_{i,ji}, r_{i,ki}, r_{i,jk}. Equal to
/// h(rho_ij, rho_ik, rho_jk) for any admissible matrix.
double revision_identity_lhs(const CorrelationMatrix& r, int i, int j, int k);

}  // namespace gaussmax
