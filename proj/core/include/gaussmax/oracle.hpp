#pragma once

// Independent verification tools: Monte Carlo sampling of Gaussian maxima and
// orthant events, and two evaluations (closed form and quadrature) of the
// quadrant integrals behind E|max(X1,X2) - max(X2,X3)|. Nothing here calls into
// the partial-correlation or moment code.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "gaussmax/corrmat.hpp"

namespace gaussmax::oracle {

/// Dense lower-triangular factor, row-major.
struct LowerTriangular {
  std::size_t dim = 0;
  std::vector<double> entries;

  [[nodiscard]] double operator()(std::size_t row, std::size_t col) const noexcept {
    return entries[row * dim + col];
  }
};

/// L with L L^T = R. Pivots below 1e-10 (relative to the largest diagonal)
/// raise NotPositiveDefinite.
LowerTriangular cholesky(const CorrelationMatrix& r);

/// Pins the random stream so estimates are reproducible on any platform:
/// std::mt19937_64 (output fixed by the C++ standard) seeded per chunk with
/// SplitMix64(seed, chunk), uniforms ((x >> 11) + 0.5) * 2^-53, normals by
/// the inverse normal CDF.
inline constexpr std::string_view kRandomStreamId = "mt19937_64/splitmix64-chunk/inverse-cdf v1";
inline constexpr std::size_t kChunkSize = 1u << 16;

std::uint64_t chunk_seed(std::uint64_t seed, std::uint64_t chunk) noexcept;

class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}
  double next();

 private:
  std::mt19937_64 engine_;
};

/// Draws N(0, R) vectors as L z.
class CorrelatedSampler {
 public:
  CorrelatedSampler(const CorrelationMatrix& r, std::uint64_t seed);
  void next(std::span<double> out);
  [[nodiscard]] std::size_t dim() const noexcept { return factor_.dim; }

 private:
  LowerTriangular factor_;
  NormalStream normals_;
  std::vector<double> z_;
};

struct McEstimate {
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double mean = 0.0;
  double second_moment = 0.0;
  double variance = 0.0;
  double se_mean = 0.0;
  double se_second = 0.0;
  double se_variance = 0.0;
};

inline constexpr std::size_t kMinSamples = 10'000;

/// Sample moments of M = max_i X_i. The sample is split into kChunkSize
/// chunks, each with its own derived seed, and chunk sums are merged in chunk
/// order, so the result does not depend on `threads` (0 = hardware).
McEstimate sample_max_moments(const CorrelationMatrix& r, std::size_t samples, std::uint64_t seed,
                              unsigned threads = 0);

/// Fraction of samples with every coordinate >= 0.
double mc_orthant(const CorrelationMatrix& r, std::size_t samples, std::uint64_t seed,
                  unsigned threads = 0);

double binomial_standard_error(double p, std::size_t samples) noexcept;

/// Maxima of `paths` independent stretches X_1..X_ell of the stationary AR(1)
/// recursion X_t = rho X_{t-1} + sqrt(1 - rho^2) e_t with X_1 ~ N(0, 1).
std::vector<double> simulate_ar1_maxima(double rho, std::int64_t ell, std::size_t paths,
                                        std::uint64_t seed, unsigned threads = 0);

enum class Quadrant { PP, NP, PN, NN };  // signs of (Y, Z)

struct QuadrantSpec {
  double sigma_y = 1.0;
  double sigma_z = 1.0;
  double xi = 0.0;
  Quadrant quadrant = Quadrant::PP;
};

/// Covariance of (Y, Z) = (X1 - X2, X3 - X2) for unit-variance X.
struct DifferenceCovariance {
  double sigma_y = 0.0;
  double sigma_z = 0.0;
  double xi = 0.0;
};

DifferenceCovariance difference_covariance(double rho12, double rho13, double rho23);

/// Integral over one quadrant of |(y + |y|) - (z + |z|)| f(y, z), with f the
/// bivariate normal density of (Y, Z). Closed form.
double quadrant_integral(const QuadrantSpec& spec);

/// The same integral by adaptive Gauss-Kronrod quadrature on the quadrant
/// truncated at 10 standard deviations. Throws QuadratureFailure when the
/// error estimate exceeds 1e-8.
double quadrant_integral_numeric(const QuadrantSpec& spec);

/// max(x1, x2) = (x1 + x2)/2 + |x1 - x2|/2.
double max_pair_decomposition(double x1, double x2) noexcept;

/// max(x1, x2, x3) written through pairwise sums and absolute differences.
double max_triple_decomposition(double x1, double x2, double x3) noexcept;

}  // namespace gaussmax::oracle
