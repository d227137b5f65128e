#include "gaussmax/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <thread>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>

#include "gaussmax/error.hpp"

namespace gaussmax::oracle {
namespace {

using std::numbers::pi;

constexpr double kPivotTolerance = 1e-10;

template <typename Fn>
void run_chunks(std::size_t chunks, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, chunks));
  if (threads <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) fn(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next++; c < chunks; c = next++) fn(c);
  };
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
}

std::size_t chunk_count(std::size_t samples) { return (samples + kChunkSize - 1) / kChunkSize; }

std::size_t chunk_length(std::size_t samples, std::size_t chunk) {
  return std::min(kChunkSize, samples - chunk * kChunkSize);
}

void require_samples(std::size_t samples) {
  if (samples < kMinSamples) {
    throw Error(ErrorCode::InvalidArgument,
                "Monte Carlo needs at least " + std::to_string(kMinSamples) + " samples, got " +
                    std::to_string(samples));
  }
}

}  // namespace

LowerTriangular cholesky(const CorrelationMatrix& r) {
  const std::size_t n = r.dim();
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, r(i, i));
  const double tol = kPivotTolerance * max_diag;

  LowerTriangular l{n, std::vector<double>(n * n, 0.0)};
  for (std::size_t j = 0; j < n; ++j) {
    double pivot = r(j, j);
    for (std::size_t k = 0; k < j; ++k) pivot -= l.entries[j * n + k] * l.entries[j * n + k];
    if (!(pivot > tol)) {
      throw Error(ErrorCode::NotPositiveDefinite,
                  "Cholesky pivot " + std::to_string(j + 1) + " is not above tolerance");
    }
    const double diag = std::sqrt(pivot);
    l.entries[j * n + j] = diag;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = r(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l.entries[i * n + k] * l.entries[j * n + k];
      l.entries[i * n + j] = s / diag;
    }
  }
  return l;
}

std::uint64_t chunk_seed(std::uint64_t seed, std::uint64_t chunk) noexcept {
  // SplitMix64 finalizer applied to the chunk's position in the seed's stream.
  std::uint64_t z = seed + (chunk + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double NormalStream::next() {
  const double u = (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
}

CorrelatedSampler::CorrelatedSampler(const CorrelationMatrix& r, std::uint64_t seed)
    : factor_(cholesky(r)), normals_(seed), z_(r.dim()) {}

void CorrelatedSampler::next(std::span<double> out) {
  const std::size_t n = factor_.dim;
  for (auto& v : z_) v = normals_.next();
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k <= i; ++k) s += factor_.entries[i * n + k] * z_[k];
    out[i] = s;
  }
}

McEstimate sample_max_moments(const CorrelationMatrix& r, std::size_t samples, std::uint64_t seed,
                              unsigned threads) {
  require_samples(samples);
  (void)cholesky(r);  // surface factorization errors before spawning work

  struct Sums {
    double p1 = 0, p2 = 0, p3 = 0, p4 = 0;
  };
  const std::size_t chunks = chunk_count(samples);
  std::vector<Sums> partial(chunks);
  run_chunks(chunks, threads, [&](std::size_t c) {
    CorrelatedSampler sampler(r, chunk_seed(seed, c));
    std::vector<double> x(r.dim());
    Sums s;
    for (std::size_t t = 0, len = chunk_length(samples, c); t < len; ++t) {
      sampler.next(x);
      const double m = *std::max_element(x.begin(), x.end());
      const double m2 = m * m;
      s.p1 += m;
      s.p2 += m2;
      s.p3 += m2 * m;
      s.p4 += m2 * m2;
    }
    partial[c] = s;
  });

  Sums total;
  for (const auto& s : partial) {
    total.p1 += s.p1;
    total.p2 += s.p2;
    total.p3 += s.p3;
    total.p4 += s.p4;
  }
  const auto n = static_cast<double>(samples);
  const double e1 = total.p1 / n;
  const double e2 = total.p2 / n;
  const double e3 = total.p3 / n;
  const double e4 = total.p4 / n;
  const double bessel = n / (n - 1.0);

  McEstimate out;
  out.samples = samples;
  out.seed = seed;
  out.mean = e1;
  out.second_moment = e2;
  out.variance = e2 - e1 * e1;
  out.se_mean = std::sqrt(bessel * out.variance / n);
  out.se_second = std::sqrt(bessel * (e4 - e2 * e2) / n);
  const double central4 = e4 - 4.0 * e1 * e3 + 6.0 * e1 * e1 * e2 - 3.0 * e1 * e1 * e1 * e1;
  out.se_variance = std::sqrt(std::max(central4 - out.variance * out.variance, 0.0) / n);
  return out;
}

double mc_orthant(const CorrelationMatrix& r, std::size_t samples, std::uint64_t seed,
                  unsigned threads) {
  require_samples(samples);
  (void)cholesky(r);
  const std::size_t chunks = chunk_count(samples);
  std::vector<std::size_t> hits(chunks, 0);
  run_chunks(chunks, threads, [&](std::size_t c) {
    CorrelatedSampler sampler(r, chunk_seed(seed, c));
    std::vector<double> x(r.dim());
    std::size_t count = 0;
    for (std::size_t t = 0, len = chunk_length(samples, c); t < len; ++t) {
      sampler.next(x);
      if (std::all_of(x.begin(), x.end(), [](double v) { return v >= 0.0; })) ++count;
    }
    hits[c] = count;
  });
  std::size_t total = 0;
  for (auto h : hits) total += h;
  return static_cast<double>(total) / static_cast<double>(samples);
}

double binomial_standard_error(double p, std::size_t samples) noexcept {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
}

std::vector<double> simulate_ar1_maxima(double rho, std::int64_t ell, std::size_t paths,
                                        std::uint64_t seed, unsigned threads) {
  const double r = Ar1Parameter(rho).value();
  if (ell < 1) throw Error(ErrorCode::EllOutOfRange, "AR(1) path length must be positive");
  const double innovation = std::sqrt(1.0 - r * r);
  std::vector<double> maxima(paths);
  run_chunks(chunk_count(paths), threads, [&](std::size_t c) {
    NormalStream normals(chunk_seed(seed, c));
    const std::size_t begin = c * kChunkSize;
    for (std::size_t p = begin, end = begin + chunk_length(paths, c); p < end; ++p) {
      double x = normals.next();
      double m = x;
      for (std::int64_t t = 1; t < ell; ++t) {
        x = r * x + innovation * normals.next();
        m = std::max(m, x);
      }
      maxima[p] = m;
    }
  });
  return maxima;
}

DifferenceCovariance difference_covariance(double rho12, double rho13, double rho23) {
  DifferenceCovariance out;
  out.sigma_y = std::sqrt(2.0 - 2.0 * rho12);
  out.sigma_z = std::sqrt(2.0 - 2.0 * rho23);
  if (!(out.sigma_y > 0.0) || !(out.sigma_z > 0.0)) {
    throw Error(ErrorCode::InvalidSpec, "difference X1 - X2 or X3 - X2 is degenerate");
  }
  out.xi = (rho13 - rho12 - rho23 + 1.0) / (out.sigma_y * out.sigma_z);
  return out;
}

namespace {

void validate(const QuadrantSpec& s) {
  if (!(s.sigma_y > 0.0) || !(s.sigma_z > 0.0) || !std::isfinite(s.sigma_y) ||
      !std::isfinite(s.sigma_z) || !(std::abs(s.xi) < 1.0)) {
    throw Error(ErrorCode::InvalidSpec, "quadrant spec needs positive sigmas and |xi| < 1");
  }
}

}  // namespace

double quadrant_integral(const QuadrantSpec& spec) {
  validate(spec);
  const double inv_root = 1.0 / std::sqrt(2.0 * pi);
  const double sy = spec.sigma_y;
  const double sz = spec.sigma_z;
  const double xi = spec.xi;
  switch (spec.quadrant) {
    case Quadrant::PP:
      return inv_root * (-(1.0 - xi) * (sy + sz) + 2.0 * std::sqrt(sy * sy - 2.0 * xi * sy * sz + sz * sz));
    case Quadrant::NP:
      return (1.0 - xi) * sz * inv_root;
    case Quadrant::PN:
      return (1.0 - xi) * sy * inv_root;
    case Quadrant::NN:
      return 0.0;
  }
  return 0.0;
}

double quadrant_integral_numeric(const QuadrantSpec& spec) {
  validate(spec);
  using Rule = boost::math::quadrature::gauss_kronrod<double, 61>;
  constexpr double kTruncation = 10.0;
  constexpr double kTarget = 1e-8;
  constexpr unsigned kDepth = 20;
  constexpr double kInnerTol = 1e-12;
  constexpr double kOuterTol = 1e-10;

  const double sy = spec.sigma_y;
  const double sz = spec.sigma_z;
  const double xi = spec.xi;
  const double one_m = 1.0 - xi * xi;
  const double norm = 1.0 / (2.0 * pi * std::sqrt(one_m) * sy * sz);
  auto density = [=](double y, double z) {
    const double q = y * y / (sy * sy) - 2.0 * xi * y * z / (sy * sz) + z * z / (sz * sz);
    return norm * std::exp(-q / (2.0 * one_m));
  };
  auto integrand = [&](double y, double z) {
    return std::abs((y + std::abs(y)) - (z + std::abs(z))) * density(y, z);
  };

  const bool y_pos = spec.quadrant == Quadrant::PP || spec.quadrant == Quadrant::PN;
  const bool z_pos = spec.quadrant == Quadrant::PP || spec.quadrant == Quadrant::NP;
  const double y_lo = y_pos ? 0.0 : -kTruncation * sy;
  const double y_hi = y_pos ? kTruncation * sy : 0.0;
  const double z_lo = z_pos ? 0.0 : -kTruncation * sz;
  const double z_hi = z_pos ? kTruncation * sz : 0.0;

  double worst_inner = 0.0;
  auto inner = [&](double z) {
    auto f = [&](double y) { return integrand(y, z); };
    double total = 0.0;
    double err = 0.0;
    auto piece = [&](double a, double b) {
      if (!(b > a)) return;
      double e = 0.0;
      total += Rule::integrate(f, a, b, kDepth, kInnerTol, &e);
      err += e;
    };
    // |y - z| has a kink on the diagonal of the positive quadrant.
    if (spec.quadrant == Quadrant::PP && z > y_lo && z < y_hi) {
      piece(y_lo, z);
      piece(z, y_hi);
    } else {
      piece(y_lo, y_hi);
    }
    worst_inner = std::max(worst_inner, err);
    return total;
  };

  double outer_err = 0.0;
  const double value = Rule::integrate(inner, z_lo, z_hi, kDepth, kOuterTol, &outer_err);
  const double err = outer_err + worst_inner * (z_hi - z_lo);
  if (!(err <= kTarget) || !std::isfinite(value)) {
    throw Error(ErrorCode::QuadratureFailure,
                "quadrant quadrature error estimate " + std::to_string(err) + " exceeds 1e-8");
  }
  return value;
}

double max_pair_decomposition(double x1, double x2) noexcept {
  return 0.5 * (x1 + x2) + 0.5 * std::abs(x1 - x2);
}

double max_triple_decomposition(double x1, double x2, double x3) noexcept {
  const double d12 = std::abs(x1 - x2);
  const double d23 = std::abs(x2 - x3);
  return 0.25 * ((x1 + x2) + (x2 + x3) + d12 + d23) +
         0.25 * std::abs((x1 + x2) - (x2 + x3) + d12 - d23);
}

}  // namespace gaussmax::oracle
