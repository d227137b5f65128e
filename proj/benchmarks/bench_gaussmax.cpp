#include <benchmark/benchmark.h>

#include "gaussmax/ar1.hpp"
#include "gaussmax/corrmat.hpp"
#include "gaussmax/moments.hpp"
#include "gaussmax/oracle.hpp"

namespace {

using namespace gaussmax;

void BM_MeanMax(benchmark::State& state) {
  const auto r = ar1_matrix(Ar1Parameter(-0.4), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(mean_max(r));
}
BENCHMARK(BM_MeanMax)->DenseRange(2, 5);

void BM_SecondMomentMax(benchmark::State& state) {
  const auto r = ar1_matrix(Ar1Parameter(-0.4), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(second_moment_max(r));
}
BENCHMARK(BM_SecondMomentMax)->DenseRange(2, 6);

void BM_Maximize(benchmark::State& state) {
  const auto target = state.range(1) == 0 ? MomentTarget::Mean : MomentTarget::SecondMoment;
  for (auto _ : state) benchmark::DoNotOptimize(maximize(static_cast<int>(state.range(0)), target));
}
BENCHMARK(BM_Maximize)->Args({5, 0})->Args({6, 1})->Unit(benchmark::kMillisecond);

void BM_Sweep(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sweep(5, -0.99, 0.99, 0.01));
}
BENCHMARK(BM_Sweep)->Unit(benchmark::kMillisecond);

void BM_SampleMaxMoments(benchmark::State& state) {
  const auto r = ar1_matrix(Ar1Parameter(0.5), 5);
  for (auto _ : state) benchmark::DoNotOptimize(oracle::sample_max_moments(r, 100'000, 1, 1));
  state.SetItemsProcessed(state.iterations() * 100'000);
}
BENCHMARK(BM_SampleMaxMoments)->Unit(benchmark::kMillisecond);

void BM_QuadrantNumeric(benchmark::State& state) {
  const oracle::QuadrantSpec spec{1.3, 0.8, -0.4, oracle::Quadrant::PP};
  for (auto _ : state) benchmark::DoNotOptimize(oracle::quadrant_integral_numeric(spec));
}
BENCHMARK(BM_QuadrantNumeric)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
