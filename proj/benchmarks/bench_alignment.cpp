#include <edepth/distance.hpp>
#include <edepth/simulate.hpp>

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

namespace {

edepth::QCurve wave(std::size_t n, double freq, double phase) {
  std::vector<double> v(n);
  const auto grid = edepth::Grid::uniform(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = std::sin(freq * std::numbers::pi * grid[i] + phase) + 4.0 * grid[i];
  return edepth::srsf(edepth::Trajectory::scalar(grid, v));
}

void BM_OptimalWarping(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto q1 = wave(n, 5.0, 0.0);
  const auto q2 = wave(n, 5.0, 0.3);
  for (auto _ : state)
    benchmark::DoNotOptimize(edepth::optimal_warping(q1, q2));
}
BENCHMARK(BM_OptimalWarping)->Arg(30)->Arg(80)->Unit(benchmark::kMicrosecond);

void BM_DistanceMatrices(benchmark::State& state) {
  edepth::ScenarioSpec spec;
  spec.n_inlier = static_cast<std::size_t>(state.range(0)) - 10;
  spec.n_outlier = 10;
  spec.seed = 1;
  const auto sample = edepth::sample_scenario(spec);
  for (auto _ : state)
    benchmark::DoNotOptimize(edepth::distance_matrices(sample.trajectories));
}
BENCHMARK(BM_DistanceMatrices)->Arg(20)->Arg(100)->Unit(benchmark::kMillisecond);

} // namespace
BENCHMARK_MAIN();
