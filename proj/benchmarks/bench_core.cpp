#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "nwidth/asymptotics.hpp"
#include "nwidth/fdwidths.hpp"
#include "nwidth/moduli.hpp"
#include "nwidth/projectors.hpp"

namespace {

using namespace nwidth;

const GridFunction kWave(2, [](std::span<const double> x) { return std::cos(3.0 * x[0] - x[1]) + x[0] * x[1]; },
                         "wave");

void BM_ProjectLevel(benchmark::State& state) {
  ProjectorConfig cfg;
  cfg.degree = MultiIndex{1, 1};
  cfg.alpha = {1.0, 1.5};
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(project_level(kWave, cfg, k));
}
BENCHMARK(BM_ProjectLevel)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

void BM_ModulusProfile(benchmark::State& state) {
  const auto f = make_catalog_function("abs-power:0.75", 1);
  const auto ts = TGrid{}.points();
  for (auto _ : state) benchmark::DoNotOptimize(averaged_modulus_profile(f, ModulusSpec{0, 1, 2.0}, ts));
}
BENCHMARK(BM_ModulusProfile)->Unit(benchmark::kMillisecond);

void BM_BesovNorm(benchmark::State& state) {
  const auto f = make_catalog_function("sin:1", 2);
  for (auto _ : state) benchmark::DoNotOptimize(besov_norm(f, std::vector<double>{1.0, 2.0}, 2.0, 2.0));
}
BENCHMARK(BM_BesovNorm)->Unit(benchmark::kMillisecond);

void BM_WidthOracle(benchmark::State& state) {
  const Ellipsoid e({1.0, 0.8, 0.5, 0.3, 0.2, 0.1}, 1.0);
  const auto n = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(width_oracle(e, 2.0, n, 10, 1));
}
BENCHMARK(BM_WidthOracle)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_UpperBound(benchmark::State& state) {
  const std::vector<double> alpha{2.0, 2.0};
  const auto n = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(upper_bound_value(alpha, 4.0, 2.0, n));
}
BENCHMARK(BM_UpperBound)->RangeMultiplier(16)->Range(64, 16384);

}  // namespace
BENCHMARK_MAIN();
