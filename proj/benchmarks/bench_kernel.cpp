#include <memory>

#include <benchmark/benchmark.h>

#include "csrbf/kernel.hpp"

namespace {

using csrbf::ScaledKernel;

static void BM_WendlandProfile(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(csrbf::wendland_profile(3, k));
}
BENCHMARK(BM_WendlandProfile)->DenseRange(0, 5);

static void BM_ProfileEvaluate(benchmark::State& state) {
  const auto profile = std::make_shared<const csrbf::RadialProfile>(csrbf::wendland_profile(3, 5));
  const ScaledKernel kernel(profile, 1.0, 1.5);
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(csrbf::evaluate(kernel, t));
    t = t < 3.0 ? t + 1e-3 : 0.0;
  }
}
BENCHMARK(BM_ProfileEvaluate);

static void BM_KernelIntegrals(benchmark::State& state) {
  const auto profile = std::make_shared<const csrbf::RadialProfile>(csrbf::wendland_profile(3, 5));
  const ScaledKernel kernel(profile, 1.0, 1.5);
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(csrbf::integrals(kernel, t));
    t = t < 3.0 ? t + 1e-3 : 0.0;
  }
}
BENCHMARK(BM_KernelIntegrals);

}  // namespace

BENCHMARK_MAIN();
