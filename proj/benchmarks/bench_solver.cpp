#include <benchmark/benchmark.h>

#include "csrbf/collocation.hpp"
#include "csrbf/tuner.hpp"

namespace {

csrbf::CollocationConfig config(int n) {
  csrbf::CollocationConfig c;
  c.n = n;
  c.length = 2.0;
  c.rho = 1.0;
  c.r_omega = 2.0;
  return c;
}

static void BM_AssembleBasis(benchmark::State& state) {
  const csrbf::CollocationConfig c = config(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(csrbf::assemble_basis(c));
}
BENCHMARK(BM_AssembleBasis)->Arg(15)->Arg(27)->Arg(64);

static void BM_NewtonSolve(benchmark::State& state) {
  const csrbf::ModelParams params = csrbf::make_params(0.5, 0.1);
  const csrbf::CollocationConfig c = config(27);
  for (auto _ : state) benchmark::DoNotOptimize(csrbf::newton_solve(c, params));
}
BENCHMARK(BM_NewtonSolve)->Unit(benchmark::kMillisecond);

static void BM_TuneSmallGrid(benchmark::State& state) {
  const csrbf::ModelParams params = csrbf::make_params(0.2, 0.1);
  csrbf::TuneOptions options;
  options.refine_rounds = 1;
  const csrbf::TuneGrid grid{{1.0, 2.0}, {1.0, 1.5}, {1.0, 2.0}};
  for (auto _ : state) benchmark::DoNotOptimize(csrbf::tune(params, 18, grid, options));
}
BENCHMARK(BM_TuneSmallGrid)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
