#include <benchmark/benchmark.h>

#include <random>

#include "boson_kinetics/kernels.hpp"
#include "boson_kinetics/runner.hpp"

namespace bk = boson_kinetics;

namespace {

void run_rhs(benchmark::State& state, bk::KernelPolicy policy) {
  const auto L = static_cast<std::size_t>(state.range(0));
  const auto spec = bk::build_modes({L, 1.0, 0.0, bk::Boundary::Open});
  const auto ctx = bk::build_rate_context(spec, {1e-3, 0.1, -3.0, 1.0});
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  std::vector<double> n(L), dn(L);
  for (double& v : n) v = u(rng);
  for (auto _ : state) {
    bk::rhs(n, ctx, dn, policy);
    benchmark::DoNotOptimize(dn.data());
  }
  state.SetComplexityN(state.range(0));
}

void BM_RhsReference(benchmark::State& state) { run_rhs(state, bk::KernelPolicy::Reference); }
void BM_RhsParallel(benchmark::State& state) { run_rhs(state, bk::KernelPolicy::Parallel); }

void BM_Sweep(benchmark::State& state) {
  bk::RunConfig config;
  config.L = 40;
  config.N = 20;
  bk::SweepSpec spec;
  spec.axis1 = {"delta_over_J", {-1.0, -2.0, -3.0, -4.0}};
  spec.axis2 = bk::SweepAxis{"kappa_over_J", {0.5, 1.0, 2.0, 4.0}};
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bk::compute_sweep(config, spec, threads));
}

}  // namespace

BENCHMARK(BM_RhsReference)->RangeMultiplier(2)->Range(64, 1024)->Complexity(benchmark::oNSquared);
BENCHMARK(BM_RhsParallel)->RangeMultiplier(2)->Range(64, 1024)->Complexity(benchmark::oNSquared);
BENCHMARK(BM_Sweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
