#include <benchmark/benchmark.h>

#include "umlmc/errors.hpp"
#include "umlmc/ising.hpp"
#include "umlmc/mlmc.hpp"
#include "umlmc/models.hpp"
#include "umlmc/rng.hpp"

namespace {

using namespace umlmc;

void BM_PhiloxBlock(benchmark::State& state) {
  std::array<std::uint32_t, 4> ctr{0, 0, 0, 0};
  const std::array<std::uint32_t, 2> key{0x12345678u, 0x9abcdef0u};
  for (auto _ : state) {
    auto out = philox4x32_10(ctr, key);
    benchmark::DoNotOptimize(out);
    ++ctr[0];
  }
  state.SetItemsProcessed(state.iterations() * 4);
}
BENCHMARK(BM_PhiloxBlock);

void BM_DrawUniform(benchmark::State& state) {
  RngStream s(1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(draw_uniform(s));
}
BENCHMARK(BM_DrawUniform);

void BM_IsingSweep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const IsingGibbsKernel kernel(n, 0.2);
  RngStream s(2, 0);
  IsingState x = draw_ising_uniform(n, s);
  for (auto _ : state) {
    kernel.step(x, s);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_IsingSweep)->Arg(4)->Arg(16)->Arg(64);

void BM_IsingCoupledSweep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const IsingGibbsKernel kernel(n, 0.2);
  RngStream s(3, 0);
  IsingState x = draw_ising_uniform(n, s);
  IsingState y = draw_ising_uniform(n, s);
  for (auto _ : state) benchmark::DoNotOptimize(kernel.coupled_step(x, y, s));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_IsingCoupledSweep)->Arg(4)->Arg(16)->Arg(64);

void BM_BetaJoaSample(benchmark::State& state) {
  BetaOptions opts;
  opts.K = 2;
  const Target t = beta_product_target(opts);
  RngStream s(4, 0);
  for (auto _ : state) benchmark::DoNotOptimize(t.subroutine(s));
}
BENCHMARK(BM_BetaJoaSample);

void BM_BetaMlmcEstimate(benchmark::State& state) {
  BetaOptions opts;
  opts.K = 2;
  const Target t = beta_product_target(opts);
  MlmcConfig cfg;
  cfg.p = 0.7;
  RngStream s(5, 0);
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(mlmc_estimate(cfg, t.subroutine, t.g, s));
    } catch (const ReplicationError&) {
    }
  }
}
BENCHMARK(BM_BetaMlmcEstimate);

void BM_IsingRatioMlmcEstimate(benchmark::State& state) {
  IsingRatioOptions opts;
  opts.n = 3;
  const Target t = ising_ratio_target(opts);
  MlmcConfig cfg;
  cfg.p = 0.7;
  RngStream s(6, 0);
  for (auto _ : state) benchmark::DoNotOptimize(mlmc_estimate(cfg, t.subroutine, t.g, s));
}
BENCHMARK(BM_IsingRatioMlmcEstimate);

}  // namespace
BENCHMARK_MAIN();
