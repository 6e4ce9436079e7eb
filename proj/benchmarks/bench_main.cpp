#include <benchmark/benchmark.h>

#include "abho/abho.hpp"

using namespace abho;

namespace {

const Config kCfg{0.1, 0.05, 1.0, 10.0, 0.1, 0};
const PhasePoint kPoint{{1.2, 0.4}, {-0.3, 0.9}};
const Vec2 kX{0.6, 1.1}, kY{1.4, -0.2};

void BM_Flow(benchmark::State& state) {
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(flow(t, kPoint, kCfg));
    t += 1e-3;
  }
}
BENCHMARK(BM_Flow);

void BM_Action(benchmark::State& state) {
  double t = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(action(t, kPoint, kCfg));
    t += 1e-3;
  }
}
BENCHMARK(BM_Action);

void BM_SqrtDetZTracked(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sqrt_det_z_tracked(2.5, kPoint, kCfg));
}
BENCHMARK(BM_SqrtDetZTracked);

void BM_SqrtDetZBranch(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sqrt_det_z_branch(2.5, kPoint, kCfg));
}
BENCHMARK(BM_SqrtDetZBranch);

void BM_KernelU0(benchmark::State& state) {
  const Config cfg{1.0 / static_cast<double>(state.range(0)), 0.02, 1.0, 10.0, 0.1, 0};
  for (auto _ : state) benchmark::DoNotOptimize(kernel_u0(1.0, kX, kY, cfg));
}
BENCHMARK(BM_KernelU0)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_ExactPropagator(benchmark::State& state) {
  const Config cfg{1.0 / static_cast<double>(state.range(0)), 0.02, 1.0, 10.0, 0.1, 0};
  const SpectralTruncation trunc{60, 40 * static_cast<int>(state.range(0)), 1e-8};
  for (auto _ : state) benchmark::DoNotOptimize(exact_propagator(1.0, kX, kY, cfg, trunc));
}
BENCHMARK(BM_ExactPropagator)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
