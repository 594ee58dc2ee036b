// Serial reference vs OpenMP replicate loops on the Monte Carlo kernels.

#include <benchmark/benchmark.h>

#include "mmlab/kernels.hpp"
#include "mmlab/model.hpp"
#include "mmlab/replicates.hpp"
#include "mmlab/risk.hpp"

namespace {

using namespace mmlab;

void run_loss(benchmark::State& state, Execution execution) {
  const SampleSize n = state.range(0);
  const auto design = DesignSpec::constant_one();
  const auto xs = regressors(design, n);
  const double sxx = sum_sq(design, n);
  McOptions mc;
  mc.replicates = 20000;
  mc.execution = execution;
  for (auto _ : state) {
    auto out = run_replicates(mc, [&](Xoshiro256pp& rng) {
      return kernels::selection_loss(rng, 0.1, xs, sxx, 2.0 * std::sqrt(sxx));
    });
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * mc.replicates);
}

void BM_LossSerial(benchmark::State& s) { run_loss(s, Execution::Serial); }
void BM_LossParallel(benchmark::State& s) { run_loss(s, Execution::Parallel); }

void BM_SupScan(benchmark::State& state) {
  const auto cal = SelectorCalibration::consistent_log();
  const auto design = DesignSpec::constant_one();
  const auto execution = state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        scaled_risk_sup(1000000, cal, design, BetaGrid::structured(0.0, 20000), execution));
  }
}

}  // namespace

BENCHMARK(BM_LossSerial)->Arg(20)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LossParallel)->Arg(20)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SupScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
