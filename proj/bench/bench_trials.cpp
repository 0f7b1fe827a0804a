// Serial reference vs OpenMP kernels: the trial batch and the theory curve.
#include <benchmark/benchmark.h>

#include <omp.h>

#include "cclt/mc.hpp"
#include "cclt/theory.hpp"

namespace {

const cclt::dist::Distribution kExample{{{3, 0, 0.1}, {3, 2, 0.9}}};

cclt::mc::BatchSpec batch(std::int64_t n) { return {kExample, n, 64, 1, 1.12}; }

void BM_TrialsSerial(benchmark::State& state) {
  const auto spec = batch(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cclt::mc::run_trials_serial(spec));
  state.SetItemsProcessed(state.iterations() * spec.trials);
}

void BM_TrialsParallel(benchmark::State& state) {
  const auto spec = batch(state.range(0));
  const int workers = omp_get_max_threads();
  for (auto _ : state) benchmark::DoNotOptimize(cclt::mc::run_trials(spec, workers));
  state.SetItemsProcessed(state.iterations() * spec.trials);
  state.counters["workers"] = workers;
}

std::vector<double> grid() {
  std::vector<double> t(64);
  for (std::size_t j = 0; j < t.size(); ++j) t[j] = 1.2 * static_cast<double>(j) / 63.0;
  return t;
}

void BM_CurveSerial(benchmark::State& state) {
  const auto t = grid();
  for (auto _ : state) benchmark::DoNotOptimize(cclt::theory::curve_serial(kExample, t));
}

void BM_CurveParallel(benchmark::State& state) {
  const auto t = grid();
  for (auto _ : state) benchmark::DoNotOptimize(cclt::theory::curve(kExample, t));
}

}  // namespace

BENCHMARK(BM_TrialsSerial)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrialsParallel)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CurveSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CurveParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
