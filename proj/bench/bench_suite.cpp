// Serial reference vs OpenMP kernels for the random identity suite and
// pointwise coefficient recovery.

#include <benchmark/benchmark.h>

#include "hodiff/identity.hpp"
#include "hodiff/recovery.hpp"
#include "hodiff/sampling.hpp"

namespace {

const hodiff::Domain kDomain = hodiff::Domain::interval(-2.0, 2.0);

hodiff::Operator bench_operator(int n) {
  hodiff::Rng rng(7);
  return hodiff::random_canonical(rng, n, kDomain);
}

hodiff::SuiteConfig bench_config() {
  hodiff::SuiteConfig cfg;
  cfg.seed = 11;
  cfg.tuples = 10;
  cfg.grid = kDomain.grid(21);
  return cfg;
}

void BM_SuiteSerial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto D = bench_operator(n);
  const auto cfg = bench_config();
  for (auto _ : state) benchmark::DoNotOptimize(hodiff::run_check_suite_serial(D, n, cfg));
}

void BM_SuiteParallel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto D = bench_operator(n);
  const auto cfg = bench_config();
  for (auto _ : state) benchmark::DoNotOptimize(hodiff::run_check_suite_detailed(D, n, cfg, 0));
}

void BM_RecoverSerial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto D = bench_operator(n);
  const auto grid = kDomain.grid(201);
  for (auto _ : state) benchmark::DoNotOptimize(hodiff::recover_profile_serial(D, n, grid));
}

void BM_RecoverParallel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto D = bench_operator(n);
  const auto grid = kDomain.grid(201);
  for (auto _ : state) benchmark::DoNotOptimize(hodiff::recover_profile(D, n, grid, {}, 0));
}

}  // namespace

BENCHMARK(BM_SuiteSerial)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SuiteParallel)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RecoverSerial)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RecoverParallel)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
