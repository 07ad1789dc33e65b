// Copyright 2026 The rtnoise Authors
// SPDX-License-Identifier: Apache-2.0
//
// Serial reference vs OpenMP kernels. Both produce identical estimates; only
// the wall time differs. Run with OMP_NUM_THREADS to pick the thread count.
#include <benchmark/benchmark.h>
#include <omp.h>

#include "rtn/monte_carlo.hpp"

namespace {

using rtn::mc::Execution;

rtn::mc::Settings settings(Execution exec, std::int64_t n) {
  rtn::mc::Settings s;
  s.n_samples = n;
  s.seed = 42;
  s.execution = exec;
  return s;
}

void BM_CharFn(benchmark::State& state) {
  const auto exec = static_cast<Execution>(state.range(0));
  const auto n = state.range(1);
  const auto source = rtn::TelegraphSource::symmetric(1.0, 0.2);  // lambda = 10
  for (auto _ : state) {
    const auto est = rtn::mc::estimate_char_fn(source, {1.0, 2.0}, rtn::StartPolicy::mixed, settings(exec, n));
    benchmark::DoNotOptimize(est.mean.re);
  }
  state.SetItemsProcessed(state.iterations() * n);
  state.SetLabel(exec == Execution::serial ? "serial" : "parallel");
  state.counters["threads"] = exec == Execution::serial ? 1 : omp_get_max_threads();
}

void BM_Schedule(benchmark::State& state) {
  const auto exec = static_cast<Execution>(state.range(0));
  const auto n = state.range(1);
  const auto source = rtn::TelegraphSource::symmetric(1.0, 1.0);
  const auto schedule = rtn::PulseSchedule::suppression(2.0, 16);
  for (auto _ : state) {
    const auto est = rtn::mc::estimate_schedule(schedule, source, 2.0, settings(exec, n));
    benchmark::DoNotOptimize(est.mean.re);
  }
  state.SetItemsProcessed(state.iterations() * n);
  state.SetLabel(exec == Execution::serial ? "serial" : "parallel");
  state.counters["threads"] = exec == Execution::serial ? 1 : omp_get_max_threads();
}

void BM_Histogram(benchmark::State& state) {
  const auto exec = static_cast<Execution>(state.range(0));
  const auto n = state.range(1);
  const rtn::TelegraphSource source{1.0, 0.5, 2.0, 0.5};
  for (auto _ : state) {
    const auto h = rtn::mc::estimate_histogram(source, 1.0, rtn::StartPolicy::positive, 200, settings(exec, n));
    benchmark::DoNotOptimize(h.density.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
  state.SetLabel(exec == Execution::serial ? "serial" : "parallel");
}

void args(benchmark::internal::Benchmark* b) {
  for (int exec : {static_cast<int>(Execution::serial), static_cast<int>(Execution::parallel)}) {
    for (std::int64_t n : {100'000, 1'000'000}) b->Args({exec, n});
  }
  b->Unit(benchmark::kMillisecond)->UseRealTime();
}

BENCHMARK(BM_CharFn)->Apply(args);
BENCHMARK(BM_Schedule)->Apply(args);
BENCHMARK(BM_Histogram)->Apply(args);

}  // namespace

BENCHMARK_MAIN();
