#include <benchmark/benchmark.h>

#include <cmath>

#include "confirm/cbq.hpp"

using namespace confirm;

static void BM_CbqMonteCarlo(benchmark::State& state) {
  cbq::ConfidentEfficacy L;
  L.value = 0.26;
  cbq::Phase3Design d;
  d.n_rx = d.n_c = 1000;
  d.sigma_pooled = std::sqrt(92.365);
  d.reps = static_cast<int>(state.range(0));
  d.seed = 3;
  for (auto _ : state) benchmark::DoNotOptimize(cbq::cbq_monte_carlo(L, d, 0.30, 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CbqMonteCarlo)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_MinN(benchmark::State& state) {
  cbq::ConfidentEfficacy L;
  L.value = 0.26;
  for (auto _ : state) benchmark::DoNotOptimize(cbq::min_n_for_positive_cbq(L, std::sqrt(92.365), 0.30));
}
BENCHMARK(BM_MinN);
