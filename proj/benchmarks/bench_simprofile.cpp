#include <benchmark/benchmark.h>

#include "confirm/simprofile.hpp"

using namespace confirm;

namespace {

sim::SimConfig expedition3_config(int reps) {
  sim::SimConfig cfg;
  cfg.n_rx = 1057;
  cfg.n_c = 1072;
  cfg.etz = {53.802, 10.778, 70.809};
  cfg.seed = 3;
  cfg.n_reps = reps;
  return cfg;
}

sim::FixedEffects effects() {
  sim::FixedEffects fx;
  fx.alpha_common = 45.48;
  fx.beta_rx = -6.17 / 80;
  fx.beta_c = -7.17 / 80;
  return fx;
}

}  // namespace

static void BM_SimulateStudy(benchmark::State& state) {
  const sim::SimConfig cfg = expedition3_config(1);
  for (auto _ : state) benchmark::DoNotOptimize(sim::simulate_study(effects(), cfg, 0));
  state.SetItemsProcessed(state.iterations() * (cfg.n_rx + cfg.n_c));
}
BENCHMARK(BM_SimulateStudy)->Unit(benchmark::kMillisecond);

static void BM_Replicability(benchmark::State& state) {
  const sim::SimConfig cfg = expedition3_config(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sim::replicability_metrics(effects(), cfg, 1));
}
BENCHMARK(BM_Replicability)->Arg(20)->Unit(benchmark::kMillisecond);
