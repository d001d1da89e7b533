#include <benchmark/benchmark.h>

#include "confirm/confset.hpp"
#include "confirm/numerics.hpp"

using namespace confirm;

static void BM_NormalQuantile(benchmark::State& state) {
  double p = 0.001;
  for (auto _ : state) {
    benchmark::DoNotOptimize(numerics::std_normal_quantile(p));
    p = p < 0.998 ? p + 0.001 : 0.001;
  }
}
BENCHMARK(BM_NormalQuantile);

static void BM_StudentTQuantile(benchmark::State& state) {
  const int df = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(numerics::student_t_quantile(0.95, df));
}
BENCHMARK(BM_StudentTQuantile)->Arg(8)->Arg(1959);

static void BM_BivariateNormal(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(numerics::bvn_cdf(1.9, 1.9, 0.5));
}
BENCHMARK(BM_BivariateNormal);

static void BM_Allowance(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(confset::allowance_d(3.0, 1.0, 0.05));
}
BENCHMARK(BM_Allowance);

static void BM_JointBound(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(confset::joint_critical_bound(0.5, 0.05));
}
BENCHMARK(BM_JointBound);
