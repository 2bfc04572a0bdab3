#include <benchmark/benchmark.h>

#include "harness/instances.hpp"
#include "karcher/geometry.hpp"
#include "karcher/measure.hpp"
#include "karcher/solver.hpp"

using namespace karcher;
using karcher::harness::random_measure;
using karcher::harness::random_spd;

static void BM_ThompsonDistance(benchmark::State& state) {
  SplitMix64 rng(1);
  const int dim = static_cast<int>(state.range(0));
  const SpdMatrix a = random_spd(dim, 0.5, rng);
  const SpdMatrix b = random_spd(dim, 0.5, rng);
  for (auto _ : state) benchmark::DoNotOptimize(thompson_distance(a, b));
}
BENCHMARK(BM_ThompsonDistance)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

static void BM_Geodesic(benchmark::State& state) {
  SplitMix64 rng(2);
  const int dim = static_cast<int>(state.range(0));
  const SpdMatrix a = random_spd(dim, 0.5, rng);
  const SpdMatrix b = random_spd(dim, 0.5, rng);
  for (auto _ : state) benchmark::DoNotOptimize(geodesic(a, b, 0.3));
}
BENCHMARK(BM_Geodesic)->Arg(2)->Arg(4)->Arg(8);

static void BM_KarcherMean(benchmark::State& state) {
  SplitMix64 rng(3);
  const int dim = static_cast<int>(state.range(0));
  const FiniteMeasure mu = random_measure(dim, 5, 0.5, rng, true);
  for (auto _ : state) benchmark::DoNotOptimize(karcher_mean(mu));
}
BENCHMARK(BM_KarcherMean)->Arg(2)->Arg(4)->Arg(8);

static void BM_ResolventStep(benchmark::State& state) {
  SplitMix64 rng(4);
  const int dim = static_cast<int>(state.range(0));
  const FiniteMeasure mu = random_measure(dim, 4, 0.02, rng, true);
  const SpdMatrix x = random_spd(dim, 0.02, rng);
  SolverConfig cfg;
  for (auto _ : state)
    benchmark::DoNotOptimize(internal::resolvent_step(1e-5, mu, x, cfg, 1e-13));
}
BENCHMARK(BM_ResolventStep)->Arg(2)->Arg(3)->Arg(4);

static void BM_W1Distance(benchmark::State& state) {
  SplitMix64 rng(5);
  const int k = static_cast<int>(state.range(0));
  const FiniteMeasure mu = random_measure(3, k, 0.5, rng, true);
  const FiniteMeasure nu = random_measure(3, k, 0.5, rng, true);
  for (auto _ : state) benchmark::DoNotOptimize(w1_distance(mu, nu));
}
BENCHMARK(BM_W1Distance)->Arg(3)->Arg(6)->Arg(12);

BENCHMARK_MAIN();
