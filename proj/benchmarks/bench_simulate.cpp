#include <benchmark/benchmark.h>

#include "covdepth/families.hpp"
#include "covdepth/simulate.hpp"

using namespace covdepth;

static void BM_SampleTau(benchmark::State& state) {
  auto m = family_generator(FamilySpec::mds(8, 7, 3));
  SplitMix64 stream = trial_stream(1, 0);
  for (auto _ : state)
    benchmark::DoNotOptimize(sample_tau(m, 1, stream));
}
BENCHMARK(BM_SampleTau);

static void BM_Estimate(benchmark::State& state) {
  auto m = family_generator(FamilySpec::identity(7));
  SimConfig config;
  config.trials = 100000;
  config.master_seed = 1;
  config.parallelism = (int)state.range(0);
  for (auto _ : state)
    benchmark::DoNotOptimize(estimate(m, 1, config));
}
BENCHMARK(BM_Estimate)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
