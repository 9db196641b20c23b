#include <benchmark/benchmark.h>

#include "covdepth/families.hpp"
#include "covdepth/recovery.hpp"

using namespace covdepth;

static void BM_AlphaBruteforceRatehalf(benchmark::State& state) {
  auto m = family_generator(FamilySpec::ratehalf((int)state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(alpha_bruteforce(m, 1));
}
BENCHMARK(BM_AlphaBruteforceRatehalf)->Arg(5)->Arg(6)->Arg(7)->Arg(8)
    ->Unit(benchmark::kMillisecond);

static void BM_AlphaBruteforceThreads(benchmark::State& state) {
  auto m = family_generator(FamilySpec::ratehalf(8));
  BruteForceOptions opts{24, (int)state.range(0)};
  for (auto _ : state)
    benchmark::DoNotOptimize(alpha_bruteforce(m, 1, opts));
}
BENCHMARK(BM_AlphaBruteforceThreads)->Arg(1)->Arg(2)->Arg(4)
    ->Unit(benchmark::kMillisecond);

static void BM_MinimalRecoverySets(benchmark::State& state) {
  auto m = family_generator(FamilySpec::hamming(2, 3));
  for (auto _ : state)
    benchmark::DoNotOptimize(minimal_recovery_sets(m, 1));
}
BENCHMARK(BM_MinimalRecoverySets);
