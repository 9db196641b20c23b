#include <benchmark/benchmark.h>

#include "covdepth/families.hpp"
#include "covdepth/moments.hpp"

using namespace covdepth;

static void BM_MomentClosedForm(benchmark::State& state) {
  auto profile = family_alpha(FamilySpec::identity((int)state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(moment(profile, 4));
}
BENCHMARK(BM_MomentClosedForm)->Arg(7)->Arg(16)->Arg(32)
    ->Unit(benchmark::kMicrosecond);

static void BM_MomentTailsum(benchmark::State& state) {
  auto profile = family_alpha(FamilySpec::mds(8, 7, 3));
  Rational eps = parse_rational("1e-12");
  for (auto _ : state)
    benchmark::DoNotOptimize(moment_tailsum(profile, 2, eps));
}
BENCHMARK(BM_MomentTailsum)->Unit(benchmark::kMicrosecond);

static void BM_PmfTable(benchmark::State& state) {
  auto profile = family_alpha(FamilySpec::hamming(2, 3));
  for (auto _ : state)
    benchmark::DoNotOptimize(pmf_table(profile, (int)state.range(0)));
}
BENCHMARK(BM_PmfTable)->Arg(30)->Arg(50)->Unit(benchmark::kMicrosecond);
