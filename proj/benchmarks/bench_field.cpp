#include <benchmark/benchmark.h>

#include "covdepth/field.hpp"

using covdepth::FieldSpec;

static void BM_FieldMul(benchmark::State& state) {
  FieldSpec f = FieldSpec::make(2, (unsigned)state.range(0));
  uint64_t q = f.q();
  uint64_t a = 1, b = q - 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.mul(a, b));
    a = (a + 1) % q;
    b = (b + 3) % q;
  }
}
BENCHMARK(BM_FieldMul)->Arg(1)->Arg(3)->Arg(6);

static void BM_FieldInv(benchmark::State& state) {
  FieldSpec f = FieldSpec::make(2, (unsigned)state.range(0));
  uint64_t q = f.q();
  uint64_t a = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.inv(a));
    a = a % (q - 1) + 1;
  }
}
BENCHMARK(BM_FieldInv)->Arg(3)->Arg(6);
