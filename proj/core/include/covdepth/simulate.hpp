#pragma once

#include <cstdint>
#include <vector>

#include "covdepth/matrix.hpp"
#include "covdepth/rational.hpp"

namespace covdepth {

/// SplitMix64. The per-trial stream for trial t under master seed S starts
/// from state mix64(S + (t + 1) * 0x9E3779B97F4A7C15); column draws are
/// next() % n (rejection-free modular reduction). Both choices are part of
/// the reproducibility contract and fixed forever.
struct SplitMix64 {
  uint64_t state;

  static uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    return mix64(state);
  }
};

/// Stream for one trial, derived only from (master_seed, trial index):
/// results are bit-identical for any parallelism degree.
inline SplitMix64 trial_stream(uint64_t master_seed, uint64_t trial) {
  return SplitMix64{
      SplitMix64::mix64(master_seed + (trial + 1) * 0x9E3779B97F4A7C15ull)};
}

struct SimConfig {
  long trials = 1000000;
  uint64_t master_seed = 1;
  long max_draws = 10000000;  // exceeding it signals a broken matrix
  int parallelism = 1;
};

struct EmpiricalReport {
  long trials = 0;
  uint64_t seed = 0;
  int strand = 0;
  /// histogram[r] = number of trials with tau == r (index 0 unused).
  std::vector<uint64_t> histogram;
  double mean = 0;
  double raw_moment[5] = {0, 0, 0, 0, 0};  // index p = 1..4
  double variance = 0;
  double se_mean = 0;
  double se_moment[5] = {0, 0, 0, 0, 0};
  double se_variance = 0;
};

/// Number of uniform-with-replacement column draws until e_strand enters
/// the span. Throws Error when max_draws is exceeded.
long sample_tau(const GeneratorMatrix& m, int strand, SplitMix64& stream,
                long max_draws = 10000000);

/// Aggregates sample_tau over config.trials trials. The histogram is merged
/// with exact integer addition and every derived statistic is computed from
/// it in a fixed order, so the report is a pure function of
/// (m, strand, trials, master_seed) regardless of parallelism.
EmpiricalReport estimate(const GeneratorMatrix& m, int strand,
                         const SimConfig& config);

}  // namespace covdepth
