#include "covdepth/simulate.hpp"

#include <cmath>
#include <thread>

#include "covdepth/errors.hpp"

namespace covdepth {

long sample_tau(const GeneratorMatrix& m, int strand, SplitMix64& stream,
                long max_draws) {
  if (strand < 1 || strand > m.k())
    throw PreconditionError("strand index out of [1, k]");
  SpanState state(m);
  uint64_t n = (uint64_t)m.n();
  for (long draws = 1; draws <= max_draws; ++draws) {
    int col = (int)(stream.next() % n) + 1;
    state.insert_column(m, col);
    if (state.contains_unit(strand)) return draws;
  }
  throw Error("max_draws exceeded; matrix is unlikely to have rank k");
}

namespace {

// Raw empirical moment sums from a histogram, exactly.
BigInt histogram_power_sum(const std::vector<uint64_t>& hist, int p) {
  BigInt sum = 0;
  for (size_t r = 1; r < hist.size(); ++r) {
    if (hist[r] == 0) continue;
    sum += BigInt((unsigned long)hist[r]) * int_pow(r, p);
  }
  return sum;
}

double to_double(const Rational& v) { return v.get_d(); }

}  // namespace

EmpiricalReport estimate(const GeneratorMatrix& m, int strand,
                         const SimConfig& config) {
  if (config.trials < 1) throw PreconditionError("trials must be >= 1");
  if (config.max_draws < m.n())
    throw PreconditionError("max_draws must be >= n");
  int workers = std::max(1, config.parallelism);

  // Contiguous trial ranges per worker; per-trial streams depend only on
  // (seed, trial), so the split is irrelevant to the outcome.
  std::vector<std::vector<uint64_t>> local_hists(workers);
  auto run_range = [&](int w, long lo, long hi) {
    auto& hist = local_hists[w];
    for (long t = lo; t < hi; ++t) {
      SplitMix64 stream = trial_stream(config.master_seed, (uint64_t)t);
      long tau = sample_tau(m, strand, stream, config.max_draws);
      if ((size_t)tau >= hist.size()) hist.resize(tau + 1, 0);
      hist[tau] += 1;
    }
  };
  if (workers == 1) {
    run_range(0, 0, config.trials);
  } else {
    std::vector<std::thread> pool;
    long chunk = (config.trials + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      long lo = (long)w * chunk;
      long hi = std::min<long>(config.trials, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(run_range, w, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  EmpiricalReport report;
  report.trials = config.trials;
  report.seed = config.master_seed;
  report.strand = strand;
  size_t maxlen = 1;
  for (const auto& h : local_hists) maxlen = std::max(maxlen, h.size());
  report.histogram.assign(maxlen, 0);
  for (const auto& h : local_hists)
    for (size_t r = 0; r < h.size(); ++r) report.histogram[r] += h[r];

  // Moments p = 1..8 from the exact histogram (p = 5..8 only feed the
  // standard errors of p = 1..4).
  BigInt trials_big((unsigned long)config.trials);
  Rational mp[9];
  for (int p = 1; p <= 8; ++p)
    mp[p] = make_rational(histogram_power_sum(report.histogram, p),
                          trials_big);
  report.mean = to_double(mp[1]);
  for (int p = 1; p <= 4; ++p) report.raw_moment[p] = to_double(mp[p]);
  Rational var_hat = mp[2] - mp[1] * mp[1];
  report.variance = to_double(var_hat);

  double nt = (double)config.trials;
  report.se_mean = std::sqrt(std::max(0.0, to_double(var_hat)) / nt);
  for (int p = 1; p <= 4; ++p) {
    Rational spread = mp[2 * p] - mp[p] * mp[p];
    report.se_moment[p] = std::sqrt(std::max(0.0, to_double(spread)) / nt);
  }
  // Delta method for the plug-in variance estimator:
  // Var(sigma^2_hat) ~ (mu4 - sigma^4) / trials with mu4 the central
  // fourth moment.
  Rational mu4 = mp[4] - 4 * mp[1] * mp[3] + 6 * mp[1] * mp[1] * mp[2] -
                 3 * mp[1] * mp[1] * mp[1] * mp[1];
  Rational spread_var = mu4 - var_hat * var_hat;
  report.se_variance = std::sqrt(std::max(0.0, to_double(spread_var)) / nt);
  return report;
}

}  // namespace covdepth
