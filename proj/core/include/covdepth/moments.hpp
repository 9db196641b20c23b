#pragma once

#include <map>
#include <optional>
#include <string>

#include "covdepth/recovery.hpp"

namespace covdepth {

/// Exact expectation E[tau] = sum_{s=0}^{n-1} alpha_bar(s) / binom(n-1, s).
Rational expectation(const AlphaProfile& profile);

/// Exact p-th raw moment E[tau^p], p >= 1, by the derivative closed form:
/// the generating function of {r brace s} turns the tail sum into exact
/// rational derivative evaluations at 1/n. moment(P, 1) == expectation(P).
Rational moment(const AlphaProfile& profile, int p);

/// Second moment by the dedicated closed form
/// sum_s alpha_bar(s)/binom(n-1,s) * (1 + 2s + 2 sum_{l=1..s} l/(n-l));
/// equals moment(P, 2) exactly.
Rational second_moment_closed(const AlphaProfile& profile);

/// Exact variance = second moment - expectation^2.
Rational variance(const AlphaProfile& profile);

struct TailSum {
  Rational lower_sum;        // sum_{r=0..R} ((r+1)^p - r^p) P(tau > r)
  Rational remainder_bound;  // certified bound on the dropped tail, <= eps
  long terms;                // R + 1
};

/// Tail-sum moment with certified remainder: partial sums of
/// E[tau^p] = sum_r ((r+1)^p - r^p) P(tau > r), stopped once the analytic
/// geometric envelope of the tail drops below eps.
TailSum moment_tailsum(const AlphaProfile& profile, int p,
                       const Rational& eps);

/// Exact point mass P[tau = r], r >= 1:
/// (1/n^r) sum_s [{r brace s} - n {r-1 brace s}] s! alpha(s).
Rational pmf(const AlphaProfile& profile, long r);

/// Point masses for r = 1..rmax plus the exact tail mass P(tau > rmax).
/// entries sum + tail == 1 exactly.
struct PmfTable {
  int rmax = 0;
  std::vector<Rational> mass;  // mass[r-1] = P[tau = r]
  Rational tail;               // survival(rmax)
};

PmfTable pmf_table(const AlphaProfile& profile, int rmax);

struct MomentEntry {
  Rational value;
  std::string method;                  // "closed-form" | "tail-sum"
  std::optional<Rational> tail_bound;  // certified remainder, tail-sum only
};

/// Moments p = 1..pmax (closed form), variance, and optional tail-sum
/// cross-checks at the given remainder bound.
struct MomentReport {
  int n = 0;
  int strand = 0;
  std::map<int, MomentEntry> moments;
  std::map<int, MomentEntry> tail_checks;  // present when tail_eps was given
  Rational variance;
};

MomentReport moment_report(const AlphaProfile& profile, int pmax,
                           std::optional<Rational> tail_eps = {});

}  // namespace covdepth
