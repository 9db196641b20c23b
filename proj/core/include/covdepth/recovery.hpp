#pragma once

#include <vector>

#include "covdepth/matrix.hpp"
#include "covdepth/rational.hpp"

namespace covdepth {

/// The recovery-set counts alpha[s] = number of size-s column subsets whose
/// span contains e_strand, for s = 0..n. The universal input of the moments
/// engine: every closed form and every oracle produces one of these.
struct AlphaProfile {
  int n = 0;
  int strand = 0;  // 1-based; 0 when the profile is strand-independent
  std::vector<BigInt> alpha;  // size n+1

  /// Complement count: binom(n,s) - alpha[s] (not stored; single source of
  /// truth is alpha).
  BigInt alpha_bar(int s) const;

  /// Checks all profile invariants: alpha[0] = 0, alpha[n] = 1,
  /// 0 <= alpha[s] <= binom(n,s), and the superset-growth inequality
  /// (s+1)*alpha[s+1] >= (n-s)*alpha[s]. Throws Error on violation.
  void validate() const;
};

struct BruteForceOptions {
  int cap = 24;     // refuse n beyond this (2^n enumeration)
  int threads = 1;  // subset lattice split on the first element
};

/// Exact alpha profile by enumerating all 2^n column subsets with
/// incremental elimination states (subtrees above a recovery set are counted
/// combinatorially, not walked). Results are bit-identical for any thread
/// count. This is the artifact's universal oracle.
AlphaProfile alpha_bruteforce(const GeneratorMatrix& m, int strand,
                              const BruteForceOptions& opts = {});

/// Ordered count beta(r): number of length-r index lists whose drawn columns
/// span e_strand. Valid for every r >= 0, including r > n.
BigInt beta_of(const AlphaProfile& profile, long r);

/// Inverse of beta_of: recovers the profile from betas for r = 1..n.
/// Throws PreconditionError when the implied division by s! is not exact
/// (inconsistent input).
AlphaProfile alpha_from_beta(const std::vector<BigInt>& betas, int n,
                             int strand = 0);

/// Exact survival function P(tau > r) = (n^r - beta(r)) / n^r, computed as
/// sum_s s! {r brace s} alpha_bar(s) / n^r.
Rational survival(const AlphaProfile& profile, long r);

/// Geometric tail envelope: survival(r) <= A * ((n-1)/n)^r for all r >= 0,
/// with A = sum_s alpha_bar(s). Used by the tail-sum moment bound.
BigInt survival_envelope_constant(const AlphaProfile& profile);

/// All inclusion-minimal recovery sets for the strand, sorted by size then
/// lexicographically. Column indices are 1-based.
std::vector<std::vector<int>> minimal_recovery_sets(const GeneratorMatrix& m,
                                                    int strand, int cap = 24);

/// Union-size census of the minimal recovery sets:
/// xi(j, s) = number of j-subsets of the L minimal sets whose union has
/// cardinality s.
struct XiTable {
  int L = 0;
  int n = 0;
  std::vector<std::vector<BigInt>> xi;  // (L+1) x (n+1), xi[j][s]

  /// Checks sum_s xi(j, s) = binom(L, j) for every j. Throws on violation.
  void validate() const;
};

/// Exact census by enumerating the 2^L subsets of minimal sets. L <= 25.
XiTable xi_from_minimal(const std::vector<std::vector<int>>& sets, int n);

/// Alpha profile implied by a minimal-set census, by inclusion-exclusion:
/// alpha(s) = sum_{j=1..L} sum_{t=1..s} binom(n-t, s-t) (-1)^(j+1) xi(j,t).
/// Throws PreconditionError if any resulting count is negative or exceeds
/// binom(n,s) (inconsistent table).
AlphaProfile alpha_from_xi(const XiTable& table, int n);

}  // namespace covdepth
