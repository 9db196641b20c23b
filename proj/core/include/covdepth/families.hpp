#pragma once

#include <string>

#include "covdepth/moments.hpp"
#include "covdepth/recovery.hpp"

namespace covdepth {

enum class FamilyKind { kIdentity, kMds, kHamming, kSimplex, kRatehalf };

/// Parameters of one of the built-in code families.
///   identity(n); mds(q, n, k); hamming(q, redundancy); simplex(q, k);
///   ratehalf(k) -- the binary k x 2k construction, k >= 3.
struct FamilySpec {
  FamilyKind kind = FamilyKind::kIdentity;
  uint64_t q = 2;
  int n = 0;           // identity / mds length
  int k = 0;           // mds / simplex / ratehalf dimension
  int redundancy = 0;  // hamming

  static FamilySpec identity(int n);
  static FamilySpec mds(uint64_t q, int n, int k);
  static FamilySpec hamming(uint64_t q, int redundancy);
  static FamilySpec simplex(uint64_t q, int k);
  static FamilySpec ratehalf(int k);

  void validate() const;  // throws PreconditionError with the violated rule
  int code_length() const;
  int code_dimension() const;
  std::string name() const;
};

/// Deterministic generator matrix of the family:
/// identity -> I_n over GF(2); mds -> systematic GRS on the first n field
/// elements in repr order with unit multipliers; hamming/simplex -> built
/// from normalized projective points in lexicographic repr order, then put
/// in systematic form (column permutation allowed); ratehalf -> columns
/// e_1..e_k, e_1+e_2, ..., e_{k-1}+e_k, e_k+e_1 over GF(2).
GeneratorMatrix family_generator(const FamilySpec& spec);

/// Strand-independent alpha profile from the family's closed form.
AlphaProfile family_alpha(const FamilySpec& spec);

/// MDS profile: alpha(s) = binom(n-1, s-1) for s < k, binom(n, s) for
/// s >= k. Any systematic MDS code, independent of i.
AlphaProfile mds_alpha(int n, int k);

/// Variance of a systematic [n,k] MDS code:
/// 2n(n-k)(H_{n-k-1} - H_{n-1}) + 2nk - (k-1)k.
Rational mds_variance_closed(int n, int k);

/// MDS point mass, closed form: identity-like below k, Stirling form at
/// r >= k. Equals pmf(mds_alpha(n,k), r) exactly.
Rational mds_pmf_closed(int n, int k, long r);

/// Geometric shortcut for the uncoded case: P[tau = r] =
/// ((n-1)/n)^(r-1) / n. Agrees exactly with the generic engine on the
/// identity profile.
Rational identity_pmf_geometric(int n, long r);

/// Minimal-recovery-set census of a q-ary Hamming code with the given
/// redundancy, in closed form; L = q^(redundancy-1) + 1 minimal sets.
XiTable hamming_xi_closed(uint64_t q, int redundancy);

/// Simplex profile via the double Gaussian-binomial sum.
AlphaProfile simplex_alpha(uint64_t q, int k);

enum class BMethod { kRecurrence, kClosed };

/// The B(k, j) table of the rate-1/2 construction; both methods agree for
/// all inputs (recurrence memoized, closed form via the solved recursion).
BigInt ratehalf_B(int k, int j, BMethod method = BMethod::kClosed);

/// Exact E[tau(G_{k x 2k})] = 1 + sum_{j=1}^{2k-3} B(k-1,j) 2k/((2k-j)
/// binom(2k,j)); identical for all strands. Requires k >= 3: at k = 2 the
/// construction's last two columns coincide and the formula leaves its
/// verified domain.
Rational ratehalf_expectation(int k);

/// Closed-form alpha profile of the rate-1/2 construction, k >= 3.
AlphaProfile ratehalf_alpha(int k);

struct RatehalfLimit {
  double value;           // (8 sqrt(3) pi - 18) / 27
  std::string decimal;    // >= 25 significant digits
  Rational prior_bound;   // 70318847/74364290, the earlier upper bound
};

/// The limit of E/k for the rate-1/2 construction, to high precision.
RatehalfLimit ratehalf_limit();

/// Parameters of a balanced quasi-arc code: dimension 3, length 3x + 3y.
/// Only the expectation formulas are provided; the generator construction
/// itself is out of scope here.
struct QuasiArcParams {
  long x = 1;
  long y = 0;
  static constexpr int kDimension = 3;
  long length() const { return 3 * (x + y); }
  Rational ratio() const { return make_rational(y, x); }  // eps = y/x
  void validate() const;  // x >= 1, y >= 0
};

/// Finite-parameter quasi-arc expectation; exact rational.
Rational quasiarc_expectation(const QuasiArcParams& params);
Rational quasiarc_expectation(long x, long y);

/// Asymptotic quasi-arc expectation as a function of eps = y/x:
/// (153 + 543e + 805e^2 + 611e^3 + 234e^4 + 36e^5) /
/// (3 (1+e)^2 (2+e) (3+2e)^2), exact for rational eps >= 0.
Rational quasiarc_limit(const Rational& eps);

struct QuasiArcOptimum {
  Rational epsilon;        // midpoint of the final bisection bracket
  Rational minimum;        // quasiarc_limit(epsilon)
  Rational bracket_width;  // <= requested tolerance
};

/// The unique positive stationary point of quasiarc_limit, by bisection of
/// the degree-6 derivative numerator on (0, 4] with exact rational
/// evaluation (the polynomial has a non-solvable Galois group, so a
/// certified numeric root is the deliverable). The bracket signs are
/// verified before iterating.
QuasiArcOptimum quasiarc_optimize(const Rational& tolerance);

/// Derivative numerator of quasiarc_limit, exposed for stationarity checks:
/// -261 - 513e - 63e^2 + 583e^3 + 592e^4 + 238e^5 + 36e^6.
Rational quasiarc_derivative_numerator(const Rational& eps);

}  // namespace covdepth
