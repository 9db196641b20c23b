#pragma once

#include "covdepth/rational.hpp"

namespace covdepth {

/// Binomial coefficient. Zero whenever b < 0 or b > a; a must be >= 0.
BigInt binom(long a, long b);

/// n! for n >= 0.
BigInt factorial(long n);

/// Stirling number of the second kind {r brace s}: partitions of an r-set
/// into s nonempty blocks. Triangle recurrence, memoized.
BigInt stirling2(long r, long s);

/// Unsigned Stirling number of the first kind [s brack r]; the signed value
/// is (-1)^(s-r) times this, applied by callers.
BigInt stirling1_unsigned(long s, long r);

/// Gaussian (q-)binomial coefficient [a choose b]_q via the product formula
/// with exact division. Zero for b < 0 or b > a; q >= 2.
BigInt gauss_binom(long a, long b, const BigInt& q);

/// n-th harmonic number, exactly. harmonic(0) = 0.
Rational harmonic(long n);

}  // namespace covdepth
