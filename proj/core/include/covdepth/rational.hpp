#pragma once

#include <gmpxx.h>

#include <string>

namespace covdepth {

// Arbitrary-precision carriers for all counts, probabilities and moments.
// GMP keeps rationals canonical (positive denominator, gcd(num, den) = 1)
// after every arithmetic operation; constructors from raw num/den go
// through make_rational below, which canonicalizes explicitly.
using BigInt = mpz_class;
using Rational = mpq_class;

/// Canonical rational num/den. Throws PreconditionError on den == 0.
Rational make_rational(const BigInt& num, const BigInt& den);

/// Parses "3", "-22/15" or a decimal literal like "0.834" into an exact
/// rational. Throws ParseError on malformed input.
Rational parse_rational(const std::string& text);

/// Correctly rounded fixed-point rendering with `digits` fractional digits
/// (round to nearest, ties away from zero). digits == 0 renders an integer.
std::string to_decimal_string(const Rational& value, int digits);

/// Absolute value.
inline Rational rat_abs(const Rational& v) { return v < 0 ? Rational(-v) : v; }

/// a^e for e >= 0.
BigInt int_pow(const BigInt& base, unsigned long e);

}  // namespace covdepth
