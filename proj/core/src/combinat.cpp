#include "covdepth/combinat.hpp"

#include <vector>

#include "covdepth/errors.hpp"

namespace covdepth {

Rational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw PreconditionError("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw ParseError("empty rational literal");
  // Scientific notation: mantissa e exponent.
  auto epos = text.find_first_of("eE");
  if (epos != std::string::npos && text.find('/') == std::string::npos) {
    std::string mant = text.substr(0, epos);
    std::string expo = text.substr(epos + 1);
    if (mant.empty() || expo.empty())
      throw ParseError("bad rational: " + text);
    long e;
    try {
      size_t used = 0;
      e = std::stol(expo, &used);
      if (used != expo.size()) throw std::invalid_argument(expo);
    } catch (const std::exception&) {
      throw ParseError("bad exponent: " + text);
    }
    Rational base = parse_rational(mant);
    BigInt scale = int_pow(10, (unsigned long)(e < 0 ? -e : e));
    return e < 0 ? Rational(base / Rational(scale))
                 : Rational(base * Rational(scale));
  }
  auto dot = text.find('.');
  try {
    if (dot == std::string::npos) {
      Rational r;
      if (r.set_str(text, 10) != 0) throw ParseError("bad rational: " + text);
      if (r.get_den() == 0) throw ParseError("zero denominator: " + text);
      r.canonicalize();
      return r;
    }
    // Decimal literal: digits.frac == (digits*10^f + frac) / 10^f.
    std::string intpart = text.substr(0, dot);
    std::string frac = text.substr(dot + 1);
    if (frac.empty()) frac = "0";
    bool neg = !intpart.empty() && intpart[0] == '-';
    if (neg) intpart = intpart.substr(1);
    if (intpart.empty()) intpart = "0";
    BigInt ip(intpart, 10), fp(frac, 10);  // explicit base; no octal guessing
    if (ip < 0 || fp < 0) throw ParseError("bad decimal: " + text);
    BigInt scale = int_pow(10, frac.size());
    BigInt num = ip * scale + fp;
    if (neg) num = -num;
    return make_rational(num, scale);
  } catch (const std::invalid_argument&) {
    throw ParseError("bad rational: " + text);
  }
}

std::string to_decimal_string(const Rational& value, int digits) {
  if (digits < 0) throw PreconditionError("negative precision");
  BigInt num = value.get_num();
  BigInt den = value.get_den();
  bool neg = num < 0;
  if (neg) num = -num;
  num *= int_pow(10, digits);
  BigInt q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  if (2 * r >= den) q += 1;  // nearest, ties away from zero
  std::string s = q.get_str();
  if (digits > 0) {
    if ((int)s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
    s.insert(s.size() - digits, ".");
  }
  if (neg && q != 0) s.insert(0, "-");
  return s;
}

BigInt int_pow(const BigInt& base, unsigned long e) {
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
  return out;
}

BigInt binom(long a, long b) {
  if (a < 0) throw PreconditionError("binom: a < 0");
  if (b < 0 || b > a) return 0;
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), (unsigned long)a, (unsigned long)b);
  return out;
}

BigInt factorial(long n) {
  if (n < 0) throw PreconditionError("factorial: n < 0");
  BigInt out;
  mpz_fac_ui(out.get_mpz_t(), (unsigned long)n);
  return out;
}

namespace {

// Memoized triangles, grown on demand. Thread-local keeps reads lock-free;
// the tables are tiny (the moment/PMF formulas reach r ~ a few hundred).
BigInt triangle_lookup(std::vector<std::vector<BigInt>>& rows, long r, long s,
                       bool second_kind) {
  while ((long)rows.size() <= r) {
    long m = (long)rows.size();
    std::vector<BigInt> row(m + 1);
    row[0] = 0;
    row[m] = 1;
    for (long j = 1; j < m; ++j) {
      // S(m,j) = j*S(m-1,j) + S(m-1,j-1);  c(m,j) = (m-1)*c(m-1,j) + c(m-1,j-1)
      BigInt mult = second_kind ? BigInt(j) : BigInt(m - 1);
      row[j] = mult * rows[m - 1][j] + rows[m - 1][j - 1];
    }
    rows.push_back(std::move(row));
  }
  if (s > r) return 0;
  return rows[r][s];
}

}  // namespace

BigInt stirling2(long r, long s) {
  if (r < 0 || s < 0) throw PreconditionError("stirling2: negative index");
  if (s > r) return 0;
  thread_local std::vector<std::vector<BigInt>> rows{{BigInt(1)}};
  return triangle_lookup(rows, r, s, /*second_kind=*/true);
}

BigInt stirling1_unsigned(long s, long r) {
  if (r < 0 || s < 0) throw PreconditionError("stirling1: negative index");
  if (r > s) return 0;
  thread_local std::vector<std::vector<BigInt>> rows{{BigInt(1)}};
  return triangle_lookup(rows, s, r, /*second_kind=*/false);
}

BigInt gauss_binom(long a, long b, const BigInt& q) {
  if (a < 0) throw PreconditionError("gauss_binom: a < 0");
  if (q < 2) throw PreconditionError("gauss_binom: q < 2");
  if (b < 0 || b > a) return 0;
  if (b > a - b) b = a - b;
  // Product formula (q^a - 1)(q^(a-1) - 1).../((q^b - 1)...); every partial
  // division below is exact because the partial products are themselves
  // Gaussian binomials.
  BigInt out = 1;
  for (long j = 0; j < b; ++j) {
    out *= int_pow(q, (unsigned long)(a - j)) - 1;
    out /= int_pow(q, (unsigned long)(j + 1)) - 1;
  }
  return out;
}

Rational harmonic(long n) {
  if (n < 0) throw PreconditionError("harmonic: n < 0");
  Rational sum = 0;
  for (long j = 1; j <= n; ++j) sum += make_rational(1, j);
  return sum;
}

}  // namespace covdepth
