#include "covdepth/families.hpp"

#include <mpfr.h>

#include <algorithm>
#include <map>
#include <utility>

#include "covdepth/combinat.hpp"
#include "covdepth/errors.hpp"

namespace covdepth {

namespace {

// q = p^e for prime p, or throws.
std::pair<uint64_t, unsigned> factor_prime_power(uint64_t q) {
  if (q < 2) throw PreconditionError("field order must be >= 2");
  for (uint64_t p = 2; p * p <= q; ++p) {
    if (q % p) continue;
    unsigned e = 0;
    uint64_t rest = q;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    if (rest != 1) throw PreconditionError("field order is not a prime power");
    return {p, e};
  }
  return {q, 1};  // q itself prime
}

FieldSpec field_of_order(uint64_t q) {
  auto [p, e] = factor_prime_power(q);
  return FieldSpec::make(p, e);
}

long projective_length(uint64_t q, int dim) {
  BigInt n = (int_pow(q, dim) - 1) / BigInt((unsigned long)(q - 1));
  return n.get_si();
}

// All projective points of F_q^dim, normalized so the first nonzero
// coordinate is 1, in lexicographic order of the coordinate vectors.
std::vector<std::vector<uint64_t>> projective_points(const FieldSpec& field,
                                                     int dim) {
  uint64_t q = field.q();
  std::vector<std::vector<uint64_t>> points;
  std::vector<uint64_t> coords(dim, 0);
  auto gen = [&](auto&& self, int pos, bool leading_seen) -> void {
    if (pos == dim) {
      if (leading_seen) points.push_back(coords);
      return;
    }
    if (!leading_seen) {
      coords[pos] = 0;
      self(self, pos + 1, false);
      coords[pos] = 1;  // leading coefficient normalized to 1
      self(self, pos + 1, true);
      coords[pos] = 0;
    } else {
      for (uint64_t c = 0; c < q; ++c) {
        coords[pos] = c;
        self(self, pos + 1, true);
      }
      coords[pos] = 0;
    }
  };
  gen(gen, 0, false);
  std::sort(points.begin(), points.end());
  return points;
}

}  // namespace

FamilySpec FamilySpec::identity(int n) {
  FamilySpec s;
  s.kind = FamilyKind::kIdentity;
  s.n = n;
  s.k = n;
  s.validate();
  return s;
}

FamilySpec FamilySpec::mds(uint64_t q, int n, int k) {
  FamilySpec s;
  s.kind = FamilyKind::kMds;
  s.q = q;
  s.n = n;
  s.k = k;
  s.validate();
  return s;
}

FamilySpec FamilySpec::hamming(uint64_t q, int redundancy) {
  FamilySpec s;
  s.kind = FamilyKind::kHamming;
  s.q = q;
  s.redundancy = redundancy;
  s.validate();
  s.n = (int)projective_length(q, redundancy);
  s.k = s.n - redundancy;
  return s;
}

FamilySpec FamilySpec::simplex(uint64_t q, int k) {
  FamilySpec s;
  s.kind = FamilyKind::kSimplex;
  s.q = q;
  s.k = k;
  s.validate();
  s.n = (int)projective_length(q, k);
  return s;
}

FamilySpec FamilySpec::ratehalf(int k) {
  FamilySpec s;
  s.kind = FamilyKind::kRatehalf;
  s.q = 2;
  s.k = k;
  s.n = 2 * k;
  s.validate();
  return s;
}

void FamilySpec::validate() const {
  switch (kind) {
    case FamilyKind::kIdentity:
      if (n < 1) throw PreconditionError("identity family needs n >= 1");
      break;
    case FamilyKind::kMds:
      factor_prime_power(q);
      if (k < 1 || k > n) throw PreconditionError("mds needs 1 <= k <= n");
      if ((uint64_t)n > q)
        throw PreconditionError("mds needs n <= q (distinct eval points)");
      break;
    case FamilyKind::kHamming:
      factor_prime_power(q);
      if (redundancy < 2)
        throw PreconditionError("hamming needs redundancy >= 2");
      break;
    case FamilyKind::kSimplex:
      factor_prime_power(q);
      if (k < 2) throw PreconditionError("simplex needs k >= 2");
      break;
    case FamilyKind::kRatehalf:
      // At k = 2 the construction's columns e_{k-1}+e_k and e_k+e_1 coincide
      // over GF(2) and the closed forms leave their verified domain.
      if (k < 3) throw PreconditionError("ratehalf needs k >= 3");
      break;
  }
}

int FamilySpec::code_length() const {
  switch (kind) {
    case FamilyKind::kIdentity:
    case FamilyKind::kMds:
      return n;
    case FamilyKind::kHamming:
      return (int)projective_length(q, redundancy);
    case FamilyKind::kSimplex:
      return (int)projective_length(q, k);
    case FamilyKind::kRatehalf:
      return 2 * k;
  }
  return 0;
}

int FamilySpec::code_dimension() const {
  switch (kind) {
    case FamilyKind::kIdentity:
      return n;
    case FamilyKind::kMds:
      return k;
    case FamilyKind::kHamming:
      return code_length() - redundancy;
    case FamilyKind::kSimplex:
    case FamilyKind::kRatehalf:
      return k;
  }
  return 0;
}

std::string FamilySpec::name() const {
  switch (kind) {
    case FamilyKind::kIdentity:
      return "identity(n=" + std::to_string(n) + ")";
    case FamilyKind::kMds:
      return "mds(q=" + std::to_string(q) + ",n=" + std::to_string(n) +
             ",k=" + std::to_string(k) + ")";
    case FamilyKind::kHamming:
      return "hamming(q=" + std::to_string(q) +
             ",m=" + std::to_string(redundancy) + ")";
    case FamilyKind::kSimplex:
      return "simplex(q=" + std::to_string(q) + ",k=" + std::to_string(k) +
             ")";
    case FamilyKind::kRatehalf:
      return "ratehalf(k=" + std::to_string(k) + ")";
  }
  return "?";
}

GeneratorMatrix family_generator(const FamilySpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case FamilyKind::kIdentity: {
      FieldSpec f2 = FieldSpec::make(2, 1);
      std::vector<std::vector<uint64_t>> rows(
          spec.n, std::vector<uint64_t>(spec.n, 0));
      for (int i = 0; i < spec.n; ++i) rows[i][i] = 1;
      return GeneratorMatrix::create(f2, rows);
    }
    case FamilyKind::kMds: {
      FieldSpec field = field_of_order(spec.q);
      // Vandermonde rows on the first n elements in repr order, unit
      // multipliers; distinct points make every k x k minor nonzero, so the
      // leading block is invertible and no permutation is needed.
      std::vector<std::vector<uint64_t>> rows(
          spec.k, std::vector<uint64_t>(spec.n));
      for (int j = 0; j < spec.n; ++j) {
        uint64_t point = (uint64_t)j;
        uint64_t pw = 1;
        for (int r = 0; r < spec.k; ++r) {
          rows[r][j] = pw;
          pw = field.mul(pw, point);
        }
      }
      auto grs = GeneratorMatrix::create(field, rows);
      return systematic_form(grs, /*allow_column_permutation=*/false).matrix;
    }
    case FamilyKind::kHamming: {
      FieldSpec field = field_of_order(spec.q);
      auto points = projective_points(field, spec.redundancy);
      int n = (int)points.size();
      std::vector<std::vector<uint64_t>> check(
          spec.redundancy, std::vector<uint64_t>(n));
      for (int j = 0; j < n; ++j)
        for (int r = 0; r < spec.redundancy; ++r) check[r][j] = points[j][r];
      auto gen_rows = null_space(field, check);
      auto gen = GeneratorMatrix::create(field, gen_rows);
      return systematic_form(gen, /*allow_column_permutation=*/true).matrix;
    }
    case FamilyKind::kSimplex: {
      FieldSpec field = field_of_order(spec.q);
      auto points = projective_points(field, spec.k);
      int n = (int)points.size();
      std::vector<std::vector<uint64_t>> rows(spec.k,
                                              std::vector<uint64_t>(n));
      for (int j = 0; j < n; ++j)
        for (int r = 0; r < spec.k; ++r) rows[r][j] = points[j][r];
      auto gen = GeneratorMatrix::create(field, rows);
      return systematic_form(gen, /*allow_column_permutation=*/true).matrix;
    }
    case FamilyKind::kRatehalf: {
      FieldSpec f2 = FieldSpec::make(2, 1);
      int k = spec.k, n = 2 * k;
      std::vector<std::vector<uint64_t>> rows(k, std::vector<uint64_t>(n, 0));
      for (int i = 0; i < k; ++i) rows[i][i] = 1;
      for (int j = 0; j < k; ++j) {
        rows[j][k + j] = 1;
        rows[(j + 1) % k][k + j] = 1;  // e_j + e_{j+1}, wrapping to e_k+e_1
      }
      return GeneratorMatrix::create(f2, rows);
    }
  }
  throw PreconditionError("unknown family");
}

AlphaProfile family_alpha(const FamilySpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case FamilyKind::kIdentity:
      return mds_alpha(spec.n, spec.n);
    case FamilyKind::kMds:
      return mds_alpha(spec.n, spec.k);
    case FamilyKind::kHamming: {
      int n = spec.code_length();
      return alpha_from_xi(hamming_xi_closed(spec.q, spec.redundancy), n);
    }
    case FamilyKind::kSimplex:
      return simplex_alpha(spec.q, spec.k);
    case FamilyKind::kRatehalf:
      return ratehalf_alpha(spec.k);
  }
  throw PreconditionError("unknown family");
}

AlphaProfile mds_alpha(int n, int k) {
  if (k < 1 || k > n) throw PreconditionError("mds_alpha needs 1 <= k <= n");
  AlphaProfile profile;
  profile.n = n;
  profile.strand = 0;
  profile.alpha.assign(n + 1, 0);
  for (int s = 0; s <= n; ++s)
    profile.alpha[s] = (s < k) ? binom(n - 1, s - 1) : binom(n, s);
#ifndef NDEBUG
  profile.validate();
#endif
  return profile;
}

Rational mds_variance_closed(int n, int k) {
  if (k < 1 || k > n) throw PreconditionError("needs 1 <= k <= n");
  // At k = n the product (n-k) H_{n-k-1} is the indeterminate 0 * H_{-1};
  // along the continuation H_x = psi(x+1) + gamma its limit is -1, so the
  // first term contributes -2n, which matches the geometric variance
  // n^2 - n of the identity code.
  Rational h_term = (k == n)
                        ? Rational(-2 * n)
                        : Rational(2 * n) * Rational(n - k) *
                              (harmonic(n - k - 1) - harmonic(n - 1));
  return h_term + Rational(2 * n * k) - Rational((k - 1) * k);
}

Rational mds_pmf_closed(int n, int k, long r) {
  if (r < 1) throw PreconditionError("r must be >= 1");
  if (k < 1 || k > n) throw PreconditionError("needs 1 <= k <= n");
  if (r < k) {
    // No r < k draws span e_i except by drawing column i last.
    BigInt num = int_pow(n - 1, (unsigned long)(r - 1));
    return make_rational(num, int_pow(n, (unsigned long)r));
  }
  BigInt num = 0;
  for (long l = 1; l <= k - 2; ++l)
    num += binom(n - 1, l) * stirling2(r - 1, l) * factorial(l);
  num += binom(n - 1, k - 1) * stirling2(r - 1, k - 1) *
         BigInt(n - (k - 1)) * factorial(k - 1);
  return make_rational(num, int_pow(n, (unsigned long)r));
}

Rational identity_pmf_geometric(int n, long r) {
  if (n < 1) throw PreconditionError("identity pmf needs n >= 1");
  if (r < 1) throw PreconditionError("r must be >= 1");
  return make_rational(int_pow(n - 1, (unsigned long)(r - 1)),
                       int_pow(n, (unsigned long)r));
}

XiTable hamming_xi_closed(uint64_t q, int redundancy) {
  factor_prime_power(q);
  if (redundancy < 2) throw PreconditionError("redundancy must be >= 2");
  int m = redundancy;
  long n = projective_length(q, m);
  BigInt l_big = int_pow(q, m - 1) + 1;
  long L = l_big.get_si();
  BigInt qb(q);

  // gamma(t, v): number of t-subsets of the q^(m-1) non-singleton minimal
  // sets whose union has size (q^m - q^v)/(q-1) - 1.
  auto gamma = [&](long t, int v) -> BigInt {
    BigInt sum = 0;
    for (int u = v; u <= m - 1; ++u) {
      BigInt term = int_pow(q, u) * gauss_binom(m - 1 - v, u - v, qb) *
                    binom((long)int_pow(q, m - u - 1).get_si(), t) *
                    int_pow(q, (unsigned long)((u - v) * (u - v - 1) / 2));
      if ((u - v) % 2 == 1)
        sum -= term;
      else
        sum += term;
    }
    return gauss_binom(m - 1, v, qb) * sum;
  };

  XiTable table;
  table.L = (int)L;
  table.n = (int)n;
  table.xi.assign(L + 1, std::vector<BigInt>(n + 1, 0));
  table.xi[0][0] = 1;
  // Union sizes split by whether the j-subset contains the singleton {i}:
  // subsets avoiding it land at s = X(v) - 1 with X(v) = (q^m - q^v)/(q-1);
  // subsets containing it add the one extra column, landing at s = X(v).
  for (long j = 1; j <= L; ++j) {
    for (int v = 0; v <= m - 1; ++v) {
      BigInt x_of_v = (int_pow(q, m) - int_pow(q, v)) / BigInt(q - 1);
      long s_low = x_of_v.get_si() - 1;
      long s_high = x_of_v.get_si();
      BigInt g = gamma(j, v);
      if (g < 0)
        throw Error("hamming xi closed form produced a negative count");
      table.xi[j][s_low] += g;
      if (j >= 2) {
        BigInt g2 = gamma(j - 1, v);
        if (g2 < 0)
          throw Error("hamming xi closed form produced a negative count");
        table.xi[j][s_high] += g2;
      }
    }
  }
  table.xi[1][1] += 1;  // the singleton {i} itself
  table.validate();
  return table;
}

AlphaProfile simplex_alpha(uint64_t q, int k) {
  factor_prime_power(q);
  if (k < 2) throw PreconditionError("simplex needs k >= 2");
  long n = projective_length(q, k);
  BigInt qb(q);
  AlphaProfile profile;
  profile.n = (int)n;
  profile.strand = 0;
  profile.alpha.assign(n + 1, 0);
  for (long s = 1; s <= n; ++s) {
    BigInt acc = 0;
    for (int d = 1; d <= std::min<long>(s, k); ++d) {
      BigInt outer = gauss_binom(k - 1, d - 1, qb);
      if (outer == 0) continue;
      BigInt inner = 0;
      for (int r = 1; r <= d; ++r) {
        BigInt term = gauss_binom(d, r, qb) *
                      binom(projective_length(q, r), s) *
                      int_pow(q, (unsigned long)((d - r) * (d - r - 1) / 2));
        if ((d - r) % 2 == 1)
          inner -= term;
        else
          inner += term;
      }
      acc += outer * inner;
    }
    profile.alpha[s] = acc;
  }
#ifndef NDEBUG
  profile.validate();
#endif
  return profile;
}

namespace {

BigInt ratehalf_B_recurrence(int k, int j) {
  if (j == 0) return 1;
  if (j == 1) return 2 * k + 1;
  if (k == 0) return 0;            // j >= 2
  if (k == 1) return j == 2 ? 1 : 0;
  thread_local std::map<std::pair<int, int>, BigInt> memo;
  auto it = memo.find({k, j});
  if (it != memo.end()) return it->second;
  BigInt value = binom(2 * k - 1, j) + 2 * ratehalf_B_recurrence(k - 1, j - 1) -
                 ratehalf_B_recurrence(k - 2, j - 2);
  memo.emplace(std::make_pair(k, j), value);
  return value;
}

BigInt ratehalf_B_closed(int k, int j) {
  BigInt sum = 0;
  int tmax = std::min(k - 1, j - 1);
  for (int t = 1; t <= tmax; ++t)
    sum += binom(2 * (k - t + 1) - 1, j - t + 1) * t;
  // sigma(j, k)
  if (j <= k)
    sum += BigInt((2 * (k - j + 1) + 1)) * j - (j - 1);
  else if (j == k + 1)
    sum += 1;
  return sum;
}

}  // namespace

BigInt ratehalf_B(int k, int j, BMethod method) {
  if (k < 0 || j < 0) throw PreconditionError("B(k,j) needs k, j >= 0");
  return method == BMethod::kRecurrence ? ratehalf_B_recurrence(k, j)
                                        : ratehalf_B_closed(k, j);
}

Rational ratehalf_expectation(int k) {
  if (k < 3) throw PreconditionError("ratehalf expectation needs k >= 3");
  Rational sum = 1;
  for (int j = 1; j <= 2 * k - 3; ++j) {
    BigInt b = ratehalf_B_closed(k - 1, j);
    sum += Rational(b) * make_rational(2 * k, 1) /
           (Rational(2 * k - j) * Rational(binom(2 * k, j)));
  }
  return sum;
}

AlphaProfile ratehalf_alpha(int k) {
  if (k < 3) throw PreconditionError("ratehalf alpha needs k >= 3");
  int n = 2 * k;
  AlphaProfile profile;
  profile.n = n;
  profile.strand = 0;
  profile.alpha.assign(n + 1, 0);
  for (int s = 0; s <= n; ++s) {
    BigInt bracket = binom(2 * k - 1, s);
    for (int l = 2; l <= k; ++l)
      bracket -= 2 * binom(2 * k - 2 * l + 1, s - l);
    for (int j = 4; j <= k + 1; ++j)
      bracket += BigInt(j - 3) * binom(2 * k - 2 * j + 3, s - j);
    if (s == k + 1) bracket += k - 1;
    profile.alpha[s] = binom(n, s) - bracket;
  }
#ifndef NDEBUG
  profile.validate();
#endif
  return profile;
}

RatehalfLimit ratehalfLimit_impl() {
  // (8 sqrt(3) pi - 18) / 27 at 256-bit precision.
  mpfr_t pi, s3, val;
  mpfr_init2(pi, 256);
  mpfr_init2(s3, 256);
  mpfr_init2(val, 256);
  mpfr_const_pi(pi, MPFR_RNDN);
  mpfr_sqrt_ui(s3, 3, MPFR_RNDN);
  mpfr_mul(val, pi, s3, MPFR_RNDN);
  mpfr_mul_ui(val, val, 8, MPFR_RNDN);
  mpfr_sub_ui(val, val, 18, MPFR_RNDN);
  mpfr_div_ui(val, val, 27, MPFR_RNDN);
  RatehalfLimit out;
  out.value = mpfr_get_d(val, MPFR_RNDN);
  char buf[128];
  mpfr_snprintf(buf, sizeof buf, "%.30Rf", val);
  out.decimal = buf;
  out.prior_bound = make_rational(70318847, 74364290);
  mpfr_clears(pi, s3, val, (mpfr_ptr) nullptr);
  return out;
}

RatehalfLimit ratehalf_limit() { return ratehalfLimit_impl(); }

void QuasiArcParams::validate() const {
  if (x < 1 || y < 0)
    throw PreconditionError("quasi-arc needs x >= 1, y >= 0");
}

Rational quasiarc_expectation(const QuasiArcParams& params) {
  return quasiarc_expectation(params.x, params.y);
}

Rational quasiarc_expectation(long x, long y) {
  QuasiArcParams{x, y}.validate();
  long n = 3 * x + 3 * y;
  Rational head = 3;
  head += make_rational(2, n - 2);
  head -= make_rational(y - 1, n - 1);
  BigInt bulk = 2 * (BigInt(x) * y + binom(x, 2)) +
                BigInt(y) * (3 * x + 2 * y) + BigInt(y) * (y - 1) / 2;
  head -= make_rational(bulk, binom(n - 1, 2));

  // First sum: products of (x+2y-j)/(n-j-1) accumulated over the common
  // falling-factorial denominator, one exact division at the end.
  long top = x + 2 * y;
  Rational sum1 = 0;
  {
    BigInt num_acc = 0;   // partial sum scaled by den
    BigInt u = 1;         // running product of numerators
    BigInt den = 1;       // (n-1)(n-2)...(n-s)
    for (long s = 1; s <= top; ++s) {
      u *= (top - (s - 1));
      den *= (n - s);
      num_acc = num_acc * (n - s) + (s >= 3 ? u : 0);
    }
    if (top >= 3) sum1 = make_rational(num_acc, den);
  }

  // Second sum: 2 x binom(y, s-1) / binom(n-1, s), same accumulation with
  // binom(n-1,s) = (n-1)...(n-s)/s!.
  Rational sum2 = 0;
  if (y + 1 >= 3) {
    BigInt num_acc = 0;
    BigInt den = 1;
    BigInt fact = 1;
    for (long s = 1; s <= y + 1; ++s) {
      den *= (n - s);
      fact *= s;
      BigInt term = (s >= 3) ? BigInt(2 * x) * binom(y, s - 1) * fact
                             : BigInt(0);
      num_acc = num_acc * (n - s) + term;
    }
    sum2 = make_rational(num_acc, den);
  }
  return head + sum1 + sum2;
}

Rational quasiarc_limit(const Rational& eps) {
  if (eps < 0) throw PreconditionError("eps must be >= 0");
  // Horner on 36 e^5 + 234 e^4 + 611 e^3 + 805 e^2 + 543 e + 153.
  Rational num = 36;
  for (long c : {234, 611, 805, 543, 153}) num = num * eps + c;
  Rational one_plus = 1 + eps;
  Rational den = 3 * one_plus * one_plus * (2 + eps) * (3 + 2 * eps) *
                 (3 + 2 * eps);
  return num / den;
}

Rational quasiarc_derivative_numerator(const Rational& eps) {
  // 36 e^6 + 238 e^5 + 592 e^4 + 583 e^3 - 63 e^2 - 513 e - 261
  Rational v = 36;
  for (long c : {238, 592, 583, -63, -513, -261}) v = v * eps + c;
  return v;
}

QuasiArcOptimum quasiarc_optimize(const Rational& tolerance) {
  if (tolerance <= 0) throw PreconditionError("tolerance must be positive");
  Rational lo = 0, hi = 4;
  Rational at_lo = quasiarc_derivative_numerator(lo);
  Rational at_hi = quasiarc_derivative_numerator(hi);
  if (!(at_lo < 0 && at_hi > 0))
    throw Error("quasi-arc derivative bracket [0,4] lost its sign change");
  while (hi - lo > tolerance) {
    Rational mid = (lo + hi) / 2;
    Rational v = quasiarc_derivative_numerator(mid);
    if (v == 0) {
      lo = mid;
      hi = mid;
      break;
    }
    (v < 0 ? lo : hi) = mid;
  }
  QuasiArcOptimum out;
  out.epsilon = (lo + hi) / 2;
  out.minimum = quasiarc_limit(out.epsilon);
  out.bracket_width = hi - lo;
  return out;
}

}  // namespace covdepth
