#include "covdepth/moments.hpp"

#include <algorithm>

#include "covdepth/combinat.hpp"
#include "covdepth/errors.hpp"

namespace covdepth {

Rational expectation(const AlphaProfile& profile) {
  int n = profile.n;
  Rational sum = 0;
  for (int s = 0; s <= n - 1; ++s)
    sum += make_rational(profile.alpha_bar(s), binom(n - 1, s));
  return sum;
}

namespace {

// Derivatives 0..dmax of the product f_1*...*f_s*x^s at x = 1/n, where
// f_j(x) = 1/(1-jx), by running Leibniz over the factors:
//   f_j^(u)(1/n) = u! j^u n^(u+1) / (n-j)^(u+1),
//   (x^s)^(u)(1/n) = s^(u falling) / n^(s-u).
// Every quantity is an exact rational; no numeric differentiation anywhere.
std::vector<Rational> product_derivatives(int n, int s, int dmax) {
  std::vector<Rational> d(dmax + 1, Rational(0));
  d[0] = 1;  // empty product
  std::vector<Rational> g(dmax + 1);
  for (int j = 1; j <= s; ++j) {
    // g[u] = u! j^u n^(u+1) / (n-j)^(u+1); j <= s <= n-1 keeps n-j >= 1.
    for (int u = 0; u <= dmax; ++u)
      g[u] = make_rational(
          factorial(u) * int_pow(j, u) * int_pow(n, u + 1),
          int_pow(n - j, u + 1));
    std::vector<Rational> nd(dmax + 1, Rational(0));
    for (int b = 0; b <= dmax; ++b)
      for (int u = 0; u <= b; ++u)
        nd[b] += Rational(binom(b, u)) * d[u] * g[b - u];
    d = std::move(nd);
  }
  // Final factor x^s.
  for (int u = 0; u <= dmax; ++u) {
    if (u <= s) {
      BigInt falling = 1;
      for (int t = 0; t < u; ++t) falling *= (s - t);
      g[u] = make_rational(falling, int_pow(n, s - u));
    } else {
      g[u] = 0;
    }
  }
  std::vector<Rational> nd(dmax + 1, Rational(0));
  for (int b = 0; b <= dmax; ++b)
    for (int u = 0; u <= b; ++u)
      nd[b] += Rational(binom(b, u)) * d[u] * g[b - u];
  return nd;
}

}  // namespace

Rational moment(const AlphaProfile& profile, int p) {
  if (p < 1) throw PreconditionError("moment order must be >= 1");
  int n = profile.n;
  Rational total = 0;
  for (int s = 0; s <= n - 1; ++s) {
    BigInt abar = profile.alpha_bar(s);
    if (abar == 0) continue;
    auto deriv = product_derivatives(n, s, p - 1);
    // C_l = sum_{b<=l} (1/n)^b {l brace b} D^(b); the (1/n)^b exponent is the
    // one the p = 1 reduction and the geometric closed forms validate.
    Rational inner = 0;
    for (int l = 0; l <= p - 1; ++l) {
      Rational cl = 0;
      for (int b = 0; b <= l; ++b)
        cl += make_rational(stirling2(l, b), int_pow(n, b)) * deriv[b];
      inner += Rational(binom(p, l)) * cl;
    }
    total += Rational(abar) * Rational(factorial(s)) * inner;
  }
  return total;
}

Rational second_moment_closed(const AlphaProfile& profile) {
  int n = profile.n;
  Rational total = 0;
  Rational ratio_sum = 0;  // sum_{l=1..s} l/(n-l), grown incrementally
  for (int s = 0; s <= n - 1; ++s) {
    if (s >= 1) ratio_sum += make_rational(s, n - s);
    BigInt abar = profile.alpha_bar(s);
    if (abar == 0) continue;
    Rational weight = Rational(1 + 2 * s) + 2 * ratio_sum;
    total += make_rational(abar, binom(n - 1, s)) * weight;
  }
  return total;
}

Rational variance(const AlphaProfile& profile) {
  Rational e = expectation(profile);
  return second_moment_closed(profile) - e * e;
}

namespace {

// T_p(x) = sum_{m>=0} m^p x^m = sum_b {p brace b} b! x^b / (1-x)^(b+1).
Rational power_series_full(int p, const Rational& x) {
  Rational total = 0;
  Rational one_minus = 1 - x;
  for (int b = 0; b <= p; ++b) {
    Rational num = Rational(stirling2(p, b) * factorial(b));
    Rational xb = 1;
    for (int t = 0; t < b; ++t) xb *= x;
    Rational denom = 1;
    for (int t = 0; t <= b; ++t) denom *= one_minus;
    total += num * xb / denom;
  }
  return total;
}

}  // namespace

TailSum moment_tailsum(const AlphaProfile& profile, int p,
                       const Rational& eps) {
  if (p < 1) throw PreconditionError("moment order must be >= 1");
  if (eps <= 0) throw PreconditionError("eps must be positive");
  int n = profile.n;

  // Geometric envelope. Each survival term sums s! {r brace s} abar(s)/n^r
  // over s <= n-1; with {r brace s} <= s^r / s! this is at most
  // abar(s) (s/n)^r <= abar(s) rho^r, rho = (n-1)/n. Hence
  //   P(tau > r) <= A rho^r,  A = sum_s abar(s),
  // and the dropped tail after R is at most
  //   A * sum_{r>R} ((r+1)^p - r^p) rho^r,
  // which has the closed form used below via T_p(rho).
  BigInt a_const = survival_envelope_constant(profile);
  if (n == 1) {
    // survival(r) = 0 for r >= 1; the sum is exact after r = 0.
    TailSum out;
    out.lower_sum = survival(profile, 0);  // ((0+1)^p - 0^p) * 1
    out.remainder_bound = 0;
    out.terms = 1;
    return out;
  }
  Rational rho = make_rational(n - 1, n);
  Rational tp = power_series_full(p, rho);

  Rational sum = 0;
  Rational finite = 0;   // sum_{m=0..M} m^p rho^m
  Rational rho_pow = 1;  // rho^M
  TailSum out;
  for (long r = 0;; ++r) {
    BigInt weight = int_pow(r + 1, p) - int_pow(r, p);
    sum += Rational(weight) * survival(profile, r);
    // After including r, the first dropped index is M = r + 1.
    long m = r + 1;
    rho_pow *= rho;  // rho^m
    finite += Rational(int_pow(m, p)) * rho_pow;
    // sum_{r'>=M} ((r'+1)^p - r'^p) rho^r' =
    //   (1/rho - 1) * sum_{t>M} t^p rho^t - M^p rho^M
    Rational tail_m = tp - finite;
    Rational geo =
        (make_rational(1, 1) / rho - 1) * tail_m -
        Rational(int_pow(m, p)) * rho_pow;
    Rational remainder = Rational(a_const) * geo;
    if (remainder <= eps) {
      out.lower_sum = sum;
      out.remainder_bound = remainder;
      out.terms = r + 1;
      return out;
    }
  }
}

Rational pmf(const AlphaProfile& profile, long r) {
  if (r < 1) throw PreconditionError("pmf needs r >= 1");
  int n = profile.n;
  BigInt num = 0;
  long smax = std::min<long>(r, n);
  for (long s = 1; s <= smax; ++s) {
    BigInt bracket = stirling2(r, s) - BigInt(n) * stirling2(r - 1, s);
    num += bracket * factorial(s) * profile.alpha[s];
  }
  return make_rational(num, int_pow(n, (unsigned long)r));
}

PmfTable pmf_table(const AlphaProfile& profile, int rmax) {
  if (rmax < 1) throw PreconditionError("rmax must be >= 1");
  PmfTable table;
  table.rmax = rmax;
  table.mass.reserve(rmax);
  for (int r = 1; r <= rmax; ++r) table.mass.push_back(pmf(profile, r));
  table.tail = survival(profile, rmax);
  return table;
}

MomentReport moment_report(const AlphaProfile& profile, int pmax,
                           std::optional<Rational> tail_eps) {
  if (pmax < 1) throw PreconditionError("pmax must be >= 1");
  MomentReport report;
  report.n = profile.n;
  report.strand = profile.strand;
  for (int p = 1; p <= pmax; ++p)
    report.moments[p] = MomentEntry{moment(profile, p), "closed-form", {}};
  report.variance = variance(profile);
  if (tail_eps) {
    for (int p = 1; p <= pmax; ++p) {
      TailSum ts = moment_tailsum(profile, p, *tail_eps);
      report.tail_checks[p] =
          MomentEntry{ts.lower_sum, "tail-sum", ts.remainder_bound};
    }
  }
  return report;
}

}  // namespace covdepth
