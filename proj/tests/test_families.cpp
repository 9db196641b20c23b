#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "covdepth/combinat.hpp"
#include "covdepth/errors.hpp"
#include "covdepth/families.hpp"
#include "covdepth/moments.hpp"

using namespace covdepth;

namespace {

bool close_to(const Rational& v, const char* decimal) {
  return rat_abs(v - parse_rational(decimal)) <= make_rational(5, 10000);
}

// Reference implementation of the finite quasi-arc expectation: term-by-term
// rational sums, independent of the production accumulation scheme.
Rational quasiarc_reference(long x, long y) {
  long n = 3 * x + 3 * y;
  Rational e = 3;
  e += make_rational(2, n - 2);
  e -= make_rational(y - 1, n - 1);
  BigInt bulk = 2 * (BigInt(x) * y + binom(x, 2)) +
                BigInt(y) * (3 * x + 2 * y) + BigInt(y) * (y - 1) / 2;
  e -= make_rational(bulk, binom(n - 1, 2));
  for (long s = 3; s <= x + 2 * y; ++s) {
    Rational prod = 1;
    for (long j = 0; j <= s - 1; ++j)
      prod *= make_rational(x + 2 * y - j, n - j - 1);
    e += prod;
  }
  for (long s = 3; s <= y + 1; ++s)
    e += Rational(BigInt(2 * x) * binom(y, s - 1)) /
         Rational(binom(n - 1, s));
  return e;
}

}  // namespace

TEST_CASE("family generators") {
  auto rh = family_generator(FamilySpec::ratehalf(3));
  CHECK(rh.rows() == std::vector<std::vector<uint64_t>>{{1, 0, 0, 1, 0, 1},
                                                        {0, 1, 0, 1, 1, 0},
                                                        {0, 0, 1, 0, 1, 1}});
  auto id7 = family_generator(FamilySpec::identity(7));
  CHECK(id7.k() == 7);
  for (int i = 0; i < 7; ++i)
    for (int c = 1; c <= 7; ++c)
      CHECK(id7.entry(i, c) == (uint64_t)(c == i + 1 ? 1 : 0));

  // mds(8,7,3): rank 3 and every 3 columns independent (exhaustive)
  auto mds = family_generator(FamilySpec::mds(8, 7, 3));
  CHECK(mds.k() == 3);
  for (int a = 1; a <= 7; ++a)
    for (int b = a + 1; b <= 7; ++b)
      for (int c = b + 1; c <= 7; ++c) {
        SpanState st(mds);
        st.insert_column(mds, a);
        st.insert_column(mds, b);
        st.insert_column(mds, c);
        CHECK(st.rank() == 3);
      }

  CHECK_THROWS_AS(family_generator(FamilySpec::mds(5, 7, 3)),
                  PreconditionError);  // n > q
}

TEST_CASE("hamming and simplex generators have the right shape") {
  auto ham = family_generator(FamilySpec::hamming(2, 3));
  CHECK(ham.k() == 4);
  CHECK(ham.n() == 7);
  for (int i = 0; i < 4; ++i)
    for (int c = 1; c <= 4; ++c)
      CHECK(ham.entry(i, c) == (uint64_t)(c == i + 1 ? 1 : 0));
  auto sim = family_generator(FamilySpec::simplex(2, 3));
  CHECK(sim.k() == 3);
  CHECK(sim.n() == 7);
  // simplex columns are exactly the 7 distinct nonzero vectors
  std::set<std::vector<uint64_t>> cols;
  for (int c = 1; c <= 7; ++c) cols.insert(sim.column(c));
  CHECK(cols.size() == 7);
}

TEST_CASE("mds alpha closed form") {
  auto p = mds_alpha(7, 3);
  CHECK(p.alpha[2] == 6);
  CHECK(p.alpha[3] == binom(7, 3));
  auto idlike = mds_alpha(5, 5);
  for (int s = 0; s < 5; ++s) CHECK(idlike.alpha[s] == binom(4, s - 1));
  // equals brute force on three parameter sets, every strand
  for (auto spec : {FamilySpec::mds(8, 7, 3), FamilySpec::mds(8, 7, 4),
                    FamilySpec::mds(5, 5, 2)}) {
    auto closed = family_alpha(spec);
    auto m = family_generator(spec);
    for (int i = 1; i <= m.k(); ++i)
      CHECK(alpha_bruteforce(m, i).alpha == closed.alpha);
  }
}

TEST_CASE("mds variance closed form") {
  CHECK(mds_variance_closed(7, 3) == make_rational(22, 15));
  CHECK(close_to(mds_variance_closed(7, 4), "4.100"));
  for (int n = 2; n <= 9; ++n)
    CHECK(mds_variance_closed(n, n) == n * n - n);  // geometric variance
  // equals the engine's variance for all 1 <= k <= n <= 12
  for (int n = 1; n <= 12; ++n)
    for (int k = 1; k <= n; ++k)
      CHECK(mds_variance_closed(n, k) == variance(mds_alpha(n, k)));
}

TEST_CASE("mds pmf closed form") {
  CHECK(mds_pmf_closed(7, 3, 1) == make_rational(1, 7));
  CHECK(close_to(mds_pmf_closed(7, 4, 4), "0.240"));
  CHECK(close_to(mds_pmf_closed(7, 3, 3), "0.455"));
  for (int n = 1; n <= 12; ++n)
    for (int k = 1; k <= n; ++k) {
      auto profile = mds_alpha(n, k);
      for (long r = 1; r <= 20; ++r)
        CHECK(mds_pmf_closed(n, k, r) == pmf(profile, r));
    }
}

TEST_CASE("identity pmf geometric shortcut equals the engine") {
  auto id7 = family_alpha(FamilySpec::identity(7));
  for (long r = 1; r <= 30; ++r) {
    Rational geometric = identity_pmf_geometric(7, r);
    CHECK(geometric == make_rational(int_pow(6, r - 1), int_pow(7, r)));
    CHECK(pmf(id7, r) == geometric);
    CHECK(mds_pmf_closed(7, 7, r) == geometric);
  }
}

TEST_CASE("hamming xi closed form") {
  XiTable xi = hamming_xi_closed(2, 3);
  CHECK(xi.L == 5);  // q^(m-1) + 1
  for (int j = 0; j <= 5; ++j) {
    BigInt row = 0;
    for (int s = 0; s <= xi.n; ++s) row += xi.xi[j][s];
    CHECK(row == binom(5, j));
  }
  // full table equals the brute-force census for every strand
  auto ham = family_generator(FamilySpec::hamming(2, 3));
  for (int i = 1; i <= ham.k(); ++i) {
    XiTable census = xi_from_minimal(minimal_recovery_sets(ham, i), 7);
    CHECK(census.L == xi.L);
    for (int j = 0; j <= xi.L; ++j)
      for (int s = 0; s <= xi.n; ++s) CHECK(census.xi[j][s] == xi.xi[j][s]);
  }
  // a second parameter set: q=3, redundancy 2 ([4,2] ternary Hamming)
  XiTable xi32 = hamming_xi_closed(3, 2);
  CHECK(xi32.L == 4);
  auto ham32 = family_generator(FamilySpec::hamming(3, 2));
  for (int i = 1; i <= ham32.k(); ++i) {
    XiTable census =
        xi_from_minimal(minimal_recovery_sets(ham32, i), ham32.n());
    for (int j = 0; j <= xi32.L; ++j)
      for (int s = 0; s <= xi32.n; ++s)
        CHECK(census.xi[j][s] == xi32.xi[j][s]);
  }
}

TEST_CASE("simplex alpha closed form") {
  auto p = simplex_alpha(2, 3);
  CHECK(p.alpha[1] == 1);  // the systematic column
  CHECK(expectation(p) == 3);
  auto sim = family_generator(FamilySpec::simplex(2, 3));
  for (int i = 1; i <= 3; ++i)
    CHECK(alpha_bruteforce(sim, i).alpha == p.alpha);
  // q = 3, k = 2 cross-check against brute force
  auto p32 = simplex_alpha(3, 2);
  auto sim32 = family_generator(FamilySpec::simplex(3, 2));
  for (int i = 1; i <= 2; ++i)
    CHECK(alpha_bruteforce(sim32, i).alpha == p32.alpha);
}

TEST_CASE("ratehalf B table") {
  for (int k = 0; k <= 10; ++k) {
    CHECK(ratehalf_B(k, 1, BMethod::kRecurrence) == 2 * k + 1);
    CHECK(ratehalf_B(k, 1, BMethod::kClosed) == 2 * k + 1);
    CHECK(ratehalf_B(k, 0, BMethod::kClosed) == 1);
  }
  CHECK(ratehalf_B(2, 2, BMethod::kRecurrence) == 8);  // 3 + 2*3 - 1
  CHECK(ratehalf_B(2, 2, BMethod::kClosed) == 8);
  CHECK(ratehalf_B(0, 0, BMethod::kClosed) == 1);
  CHECK(ratehalf_B(1, 2, BMethod::kClosed) == 1);
  CHECK(ratehalf_B(0, 5, BMethod::kClosed) == 0);
  // recurrence and closed form agree everywhere
  for (int k = 0; k <= 60; ++k)
    for (int j = 0; j <= 2 * k; ++j)
      CHECK(ratehalf_B(k, j, BMethod::kRecurrence) ==
            ratehalf_B(k, j, BMethod::kClosed));
}

TEST_CASE("ratehalf expectation") {
  CHECK_THROWS_AS(ratehalf_expectation(2), PreconditionError);
  CHECK(ratehalf_expectation(3) == 3);  // 1 + 1 + 4/5 + 1/5
  // three-way agreement: brute force, closed alpha, B-formula
  for (int k = 3; k <= 8; ++k) {
    auto m = family_generator(FamilySpec::ratehalf(k));
    Rational via_brute = expectation(alpha_bruteforce(m, 1));
    Rational via_alpha = expectation(ratehalf_alpha(k));
    Rational via_b = ratehalf_expectation(k);
    CHECK(via_brute == via_alpha);
    CHECK(via_alpha == via_b);
  }
  // closed alpha vs B-formula stays exact well past brute-force reach
  for (int k = 9; k <= 200; ++k)
    CHECK(expectation(ratehalf_alpha(k)) == ratehalf_expectation(k));
}

TEST_CASE("ratehalf alpha closed form") {
  CHECK_THROWS_AS(ratehalf_alpha(2), PreconditionError);
  auto p3 = ratehalf_alpha(3);
  CHECK(p3.alpha[1] == 1);
  CHECK(p3.alpha[6] == 1);
  for (int k = 3; k <= 8; ++k) {
    auto closed = ratehalf_alpha(k);
    closed.validate();
    auto m = family_generator(FamilySpec::ratehalf(k));
    for (int i = 1; i <= k; ++i)
      CHECK(alpha_bruteforce(m, i).alpha == closed.alpha);
  }
}

TEST_CASE("ratehalf limit constant") {
  RatehalfLimit lim = ratehalf_limit();
  CHECK(lim.value == doctest::Approx(0.9455994349).epsilon(1e-9));
  CHECK(lim.decimal.substr(0, 17) == "0.945599434874860");
  CHECK(lim.value < lim.prior_bound.get_d());
  CHECK(lim.prior_bound == make_rational(70318847, 74364290));
  // 27 v + 18 = 8 sqrt(3) pi to working precision
  double lhs = 27 * lim.value + 18;
  double rhs = 8 * std::sqrt(3.0) * 3.14159265358979323846;
  CHECK(std::abs(lhs - rhs) < 1e-12);
}

TEST_CASE("l_k decreases toward the limit") {
  RatehalfLimit lim = ratehalf_limit();
  Rational limit_lower =
      parse_rational("0.945599434874");  // safe lower bound on the constant
  Rational prev = 2;
  for (int k = 3; k <= 64; ++k) {
    Rational lk = ratehalf_expectation(k) / k;
    CHECK(lk < prev);
    CHECK(lk > limit_lower);
    prev = lk;
  }
  (void)lim;
}

TEST_CASE("quasiarc expectation") {
  CHECK_THROWS_AS(quasiarc_expectation(0, 1), PreconditionError);
  // exact rational, matching the term-by-term reference implementation
  for (auto [x, y] : std::vector<std::pair<long, long>>{
           {2, 1}, {1, 0}, {3, 5}, {10, 7}, {25, 13}}) {
    CHECK(quasiarc_expectation(x, y) == quasiarc_reference(x, y));
  }
  // convergence toward the eps = 1 limit
  Rational at_big = quasiarc_expectation(1000, 1000);
  CHECK(rat_abs(at_big - make_rational(397, 150)) < make_rational(5, 100));
  // convergence toward the optimizer's regime
  Rational diff =
      rat_abs(quasiarc_expectation(1000, 834) - quasiarc_limit(
          make_rational(834, 1000)));
  CHECK(diff < make_rational(1, 100));
}

TEST_CASE("quasiarc expectation converges monotonically in x") {
  for (auto eps : {make_rational(1, 2), make_rational(1, 1),
                   make_rational(5, 6)}) {
    Rational lim = quasiarc_limit(eps);
    Rational prev_gap = -1;
    for (long x : {10, 100, 1000}) {
      Rational scaled = Rational(x) * eps;
      BigInt yfloor;
      mpz_fdiv_q(yfloor.get_mpz_t(), scaled.get_num().get_mpz_t(),
                 scaled.get_den().get_mpz_t());
      Rational gap = rat_abs(quasiarc_expectation(x, yfloor.get_si()) - lim);
      if (prev_gap >= 0) CHECK(gap < prev_gap);
      prev_gap = gap;
    }
  }
}

TEST_CASE("quasiarc limit") {
  CHECK(quasiarc_limit(make_rational(1, 1)) == make_rational(397, 150));
  CHECK(quasiarc_limit(make_rational(0, 1)) == make_rational(17, 6));
  CHECK(close_to(quasiarc_limit(parse_rational("0.833968")), "2.6446"));
  CHECK_THROWS_AS(quasiarc_limit(make_rational(-1, 2)), PreconditionError);
}

TEST_CASE("quasiarc optimizer") {
  QuasiArcOptimum opt = quasiarc_optimize(parse_rational("1e-10"));
  CHECK(rat_abs(opt.epsilon - parse_rational("0.833968")) <
        parse_rational("1e-4"));
  CHECK(rat_abs(opt.minimum - parse_rational("2.644626")) <
        parse_rational("1e-4"));
  CHECK(opt.bracket_width <= parse_rational("1e-10"));
  // stationarity: the derivative numerator at the returned eps is tiny.
  // |d'| is bounded by ~4000 near the root, so |d(eps*)| <= 4000 * width.
  Rational residual = rat_abs(quasiarc_derivative_numerator(opt.epsilon));
  CHECK(residual <= Rational(4000) * opt.bracket_width);
  CHECK_THROWS_AS(quasiarc_optimize(Rational(0)), PreconditionError);
}

TEST_CASE("family spec validation") {
  CHECK_THROWS_AS(FamilySpec::ratehalf(2), PreconditionError);
  CHECK_THROWS_AS(FamilySpec::mds(8, 9, 3), PreconditionError);
  CHECK_THROWS_AS(FamilySpec::mds(6, 5, 2), PreconditionError);  // 6 not p^m
  CHECK_THROWS_AS(FamilySpec::hamming(2, 1), PreconditionError);
  CHECK(FamilySpec::hamming(2, 3).code_length() == 7);
  CHECK(FamilySpec::hamming(2, 3).code_dimension() == 4);
  CHECK(FamilySpec::simplex(3, 3).code_length() == 13);
  CHECK(FamilySpec::ratehalf(5).code_length() == 10);
}
