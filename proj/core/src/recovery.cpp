#include "covdepth/recovery.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <thread>

#include "covdepth/combinat.hpp"
#include "covdepth/errors.hpp"

namespace covdepth {

BigInt AlphaProfile::alpha_bar(int s) const {
  if (s < 0 || s > n) throw PreconditionError("alpha_bar index out of range");
  return binom(n, s) - alpha[s];
}

void AlphaProfile::validate() const {
  if ((int)alpha.size() != n + 1) throw Error("alpha profile has wrong size");
  if (alpha[0] != 0) throw Error("alpha[0] must be 0");
  if (alpha[n] != 1) throw Error("alpha[n] must be 1");
  for (int s = 0; s <= n; ++s) {
    if (alpha[s] < 0 || alpha[s] > binom(n, s))
      throw Error("alpha[" + std::to_string(s) + "] out of [0, binom(n,s)]");
  }
  // Every recovery s-set has n-s recovery supersets of size s+1, each
  // counted at most s+1 times.
  for (int s = 0; s < n; ++s) {
    if (BigInt(s + 1) * alpha[s + 1] < BigInt(n - s) * alpha[s])
      throw Error("superset-growth inequality fails at s = " +
                  std::to_string(s));
  }
}

namespace {

// Pascal's triangle in machine words; n <= 63 keeps every subset count
// (total 2^n) inside uint64.
std::vector<std::vector<uint64_t>> pascal_u64(int n) {
  std::vector<std::vector<uint64_t>> p(n + 1);
  for (int a = 0; a <= n; ++a) {
    p[a].resize(a + 1);
    p[a][0] = p[a][a] = 1;
    for (int b = 1; b < a; ++b) p[a][b] = p[a - 1][b - 1] + p[a - 1][b];
  }
  return p;
}

struct EnumContext {
  const GeneratorMatrix& m;
  int strand;
  int n;
  const std::vector<std::vector<uint64_t>>& pascal;
};

// Depth-first walk of the subset lattice in increasing column order. The
// state of the parent subset is shared across its children; once e_strand
// enters the span every superset drawn from the remaining tail is a
// recovery set, so the whole subtree is added combinatorially and not
// walked.
void count_dfs(const EnumContext& ctx, const SpanState& state, int next,
               int size, std::vector<uint64_t>& counts) {
  for (int j = next; j <= ctx.n; ++j) {
    SpanState child = state;
    child.insert_column(ctx.m, j);
    if (child.contains_unit(ctx.strand)) {
      int rem = ctx.n - j;
      for (int t = 0; t <= rem; ++t)
        counts[size + 1 + t] += ctx.pascal[rem][t];
    } else {
      count_dfs(ctx, child, j + 1, size + 1, counts);
    }
  }
}

void check_strand(const GeneratorMatrix& m, int strand) {
  if (strand < 1 || strand > m.k())
    throw PreconditionError("strand index out of [1, k]");
}

}  // namespace

AlphaProfile alpha_bruteforce(const GeneratorMatrix& m, int strand,
                              const BruteForceOptions& opts) {
  check_strand(m, strand);
  if (opts.cap < 1 || opts.cap > 63)
    throw PreconditionError("brute-force cap must be in [1, 63]");
  if (m.n() > opts.cap)
    throw PreconditionError("n exceeds brute-force cap (" +
                            std::to_string(opts.cap) + ")");
  int n = m.n();
  auto pascal = pascal_u64(n);
  EnumContext ctx{m, strand, n, pascal};

  int threads = std::max(1, opts.threads);
  std::vector<std::vector<uint64_t>> partial(
      n + 1, std::vector<uint64_t>(n + 1, 0));
  // Partition on the first chosen column: the subtrees rooted at {j0} are
  // independent; exact integer merges make the result thread-count
  // invariant.
  auto run_root = [&](int j0, std::vector<uint64_t>& counts) {
    SpanState root(m);
    root.insert_column(m, j0);
    if (root.contains_unit(strand)) {
      int rem = n - j0;
      for (int t = 0; t <= rem; ++t) counts[1 + t] += pascal[rem][t];
    } else {
      count_dfs(ctx, root, j0 + 1, 1, counts);
    }
  };
  if (threads == 1) {
    for (int j0 = 1; j0 <= n; ++j0) run_root(j0, partial[j0]);
  } else {
    std::atomic<int> cursor{1};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&]() {
        for (int j0 = cursor.fetch_add(1); j0 <= n;
             j0 = cursor.fetch_add(1))
          run_root(j0, partial[j0]);
      });
    for (auto& th : pool) th.join();
  }

  AlphaProfile profile;
  profile.n = n;
  profile.strand = strand;
  profile.alpha.assign(n + 1, 0);
  for (int j0 = 1; j0 <= n; ++j0)
    for (int s = 0; s <= n; ++s)
      profile.alpha[s] += BigInt((unsigned long)partial[j0][s]);
#ifndef NDEBUG
  profile.validate();
#endif
  return profile;
}

BigInt beta_of(const AlphaProfile& profile, long r) {
  if (r < 0) throw PreconditionError("beta_of: r < 0");
  BigInt sum = 0;
  long smax = std::min<long>(r, profile.n);
  for (long s = 1; s <= smax; ++s)
    sum += stirling2(r, s) * factorial(s) * profile.alpha[s];
  return sum;
}

AlphaProfile alpha_from_beta(const std::vector<BigInt>& betas, int n,
                             int strand) {
  if ((int)betas.size() < n)
    throw PreconditionError("need betas for r = 1..n");
  AlphaProfile profile;
  profile.n = n;
  profile.strand = strand;
  profile.alpha.assign(n + 1, 0);
  for (int s = 1; s <= n; ++s) {
    BigInt acc = 0;
    for (int r = 1; r <= s; ++r) {
      BigInt term = stirling1_unsigned(s, r) * betas[r - 1];
      if ((s - r) % 2 == 1)
        acc -= term;
      else
        acc += term;
    }
    BigInt fac = factorial(s);
    if (!mpz_divisible_p(acc.get_mpz_t(), fac.get_mpz_t()))
      throw PreconditionError(
          "inconsistent betas: alpha[" + std::to_string(s) +
          "] is not integral");
    profile.alpha[s] = acc / fac;
  }
  return profile;
}

Rational survival(const AlphaProfile& profile, long r) {
  if (r < 0) throw PreconditionError("survival: r < 0");
  int n = profile.n;
  BigInt num = 0;
  long smax = std::min<long>(r, n);
  for (long s = 0; s <= smax; ++s)
    num += factorial(s) * stirling2(r, s) * profile.alpha_bar((int)s);
  return make_rational(num, int_pow(n, (unsigned long)r));
}

BigInt survival_envelope_constant(const AlphaProfile& profile) {
  BigInt a = 0;
  for (int s = 0; s <= profile.n; ++s) a += profile.alpha_bar(s);
  return a;
}

namespace {

void minimal_dfs(const EnumContext& ctx, const SpanState& state, int next,
                 std::vector<int>& current,
                 std::vector<std::vector<int>>& candidates) {
  for (int j = next; j <= ctx.n; ++j) {
    SpanState child = state;
    child.insert_column(ctx.m, j);
    current.push_back(j);
    if (child.contains_unit(ctx.strand)) {
      candidates.push_back(current);  // minimality checked afterwards
    } else {
      minimal_dfs(ctx, child, j + 1, current, candidates);
    }
    current.pop_back();
  }
}

bool recovers(const GeneratorMatrix& m, int strand,
              const std::vector<int>& cols, int skip_index) {
  SpanState state(m);
  for (size_t t = 0; t < cols.size(); ++t) {
    if ((int)t == skip_index) continue;
    state.insert_column(m, cols[t]);
  }
  return state.contains_unit(strand);
}

}  // namespace

std::vector<std::vector<int>> minimal_recovery_sets(const GeneratorMatrix& m,
                                                    int strand, int cap) {
  check_strand(m, strand);
  if (m.n() > cap)
    throw PreconditionError("n exceeds enumeration cap (" +
                            std::to_string(cap) + ")");
  auto pascal = pascal_u64(m.n());
  EnumContext ctx{m, strand, m.n(), pascal};
  std::vector<std::vector<int>> candidates;
  std::vector<int> current;
  SpanState empty(m);
  minimal_dfs(ctx, empty, 1, current, candidates);
  // A candidate's proper prefixes are non-recovery by construction; check
  // the remaining one-element deletions.
  std::vector<std::vector<int>> minimal;
  for (const auto& s : candidates) {
    bool ok = true;
    for (size_t t = 0; t + 1 < s.size() && ok; ++t)
      if (recovers(m, strand, s, (int)t)) ok = false;
    if (ok) minimal.push_back(s);
  }
  std::sort(minimal.begin(), minimal.end(),
            [](const std::vector<int>& a, const std::vector<int>& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a < b;
            });
  return minimal;
}

void XiTable::validate() const {
  for (int j = 0; j <= L; ++j) {
    BigInt total = 0;
    for (int s = 0; s <= n; ++s) total += xi[j][s];
    if (total != binom(L, j))
      throw Error("xi row " + std::to_string(j) +
                  " does not sum to binom(L, j)");
  }
}

XiTable xi_from_minimal(const std::vector<std::vector<int>>& sets, int n) {
  int L = (int)sets.size();
  if (L > 25) throw PreconditionError("more than 25 minimal sets (2^L walk)");
  if (n < 1 || n > 64) throw PreconditionError("bad column count");
  std::vector<uint64_t> masks(L, 0);
  for (int h = 0; h < L; ++h)
    for (int c : sets[h]) {
      if (c < 1 || c > n) throw PreconditionError("column index out of range");
      masks[h] |= 1ull << (c - 1);
    }
  std::vector<std::vector<uint64_t>> tally(
      L + 1, std::vector<uint64_t>(n + 1, 0));
  // Include/exclude walk over the L sets carrying the running union.
  auto walk = [&](auto&& self, int h, int chosen, uint64_t uni) -> void {
    if (h == L) {
      tally[chosen][std::popcount(uni)] += 1;
      return;
    }
    self(self, h + 1, chosen, uni);
    self(self, h + 1, chosen + 1, uni | masks[h]);
  };
  walk(walk, 0, 0, 0);
  XiTable table;
  table.L = L;
  table.n = n;
  table.xi.assign(L + 1, std::vector<BigInt>(n + 1, 0));
  for (int j = 0; j <= L; ++j)
    for (int s = 0; s <= n; ++s)
      table.xi[j][s] = BigInt((unsigned long)tally[j][s]);
  return table;
}

AlphaProfile alpha_from_xi(const XiTable& table, int n) {
  if (table.n > n) throw PreconditionError("xi table wider than n");
  AlphaProfile profile;
  profile.n = n;
  profile.strand = 0;
  profile.alpha.assign(n + 1, 0);
  for (int s = 1; s <= n; ++s) {
    BigInt acc = 0;
    for (int j = 1; j <= table.L; ++j) {
      BigInt inner = 0;
      for (int t = 1; t <= std::min(s, table.n); ++t)
        inner += binom(n - t, s - t) * table.xi[j][t];
      if (j % 2 == 0)
        acc -= inner;
      else
        acc += inner;
    }
    if (acc < 0 || acc > binom(n, s))
      throw PreconditionError("inconsistent xi table: alpha[" +
                              std::to_string(s) + "] out of range");
    profile.alpha[s] = acc;
  }
  return profile;
}

}  // namespace covdepth
