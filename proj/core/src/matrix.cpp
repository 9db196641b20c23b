#include "covdepth/matrix.hpp"

#include <algorithm>
#include <numeric>

#include "covdepth/errors.hpp"

namespace covdepth {

namespace {

void check_rows(const FieldSpec& spec,
                const std::vector<std::vector<uint64_t>>& rows) {
  if (rows.empty()) throw PreconditionError("empty matrix");
  size_t n = rows[0].size();
  if (n == 0) throw PreconditionError("matrix with zero columns");
  for (const auto& r : rows) {
    if (r.size() != n) throw PreconditionError("ragged matrix rows");
    for (uint64_t e : r)
      if (e >= spec.q())
        throw PreconditionError("matrix entry out of [0, q)");
  }
}

}  // namespace

int matrix_rank(const FieldSpec& spec,
                const std::vector<std::vector<uint64_t>>& rows) {
  check_rows(spec, rows);
  SpanState state(spec, (int)rows[0].size());
  for (const auto& r : rows) state.insert(r);
  return state.rank();
}

GeneratorMatrix GeneratorMatrix::create(
    const FieldSpec& spec, const std::vector<std::vector<uint64_t>>& rows) {
  check_rows(spec, rows);
  int k = (int)rows.size();
  int n = (int)rows[0].size();
  if (n > kMaxColumns) throw PreconditionError("matrix wider than 64 columns");
  if (k > n) throw PreconditionError("generator matrix needs k <= n");
  if (matrix_rank(spec, rows) != k)
    throw PreconditionError("generator matrix must have rank k");
  std::vector<uint64_t> entries;
  entries.reserve((size_t)k * n);
  for (const auto& r : rows) entries.insert(entries.end(), r.begin(), r.end());
  return GeneratorMatrix(spec, k, n, std::move(entries));
}

std::vector<uint64_t> GeneratorMatrix::column(int c) const {
  if (c < 1 || c > n_) throw PreconditionError("column index out of range");
  std::vector<uint64_t> v((size_t)k_);
  for (int r = 0; r < k_; ++r) v[r] = entries_[r * n_ + (c - 1)];
  return v;
}

std::vector<std::vector<uint64_t>> GeneratorMatrix::rows() const {
  std::vector<std::vector<uint64_t>> out(k_);
  for (int r = 0; r < k_; ++r)
    out[r].assign(entries_.begin() + (size_t)r * n_,
                  entries_.begin() + (size_t)(r + 1) * n_);
  return out;
}

SpanState::SpanState(FieldSpec spec, int k)
    : spec_(std::move(spec)), k_(k), rank_(0), units_(0) {
  if (k < 1 || k > 64) throw PreconditionError("span state dimension");
  basis_.reserve((size_t)k * k);
  pivots_.reserve(k);
}

SpanState::SpanState(const GeneratorMatrix& m) : SpanState(m.spec(), m.k()) {}

void SpanState::insert_column(const GeneratorMatrix& m, int c) {
  insert(m.column(c));
}

void SpanState::reduce(std::vector<uint64_t>& v) const {
  for (int b = 0; b < rank_; ++b) {
    uint64_t coeff = v[pivots_[b]];
    if (coeff == 0) continue;
    const uint64_t* row = &basis_[(size_t)b * k_];
    for (int j = 0; j < k_; ++j)
      if (row[j]) v[j] = spec_.sub(v[j], spec_.mul(coeff, row[j]));
  }
}

void SpanState::insert(const std::vector<uint64_t>& v) {
  if ((int)v.size() != k_) throw PreconditionError("vector length != k");
  if (rank_ == k_) return;  // already the full space
  std::vector<uint64_t> w = v;
  reduce(w);
  int pivot = -1;
  for (int j = 0; j < k_; ++j)
    if (w[j]) {
      pivot = j;
      break;
    }
  if (pivot < 0) return;  // dependent
  uint64_t scale = spec_.inv(w[pivot]);
  for (int j = 0; j < k_; ++j)
    if (w[j]) w[j] = spec_.mul(w[j], scale);
  // Keep full RREF: clear the new pivot column in existing rows.
  for (int b = 0; b < rank_; ++b) {
    uint64_t* row = &basis_[(size_t)b * k_];
    uint64_t coeff = row[pivot];
    if (coeff == 0) continue;
    for (int j = 0; j < k_; ++j)
      if (w[j]) row[j] = spec_.sub(row[j], spec_.mul(coeff, w[j]));
  }
  basis_.insert(basis_.end(), w.begin(), w.end());
  pivots_.push_back(pivot);
  ++rank_;
  refresh_units();
}

void SpanState::refresh_units() {
  // In RREF a unit vector e_i is in the span iff the basis row pivoted at i
  // has singleton support.
  units_ = 0;
  if (rank_ == k_) {
    units_ = (k_ == 64) ? ~0ull : ((1ull << k_) - 1);
    return;
  }
  for (int b = 0; b < rank_; ++b) {
    const uint64_t* row = &basis_[(size_t)b * k_];
    bool unit = true;
    for (int j = 0; j < k_ && unit; ++j)
      if (row[j] != 0 && j != pivots_[b]) unit = false;
    if (unit) units_ |= 1ull << pivots_[b];
  }
}

bool SpanState::contains(const std::vector<uint64_t>& v) const {
  if ((int)v.size() != k_) throw PreconditionError("vector length != k");
  std::vector<uint64_t> w = v;
  reduce(w);
  return std::all_of(w.begin(), w.end(), [](uint64_t x) { return x == 0; });
}

bool span_contains(const GeneratorMatrix& m, const std::vector<int>& cols,
                   const std::vector<uint64_t>& v) {
  if ((int)v.size() != m.k()) throw PreconditionError("vector length != k");
  SpanState state(m);
  for (int c : cols) state.insert_column(m, c);
  return state.contains(v);
}

namespace {

// Returns RREF rows and their pivot columns (0-based), dropping zero rows.
std::pair<std::vector<std::vector<uint64_t>>, std::vector<int>> rref(
    const FieldSpec& spec, std::vector<std::vector<uint64_t>> rows) {
  int k = (int)rows.size();
  int n = (int)rows[0].size();
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < n && r < k; ++c) {
    int sel = -1;
    for (int i = r; i < k; ++i)
      if (rows[i][c]) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    std::swap(rows[r], rows[sel]);
    uint64_t scale = spec.inv(rows[r][c]);
    for (int j = 0; j < n; ++j) rows[r][j] = spec.mul(rows[r][j], scale);
    for (int i = 0; i < k; ++i) {
      if (i == r || rows[i][c] == 0) continue;
      uint64_t coeff = rows[i][c];
      for (int j = 0; j < n; ++j)
        rows[i][j] = spec.sub(rows[i][j], spec.mul(coeff, rows[r][j]));
    }
    pivots.push_back(c);
    ++r;
  }
  rows.resize(pivots.size());
  return {std::move(rows), std::move(pivots)};
}

}  // namespace

SystematicForm systematic_form(const GeneratorMatrix& m,
                               bool allow_column_permutation) {
  auto [rows, pivots] = rref(m.spec(), m.rows());
  int k = m.k(), n = m.n();
  bool leading = true;
  for (int i = 0; i < k; ++i)
    if (pivots[i] != i) leading = false;
  std::vector<int> perm(n);
  if (leading) {
    std::iota(perm.begin(), perm.end(), 1);
    return {GeneratorMatrix::create(m.spec(), rows), std::move(perm)};
  }
  if (!allow_column_permutation)
    throw PreconditionError(
        "leading k columns are dependent; systematic form needs a column "
        "permutation");
  // Pivot columns to the front (in order), the rest after (stable).
  std::vector<bool> is_pivot(n, false);
  for (int c : pivots) is_pivot[c] = true;
  std::vector<int> order;
  order.reserve(n);
  for (int c : pivots) order.push_back(c);
  for (int c = 0; c < n; ++c)
    if (!is_pivot[c]) order.push_back(c);
  std::vector<std::vector<uint64_t>> out(k, std::vector<uint64_t>(n));
  for (int i = 0; i < k; ++i)
    for (int t = 0; t < n; ++t) out[i][t] = rows[i][order[t]];
  for (int t = 0; t < n; ++t) perm[t] = order[t] + 1;
  return {GeneratorMatrix::create(m.spec(), out), std::move(perm)};
}

std::vector<std::vector<uint64_t>> null_space(
    const FieldSpec& spec, const std::vector<std::vector<uint64_t>>& in) {
  check_rows(spec, in);
  auto [rows, pivots] = rref(spec, in);
  int n = (int)in[0].size();
  std::vector<bool> is_pivot(n, false);
  for (int c : pivots) is_pivot[c] = true;
  std::vector<std::vector<uint64_t>> basis;
  for (int f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    std::vector<uint64_t> v(n, 0);
    v[f] = 1;
    for (size_t i = 0; i < pivots.size(); ++i)
      v[pivots[i]] = spec.neg(rows[i][f]);
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace covdepth
