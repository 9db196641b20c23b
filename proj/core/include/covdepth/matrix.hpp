#pragma once

#include <cstdint>
#include <vector>

#include "covdepth/field.hpp"

namespace covdepth {

/// Rank over F_q of an arbitrary rectangular array (rows of raw element
/// representations). Throws on ragged input or reprs out of [0, q).
int matrix_rank(const FieldSpec& spec,
                const std::vector<std::vector<uint64_t>>& rows);

/// A rank-k generator matrix over F_q with columns indexed 1..n.
/// Immutable after construction; rank k is enforced, 1 <= k <= n <= 64.
class GeneratorMatrix {
 public:
  static constexpr int kMaxColumns = 64;  // subset masks fit machine words

  static GeneratorMatrix create(const FieldSpec& spec,
                                const std::vector<std::vector<uint64_t>>& rows);

  const FieldSpec& spec() const { return spec_; }
  int k() const { return k_; }
  int n() const { return n_; }
  /// Entry in row r (0-based), column c (1-based), as raw representation.
  uint64_t entry(int r, int c) const { return entries_[r * n_ + (c - 1)]; }
  /// Column c (1-based) as a length-k vector of raw representations.
  std::vector<uint64_t> column(int c) const;

  std::vector<std::vector<uint64_t>> rows() const;

 private:
  GeneratorMatrix(FieldSpec spec, int k, int n, std::vector<uint64_t> entries)
      : spec_(std::move(spec)), k_(k), n_(n), entries_(std::move(entries)) {}
  FieldSpec spec_;
  int k_;
  int n_;
  std::vector<uint64_t> entries_;  // row-major k*n
};

/// Incremental Gaussian-elimination state over F_q^k: insert vectors one at
/// a time (O(k^2) each) and query span membership. Single-owner mutable
/// value; cheap to copy, so subset enumeration can share prefix states.
class SpanState {
 public:
  SpanState(FieldSpec spec, int k);
  explicit SpanState(const GeneratorMatrix& m);

  /// Inserts column c (1-based) of the matrix this state was built from.
  void insert_column(const GeneratorMatrix& m, int c);
  /// Inserts an arbitrary length-k vector of raw representations.
  void insert(const std::vector<uint64_t>& v);

  int rank() const { return rank_; }
  /// True iff the standard basis vector e_i (i 1-based) is in the span.
  /// O(1): maintained as a bitmask of recovered unit vectors.
  bool contains_unit(int i) const { return (units_ >> (i - 1)) & 1; }
  uint64_t unit_mask() const { return units_; }
  /// True iff v lies in the span of the inserted vectors.
  bool contains(const std::vector<uint64_t>& v) const;

 private:
  void reduce(std::vector<uint64_t>& v) const;
  void refresh_units();
  FieldSpec spec_;
  int k_;
  int rank_;
  uint64_t units_;                  // bit i-1 set <=> e_i in span
  std::vector<uint64_t> basis_;     // rank_ rows of length k_, RREF
  std::vector<int> pivots_;         // pivot column of each basis row
};

/// True iff v is in the F_q-span of the selected columns (indices 1-based,
/// duplicates irrelevant). v must have length k.
bool span_contains(const GeneratorMatrix& m, const std::vector<int>& cols,
                   const std::vector<uint64_t>& v);

struct SystematicForm {
  GeneratorMatrix matrix;
  /// permutation[t] = 1-based index of the input column now at position t+1.
  std::vector<int> permutation;
};

/// Row-reduces m so its first k columns are the identity. If the leading k
/// columns are dependent: throws unless allow_column_permutation, in which
/// case pivot columns are moved to the front (stable) and the applied
/// permutation is returned.
SystematicForm systematic_form(const GeneratorMatrix& m,
                               bool allow_column_permutation);

/// Basis of the right null space of the given array, as rows. Used to pass
/// from a parity-check matrix to a generator matrix.
std::vector<std::vector<uint64_t>> null_space(
    const FieldSpec& spec, const std::vector<std::vector<uint64_t>>& rows);

}  // namespace covdepth
