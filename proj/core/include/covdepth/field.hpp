#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace covdepth {

class FieldElement;

/// A finite field F_q, q = p^m. Elements are encoded as integers in [0, q):
/// base-p positional digits are the polynomial coefficients, little-endian
/// (constant term = least significant digit), so GF(8) elements are 0..7
/// and matrix files hold plain integers.
///
/// Immutable value type; copies share the underlying tables. All operations
/// are pure and safe for unrestricted concurrent use.
class FieldSpec {
 public:
  /// Builds F_(p^m). If modulus (m+1 monic coefficients in [0,p), constant
  /// term first) is omitted, (p, m) must appear in the built-in default
  /// table: all prime powers q <= 16 plus q in {25, 27, 32, 64}.
  /// The modulus is verified irreducible by trial division against all
  /// monic polynomials of degree <= m/2.
  static FieldSpec make(uint64_t p, unsigned m,
                        std::optional<std::vector<uint64_t>> modulus = {});

  uint64_t p() const;
  unsigned m() const;
  uint64_t q() const;
  /// Modulus coefficients c0..cm (constant term first). For m == 1 this is
  /// the formal monic polynomial x (coefficients {0, 1}).
  const std::vector<uint64_t>& modulus() const;

  FieldElement element(uint64_t repr) const;
  FieldElement zero() const;
  FieldElement one() const;

  // Arithmetic on raw representations (each in [0, q)).
  uint64_t add(uint64_t a, uint64_t b) const;
  uint64_t sub(uint64_t a, uint64_t b) const;
  uint64_t neg(uint64_t a) const;
  uint64_t mul(uint64_t a, uint64_t b) const;
  uint64_t inv(uint64_t a) const;  // throws on a == 0

  bool operator==(const FieldSpec& other) const;
  bool operator!=(const FieldSpec& other) const { return !(*this == other); }

  /// True when both specs share the same underlying field object, i.e.
  /// their elements may be mixed.
  bool same_instance(const FieldSpec& other) const {
    return impl_.get() == other.impl_.get();
  }

  std::string describe() const;  // e.g. "GF(8) = GF(2^3), modulus x^3+x+1"

 private:
  struct Impl;
  explicit FieldSpec(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
  friend class FieldElement;
};

/// One element of a FieldSpec. Elements from different spec instances never
/// mix: arithmetic between them throws PreconditionError.
class FieldElement {
 public:
  FieldElement() : impl_(nullptr), repr_(0) {}

  uint64_t repr() const { return repr_; }
  FieldSpec spec() const;
  bool is_zero() const { return repr_ == 0; }

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator-() const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement inverse() const;
  FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
  FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }

  bool operator==(const FieldElement& o) const;
  bool operator!=(const FieldElement& o) const { return !(*this == o); }

 private:
  friend class FieldSpec;
  FieldElement(std::shared_ptr<const FieldSpec::Impl> impl, uint64_t repr)
      : impl_(std::move(impl)), repr_(repr) {}
  void require_same(const FieldElement& o) const;
  std::shared_ptr<const FieldSpec::Impl> impl_;
  uint64_t repr_;
};

/// True iff p is prime (deterministic trial division; fields here are small).
bool is_prime(uint64_t p);

}  // namespace covdepth
