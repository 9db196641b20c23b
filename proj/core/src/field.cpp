#include "covdepth/field.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "covdepth/errors.hpp"

namespace covdepth {

bool is_prime(uint64_t p) {
  if (p < 2) return false;
  for (uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

namespace {

constexpr uint64_t kMaxOrder = 1u << 16;   // cap per design: no crypto fields
constexpr uint64_t kTableCap = 256;        // eager mul/inv tables below this

// Built-in moduli (constant term first, monic). Fixed constants so matrices
// are reproducible across runs and platforms.
const std::map<std::pair<uint64_t, unsigned>, std::vector<uint64_t>>&
default_moduli() {
  static const std::map<std::pair<uint64_t, unsigned>, std::vector<uint64_t>>
      table = {
          {{2, 2}, {1, 1, 1}},           // x^2+x+1
          {{2, 3}, {1, 1, 0, 1}},        // x^3+x+1
          {{2, 4}, {1, 1, 0, 0, 1}},     // x^4+x+1
          {{2, 5}, {1, 0, 1, 0, 0, 1}},  // x^5+x^2+1
          {{2, 6}, {1, 1, 0, 0, 0, 0, 1}},  // x^6+x+1
          {{3, 2}, {1, 0, 1}},           // x^2+1
          {{3, 3}, {1, 2, 0, 1}},        // x^3+2x+1
          {{5, 2}, {1, 1, 1}},           // x^2+x+1
      };
  return table;
}

using Poly = std::vector<uint64_t>;  // little-endian coefficients mod p

Poly poly_trim(Poly a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

// a mod b over F_p, b monic nonconstant.
Poly poly_mod(Poly a, const Poly& b, uint64_t p) {
  a = poly_trim(std::move(a));
  size_t db = b.size() - 1;
  while (a.size() > db) {
    uint64_t lead = a.back();
    size_t shift = a.size() - 1 - db;
    if (lead != 0) {
      for (size_t i = 0; i <= db; ++i) {
        uint64_t sub = (b[i] * lead) % p;
        a[i + shift] = (a[i + shift] + p - sub) % p;
      }
    }
    a.pop_back();
    while (!a.empty() && a.back() == 0) a.pop_back();
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& mod, uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly prod(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j)
      prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
  }
  return poly_mod(std::move(prod), mod, p);
}

uint64_t poly_to_repr(const Poly& a, uint64_t p) {
  uint64_t r = 0;
  for (size_t i = a.size(); i-- > 0;) r = r * p + a[i];
  return r;
}

Poly repr_to_poly(uint64_t r, uint64_t p) {
  Poly a;
  while (r) {
    a.push_back(r % p);
    r /= p;
  }
  return a;
}

// Irreducibility by trial division against all monic polys of degree <= m/2.
bool is_irreducible(const Poly& modulus, uint64_t p) {
  unsigned m = (unsigned)modulus.size() - 1;
  for (unsigned d = 1; 2 * d <= m; ++d) {
    uint64_t count = 1;
    for (unsigned i = 0; i < d; ++i) count *= p;  // p^d monic candidates
    for (uint64_t lo = 0; lo < count; ++lo) {
      Poly div = repr_to_poly(lo, p);
      div.resize(d + 1, 0);
      div[d] = 1;
      if (poly_mod(modulus, div, p).empty()) return false;
    }
  }
  return true;
}

}  // namespace

struct FieldSpec::Impl {
  uint64_t p;
  unsigned m;
  uint64_t q;
  std::vector<uint64_t> modulus;
  // Eager multiplication/inverse tables for small q; otherwise computed on
  // the fly, semantics identical.
  std::vector<uint64_t> mul_table;  // q*q entries, or empty
  std::vector<uint64_t> inv_table;  // q entries (inv_table[0] unused)

  uint64_t add(uint64_t a, uint64_t b) const {
    if (m == 1) return (a + b) % p;
    uint64_t out = 0, scale = 1;
    for (unsigned i = 0; i < m; ++i) {
      uint64_t da = a % p, db = b % p;
      a /= p;
      b /= p;
      out += ((da + db) % p) * scale;
      scale *= p;
    }
    return out;
  }

  uint64_t neg(uint64_t a) const {
    if (m == 1) return a == 0 ? 0 : p - a;
    uint64_t out = 0, scale = 1;
    for (unsigned i = 0; i < m; ++i) {
      uint64_t da = a % p;
      a /= p;
      out += (da == 0 ? 0 : p - da) * scale;
      scale *= p;
    }
    return out;
  }

  uint64_t mul_slow(uint64_t a, uint64_t b) const {
    if (m == 1) return (a * b) % p;
    return poly_to_repr(
        poly_mulmod(repr_to_poly(a, p), repr_to_poly(b, p), modulus, p), p);
  }

  uint64_t mul(uint64_t a, uint64_t b) const {
    if (!mul_table.empty()) return mul_table[a * q + b];
    return mul_slow(a, b);
  }

  uint64_t inv_slow(uint64_t a) const {
    // a^(q-2); q <= 2^16 keeps this cheap.
    uint64_t e = q - 2, acc = 1, base = a;
    while (e) {
      if (e & 1) acc = mul_slow(acc, base);
      base = mul_slow(base, base);
      e >>= 1;
    }
    return acc;
  }

  uint64_t inv(uint64_t a) const {
    if (a == 0) throw PreconditionError("field inverse of zero");
    if (!inv_table.empty()) return inv_table[a];
    return inv_slow(a);
  }
};

FieldSpec::FieldSpec(std::shared_ptr<const Impl> impl)
    : impl_(std::move(impl)) {}

FieldSpec FieldSpec::make(uint64_t p, unsigned m,
                          std::optional<std::vector<uint64_t>> modulus) {
  if (!is_prime(p)) throw PreconditionError("field characteristic not prime");
  if (m < 1) throw PreconditionError("extension degree must be >= 1");
  uint64_t q = 1;
  for (unsigned i = 0; i < m; ++i) {
    q *= p;
    if (q > kMaxOrder) throw PreconditionError("field order exceeds 2^16");
  }

  std::vector<uint64_t> mod;
  if (m == 1) {
    mod = {0, 1};  // formal x; unused by prime-field arithmetic
  } else if (modulus.has_value()) {
    mod = *modulus;
    if (mod.size() != m + 1)
      throw PreconditionError("modulus needs m+1 coefficients");
    for (uint64_t c : mod)
      if (c >= p) throw PreconditionError("modulus coefficient out of [0,p)");
    if (mod[m] != 1) throw PreconditionError("modulus must be monic");
    if (!is_irreducible(mod, p))
      throw PreconditionError("modulus is reducible over F_p");
  } else {
    auto it = default_moduli().find({p, m});
    if (it == default_moduli().end())
      throw PreconditionError(
          "no built-in modulus for GF(" + std::to_string(q) +
          "); pass one explicitly");
    mod = it->second;
  }

  auto impl = std::make_shared<Impl>();
  impl->p = p;
  impl->m = m;
  impl->q = q;
  impl->modulus = mod;
  if (q <= kTableCap) {
    impl->mul_table.resize(q * q);
    for (uint64_t a = 0; a < q; ++a)
      for (uint64_t b = 0; b <= a; ++b) {
        uint64_t v = impl->mul_slow(a, b);
        impl->mul_table[a * q + b] = v;
        impl->mul_table[b * q + a] = v;
      }
    impl->inv_table.resize(q);
    for (uint64_t a = 1; a < q; ++a) impl->inv_table[a] = impl->inv_slow(a);
  }
  return FieldSpec(std::move(impl));
}

uint64_t FieldSpec::p() const { return impl_->p; }
unsigned FieldSpec::m() const { return impl_->m; }
uint64_t FieldSpec::q() const { return impl_->q; }
const std::vector<uint64_t>& FieldSpec::modulus() const {
  return impl_->modulus;
}

FieldElement FieldSpec::element(uint64_t repr) const {
  if (repr >= impl_->q)
    throw PreconditionError("element representation out of [0, q)");
  return FieldElement(impl_, repr);
}
FieldElement FieldSpec::zero() const { return FieldElement(impl_, 0); }
FieldElement FieldSpec::one() const { return FieldElement(impl_, 1); }

uint64_t FieldSpec::add(uint64_t a, uint64_t b) const {
  return impl_->add(a, b);
}
uint64_t FieldSpec::sub(uint64_t a, uint64_t b) const {
  return impl_->add(a, impl_->neg(b));
}
uint64_t FieldSpec::neg(uint64_t a) const { return impl_->neg(a); }
uint64_t FieldSpec::mul(uint64_t a, uint64_t b) const {
  return impl_->mul(a, b);
}
uint64_t FieldSpec::inv(uint64_t a) const { return impl_->inv(a); }

bool FieldSpec::operator==(const FieldSpec& other) const {
  return impl_ == other.impl_ ||
         (impl_->p == other.impl_->p && impl_->m == other.impl_->m &&
          impl_->modulus == other.impl_->modulus);
}

std::string FieldSpec::describe() const {
  std::ostringstream os;
  os << "GF(" << impl_->q << ")";
  if (impl_->m > 1) {
    os << " = GF(" << impl_->p << "^" << impl_->m << "), modulus";
    for (size_t i = impl_->modulus.size(); i-- > 0;) {
      uint64_t c = impl_->modulus[i];
      if (c == 0) continue;
      os << (i + 1 == impl_->modulus.size() ? " " : " + ");
      if (i == 0 || c != 1) os << c;
      if (i >= 1) os << "x";
      if (i >= 2) os << "^" << i;
    }
  }
  return os.str();
}

FieldSpec FieldElement::spec() const {
  if (!impl_) throw PreconditionError("default-constructed field element");
  return FieldSpec(impl_);
}

void FieldElement::require_same(const FieldElement& o) const {
  if (!impl_ || !o.impl_)
    throw PreconditionError("default-constructed field element");
  if (impl_.get() != o.impl_.get())
    throw PreconditionError("field elements from different specs");
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
  require_same(o);
  return FieldElement(impl_, impl_->add(repr_, o.repr_));
}
FieldElement FieldElement::operator-(const FieldElement& o) const {
  require_same(o);
  return FieldElement(impl_, impl_->add(repr_, impl_->neg(o.repr_)));
}
FieldElement FieldElement::operator-() const {
  if (!impl_) throw PreconditionError("default-constructed field element");
  return FieldElement(impl_, impl_->neg(repr_));
}
FieldElement FieldElement::operator*(const FieldElement& o) const {
  require_same(o);
  return FieldElement(impl_, impl_->mul(repr_, o.repr_));
}
FieldElement FieldElement::inverse() const {
  if (!impl_) throw PreconditionError("default-constructed field element");
  return FieldElement(impl_, impl_->inv(repr_));
}
bool FieldElement::operator==(const FieldElement& o) const {
  require_same(o);
  return repr_ == o.repr_;
}

}  // namespace covdepth
