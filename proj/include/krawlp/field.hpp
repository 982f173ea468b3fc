#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "krawlp/errors.hpp"

namespace krawlp {

/// An element of F_q, encoded as the base-p digits of its polynomial representative
/// (digit i is the coefficient of x^i).
struct FqElement {
  unsigned value = 0;

  friend auto operator<=>(const FqElement&, const FqElement&) = default;
};

/// Largest field order supported; vector entries are stored as bytes.
inline constexpr unsigned kMaxFieldOrder = 256;

namespace detail {

inline bool is_prime(unsigned v) {
  if (v < 2) return false;
  for (unsigned f = 2; f * f <= v; ++f) {
    if (v % f == 0) return false;
  }
  return true;
}

// Polynomials over F_p, coefficient i is the coefficient of x^i.
using Poly = std::vector<unsigned>;

inline void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

inline Poly poly_mod(Poly f, const Poly& g, unsigned p) {
  trim(f);
  const std::size_t dg = g.size() - 1;
  unsigned lead_inv = 1;
  while ((lead_inv * g.back()) % p != 1) ++lead_inv;
  while (f.size() >= g.size()) {
    const unsigned factor = (f.back() * lead_inv) % p;
    const std::size_t shift = f.size() - 1 - dg;
    for (std::size_t i = 0; i <= dg; ++i) {
      f[shift + i] = (f[shift + i] + p - (factor * g[i]) % p) % p;
    }
    trim(f);
  }
  return f;
}

inline bool is_irreducible(const Poly& modulus, unsigned p) {
  const std::size_t e = modulus.size() - 1;
  for (std::size_t deg = 1; deg <= e / 2; ++deg) {
    // every monic polynomial of this degree
    std::size_t count = 1;
    for (std::size_t i = 0; i < deg; ++i) count *= p;
    for (std::size_t code = 0; code < count; ++code) {
      Poly g(deg + 1, 0);
      std::size_t c = code;
      for (std::size_t i = 0; i < deg; ++i) {
        g[i] = static_cast<unsigned>(c % p);
        c /= p;
      }
      g[deg] = 1;
      if (poly_mod(modulus, g, p).empty()) return false;
    }
  }
  return true;
}

struct FieldTables {
  std::vector<std::uint8_t> add;  // q*q
  std::vector<std::uint8_t> neg;  // q
  std::vector<std::uint8_t> log;  // q, log[0] unused
  std::vector<std::uint8_t> exp;  // 2(q-1)
};

}  // namespace detail

/// Field F_q with q = p^e. Prime-power fields use a monic irreducible modulus over F_p and
/// log/antilog tables for multiplication.
class FieldSpec {
 public:
  /// Field of order q with the default modulus: the monic irreducible polynomial of degree e
  /// whose lower coefficients, read as a base-p number, are smallest.
  static FieldSpec of_order(unsigned q) {
    if (q < 2 || q > kMaxFieldOrder) {
      throw InputError("field order " + std::to_string(q) + " outside [2, " +
                       std::to_string(kMaxFieldOrder) + "]");
    }
    unsigned p = 2;
    while (q % p != 0) ++p;
    unsigned e = 0;
    for (unsigned rest = q; rest > 1; rest /= p) {
      if (rest % p != 0) throw InputError(std::to_string(q) + " is not a prime power");
      ++e;
    }
    if (e == 1) return FieldSpec(p, 1, {});
    std::size_t count = q;  // p^e choices for the lower coefficients
    for (std::size_t code = 0; code < count; ++code) {
      detail::Poly f(e + 1, 0);
      std::size_t c = code;
      for (unsigned i = 0; i < e; ++i) {
        f[i] = static_cast<unsigned>(c % p);
        c /= p;
      }
      f[e] = 1;
      if (detail::is_irreducible(f, p)) return FieldSpec(p, e, std::move(f));
    }
    throw DomainError("no irreducible polynomial found");  // unreachable for prime powers
  }

  /// Field F_{p^e} with an explicit modulus (coefficients low degree first, monic, length e+1).
  static FieldSpec with_modulus(unsigned p, std::vector<unsigned> modulus) {
    if (!detail::is_prime(p)) throw InputError(std::to_string(p) + " is not prime");
    if (modulus.size() < 2) throw InputError("modulus must have degree at least 1");
    for (unsigned c : modulus) {
      if (c >= p) throw InputError("modulus coefficient outside F_p");
    }
    if (modulus.back() != 1) throw InputError("modulus must be monic");
    const auto e = static_cast<unsigned>(modulus.size() - 1);
    if (e == 1) return FieldSpec(p, 1, {});
    if (!detail::is_irreducible(modulus, p)) throw InputError("modulus is reducible over F_p");
    std::size_t q = 1;
    for (unsigned i = 0; i < e; ++i) q *= p;
    if (q > kMaxFieldOrder) throw InputError("field order exceeds " + std::to_string(kMaxFieldOrder));
    return FieldSpec(p, e, std::move(modulus));
  }

  unsigned q() const { return q_; }
  unsigned p() const { return p_; }
  unsigned e() const { return e_; }
  /// Empty for prime fields.
  const std::vector<unsigned>& modulus() const { return modulus_; }

  FqElement zero() const { return {0}; }
  FqElement one() const { return {1}; }

  FqElement add(FqElement a, FqElement b) const { return {tables_->add[a.value * q_ + b.value]}; }
  FqElement neg(FqElement a) const { return {tables_->neg[a.value]}; }
  FqElement sub(FqElement a, FqElement b) const { return add(a, neg(b)); }
  FqElement mul(FqElement a, FqElement b) const {
    if (a.value == 0 || b.value == 0) return {0};
    return {tables_->exp[tables_->log[a.value] + tables_->log[b.value]]};
  }
  FqElement inverse(FqElement a) const {
    if (a.value == 0) throw DomainError("inverse of zero in F_" + std::to_string(q_));
    return {tables_->exp[(q_ - 1 - tables_->log[a.value]) % (q_ - 1)]};
  }

  bool contains(FqElement a) const { return a.value < q_; }

  friend bool operator==(const FieldSpec& a, const FieldSpec& b) {
    return a.q_ == b.q_ && a.modulus_ == b.modulus_;
  }

 private:
  FieldSpec(unsigned p, unsigned e, std::vector<unsigned> modulus)
      : p_(p), e_(e), modulus_(std::move(modulus)) {
    q_ = 1;
    for (unsigned i = 0; i < e_; ++i) q_ *= p_;
    build_tables();
  }

  unsigned digit(unsigned v, unsigned i) const {
    for (unsigned k = 0; k < i; ++k) v /= p_;
    return v % p_;
  }

  unsigned encode(const detail::Poly& f) const {
    unsigned v = 0;
    for (std::size_t i = f.size(); i-- > 0;) v = v * p_ + f[i];
    return v;
  }

  detail::Poly decode(unsigned v) const {
    detail::Poly f(e_, 0);
    for (unsigned i = 0; i < e_; ++i) {
      f[i] = v % p_;
      v /= p_;
    }
    return f;
  }

  unsigned slow_mul(unsigned a, unsigned b) const {
    if (e_ == 1) return (a * b) % p_;
    const auto fa = decode(a);
    const auto fb = decode(b);
    detail::Poly prod(2 * e_ - 1, 0);
    for (unsigned i = 0; i < e_; ++i) {
      for (unsigned j = 0; j < e_; ++j) prod[i + j] = (prod[i + j] + fa[i] * fb[j]) % p_;
    }
    auto r = detail::poly_mod(prod, modulus_, p_);
    r.resize(e_, 0);
    return encode(r);
  }

  void build_tables() {
    auto t = std::make_shared<detail::FieldTables>();
    t->add.resize(static_cast<std::size_t>(q_) * q_);
    t->neg.resize(q_);
    for (unsigned a = 0; a < q_; ++a) {
      for (unsigned b = 0; b < q_; ++b) {
        unsigned sum = 0, scale = 1;
        for (unsigned i = 0; i < e_; ++i) {
          sum += ((digit(a, i) + digit(b, i)) % p_) * scale;
          scale *= p_;
        }
        t->add[a * q_ + b] = static_cast<std::uint8_t>(sum);
        if (sum == 0) t->neg[a] = static_cast<std::uint8_t>(b);
      }
    }
    // find a multiplicative generator
    const unsigned order = q_ - 1;
    t->log.assign(q_, 0);
    t->exp.assign(2 * static_cast<std::size_t>(order), 0);
    for (unsigned g = 1; g < q_; ++g) {
      std::vector<bool> seen(q_, false);
      unsigned x = 1;
      unsigned k = 0;
      bool generator = true;
      for (; k < order; ++k) {
        if (seen[x]) {
          generator = false;
          break;
        }
        seen[x] = true;
        t->exp[k] = static_cast<std::uint8_t>(x);
        t->log[x] = static_cast<std::uint8_t>(k);
        x = slow_mul(x, g);
      }
      if (generator) break;
    }
    for (unsigned k = order; k < 2 * order; ++k) t->exp[k] = t->exp[k - order];
    tables_ = std::move(t);
  }

  unsigned q_ = 2;
  unsigned p_ = 2;
  unsigned e_ = 1;
  std::vector<unsigned> modulus_;
  std::shared_ptr<const detail::FieldTables> tables_;
};

/// A length-n vector over F_q.
class FqVector {
 public:
  FqVector() = default;
  explicit FqVector(std::size_t n) : entries_(n, 0) {}
  FqVector(std::initializer_list<unsigned> values) {
    entries_.reserve(values.size());
    for (unsigned v : values) entries_.push_back(static_cast<std::uint8_t>(v));
  }
  explicit FqVector(std::vector<std::uint8_t> entries) : entries_(std::move(entries)) {}

  std::size_t size() const { return entries_.size(); }
  unsigned operator[](std::size_t i) const { return entries_[i]; }
  FqElement at(std::size_t i) const { return {entries_[i]}; }
  void set(std::size_t i, FqElement v) { entries_[i] = static_cast<std::uint8_t>(v.value); }
  std::span<const std::uint8_t> entries() const { return entries_; }

  bool is_zero() const {
    for (auto v : entries_) {
      if (v != 0) return false;
    }
    return true;
  }

  friend auto operator<=>(const FqVector&, const FqVector&) = default;

 private:
  std::vector<std::uint8_t> entries_;
};

inline void require_same_length(const FqVector& u, const FqVector& v) {
  if (u.size() != v.size()) throw InputError("vector lengths differ");
}

inline FqVector add(const FieldSpec& f, const FqVector& u, const FqVector& v) {
  require_same_length(u, v);
  FqVector r(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) r.set(i, f.add(u.at(i), v.at(i)));
  return r;
}

inline FqVector sub(const FieldSpec& f, const FqVector& u, const FqVector& v) {
  require_same_length(u, v);
  FqVector r(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) r.set(i, f.sub(u.at(i), v.at(i)));
  return r;
}

inline FqVector scale(const FieldSpec& f, FqElement c, const FqVector& u) {
  FqVector r(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) r.set(i, f.mul(c, u.at(i)));
  return r;
}

inline FqElement dot(const FieldSpec& f, const FqVector& u, const FqVector& v) {
  require_same_length(u, v);
  FqElement acc = f.zero();
  for (std::size_t i = 0; i < u.size(); ++i) acc = f.add(acc, f.mul(u.at(i), v.at(i)));
  return acc;
}

/// Number of nonzero coordinates.
inline unsigned hamming_weight(const FqVector& v) {
  unsigned w = 0;
  for (auto x : v.entries()) w += (x != 0);
  return w;
}

/// Position of v in the row-major enumeration of F_q^n (first coordinate most significant).
inline std::uint64_t vector_index(const FieldSpec& f, const FqVector& v) {
  std::uint64_t idx = 0;
  for (auto x : v.entries()) idx = idx * f.q() + x;
  return idx;
}

inline FqVector vector_at(const FieldSpec& f, std::size_t n, std::uint64_t index) {
  FqVector v(n);
  for (std::size_t i = n; i-- > 0;) {
    v.set(i, {static_cast<unsigned>(index % f.q())});
    index /= f.q();
  }
  return v;
}

/// Sign character (-1)^(sum_i alpha_i . x_i) on tuples of vectors over F_2.
inline int char_value(const FieldSpec& f, std::span<const FqVector> alpha, std::span<const FqVector> x) {
  if (f.q() != 2) {
    throw UnsupportedFieldError("sign characters are implemented for q=2 only (got q=" +
                                std::to_string(f.q()) + ")");
  }
  if (alpha.size() != x.size()) throw InputError("character tuple shapes differ");
  unsigned parity = 0;
  for (std::size_t i = 0; i < alpha.size(); ++i) parity ^= dot(f, alpha[i], x[i]).value;
  return parity == 0 ? 1 : -1;
}

}  // namespace krawlp
