#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "krawlp/errors.hpp"
#include "krawlp/field.hpp"
#include "krawlp/rational.hpp"

namespace krawlp {

/// Position of a subspace in the canonical global ordering of a Lattice.
struct SubspaceId {
  std::uint32_t index = 0;

  friend auto operator<=>(const SubspaceId&, const SubspaceId&) = default;
};

/// A subspace of F_q^n in reduced row-echelon form (leading coefficients 1).
struct Subspace {
  unsigned dim = 0;
  std::vector<FqVector> basis;
  std::vector<unsigned> pivots;
};

/// Minimum Hamming weight of a subspace; {0} carries the infinity sentinel so that
/// "violates distance d" is exactly "value <= d-1".
struct MinWeight {
  static constexpr unsigned kInfinity = std::numeric_limits<unsigned>::max();
  unsigned value = kInfinity;

  bool infinite() const { return value == kInfinity; }
  bool violates_distance(unsigned d) const { return d >= 1 && value <= d - 1; }

  friend auto operator<=>(const MinWeight&, const MinWeight&) = default;
};

inline constexpr std::size_t kDefaultSubspaceCap = 100000;

/// Number of k-dimensional subspaces of F_q^n (0 when k > n).
inline Integer gaussian_binomial(unsigned n, unsigned k, unsigned q) {
  if (k > n) return Integer(0);
  Integer num = 1;
  Integer den = 1;
  for (unsigned i = 0; i < k; ++i) {
    num *= ipow(q, n - i) - 1;
    den *= ipow(q, i + 1) - 1;
  }
  return num / den;
}

/// Total number of subspaces of F_q^n.
inline Integer subspace_count(unsigned n, unsigned q) {
  Integer total = 0;
  for (unsigned k = 0; k <= n; ++k) total += gaussian_binomial(n, k, q);
  return total;
}

/// Mobius function of the subspace lattice for a dimension gap k = dim(T/S):
/// (-1)^k q^(k choose 2).
inline Integer mobius_for_gap(unsigned k, unsigned q) {
  Integer v = ipow(q, k * (k - (k > 0 ? 1 : 0)) / 2);
  return (k % 2 == 0) ? v : Integer(-v);
}

namespace detail {

/// Row-reduce a list of vectors into the canonical RREF of their span.
inline Subspace rref(const FieldSpec& f, std::span<const FqVector> vectors, std::size_t n) {
  std::vector<FqVector> rows;
  rows.reserve(vectors.size());
  for (const auto& v : vectors) {
    if (v.size() != n) throw InputError("vector length " + std::to_string(v.size()) + " != n=" + std::to_string(n));
    for (auto x : v.entries()) {
      if (x >= f.q()) throw InputError("vector entry outside F_" + std::to_string(f.q()));
    }
    rows.push_back(v);
  }
  Subspace s;
  std::size_t r = 0;
  for (unsigned col = 0; col < n && r < rows.size(); ++col) {
    std::size_t pivot = r;
    while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[r], rows[pivot]);
    rows[r] = scale(f, f.inverse(rows[r].at(col)), rows[r]);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][col] == 0) continue;
      rows[i] = sub(f, rows[i], scale(f, rows[i].at(col), rows[r]));
    }
    s.pivots.push_back(col);
    ++r;
  }
  rows.resize(r);
  s.basis = std::move(rows);
  s.dim = static_cast<unsigned>(r);
  return s;
}

inline std::string basis_key(const Subspace& s) {
  std::string key;
  for (const auto& row : s.basis) {
    for (auto x : row.entries()) key.push_back(static_cast<char>(x));
  }
  return key;
}

/// Reduce v against an RREF basis; the result is zero iff v lies in the span.
inline FqVector reduce(const FieldSpec& f, const Subspace& s, FqVector v) {
  for (std::size_t i = 0; i < s.basis.size(); ++i) {
    const FqElement c = v.at(s.pivots[i]);
    if (c.value != 0) v = sub(f, v, scale(f, c, s.basis[i]));
  }
  return v;
}

}  // namespace detail

/// The poset of all subspaces of F_q^n, canonically ordered by (dimension, flattened RREF basis).
class Lattice {
 public:
  static Lattice enumerate(const FieldSpec& field, unsigned n, std::size_t cap = kDefaultSubspaceCap) {
    const Integer total = subspace_count(n, field.q());
    if (total > Integer(cap)) {
      throw ResourceError("lattice of F_" + std::to_string(field.q()) + "^" + std::to_string(n) + " has " +
                          total.str() + " subspaces, above the cap of " + std::to_string(cap));
    }
    Lattice lat(field, n);
    lat.build_spaces();
    lat.build_containment();
    lat.build_duals_and_weights();
    return lat;
  }

  const FieldSpec& field() const { return field_; }
  unsigned n() const { return n_; }
  std::size_t size() const { return spaces_.size(); }

  const Subspace& space(SubspaceId id) const { return spaces_.at(id.index); }
  std::span<const Subspace> spaces() const { return spaces_; }
  unsigned dim(SubspaceId id) const { return spaces_[id.index].dim; }

  /// |S| = q^dim(S).
  Integer cardinality(SubspaceId id) const { return ipow(field_.q(), dim(id)); }

  SubspaceId zero() const { return {0}; }
  SubspaceId full() const { return {static_cast<std::uint32_t>(spaces_.size() - 1)}; }

  /// Ids of all k-dimensional subspaces, in canonical order.
  std::span<const SubspaceId> stratum(unsigned k) const {
    if (k > n_) return {};
    return std::span<const SubspaceId>(all_ids_).subspan(stratum_begin_[k], stratum_begin_[k + 1] - stratum_begin_[k]);
  }

  std::span<const SubspaceId> ids() const { return all_ids_; }

  /// Id of the span of the given vectors.
  SubspaceId canonicalize(std::span<const FqVector> vectors) const {
    return lookup(detail::rref(field_, vectors, n_));
  }
  SubspaceId canonicalize(std::initializer_list<FqVector> vectors) const {
    return canonicalize(std::span<const FqVector>(vectors.begin(), vectors.size()));
  }

  bool contains_vector(SubspaceId s, const FqVector& v) const {
    return detail::reduce(field_, space(s), v).is_zero();
  }

  /// S <= T.
  bool is_subspace(SubspaceId s, SubspaceId t) const {
    const auto& up = supersets_[s.index];
    return std::binary_search(up.begin(), up.end(), t);
  }

  /// All T >= S (including S), ascending.
  std::span<const SubspaceId> supersets(SubspaceId s) const { return supersets_[s.index]; }
  /// All T <= S (including S), ascending.
  std::span<const SubspaceId> subsets(SubspaceId s) const { return subsets_[s.index]; }

  /// Upper covers: T > S with dim(T) = dim(S) + 1. Empty for the full space.
  std::span<const SubspaceId> covers(SubspaceId s) const { return up_covers_[s.index]; }
  std::span<const SubspaceId> lower_covers(SubspaceId s) const { return down_covers_[s.index]; }

  MinWeight min_weight(SubspaceId s) const { return min_weights_[s.index]; }

  /// Orthogonal complement under the standard bilinear form.
  SubspaceId dual(SubspaceId s) const { return duals_[s.index]; }

  /// Closed-form Mobius function; 0 when S is not below T.
  Integer mobius(SubspaceId s, SubspaceId t) const {
    if (!is_subspace(s, t)) return Integer(0);
    return mobius_for_gap(dim(t) - dim(s), field_.q());
  }

  /// Mobius function from its defining recursion over the interval [S, T].
  Integer mobius_recursive(SubspaceId s, SubspaceId t) const {
    if (!is_subspace(s, t)) return Integer(0);
    // mu(S, U) for U in [S, T], processed in canonical (dimension-ascending) order
    std::unordered_map<std::uint32_t, Integer> mu;
    for (SubspaceId u : supersets(s)) {
      if (!is_subspace(u, t)) continue;
      if (u == s) {
        mu[u.index] = 1;
        continue;
      }
      Integer acc = 0;
      for (SubspaceId w : subsets(u)) {
        if (w == u) continue;
        auto it = mu.find(w.index);
        if (it != mu.end()) acc += it->second;
      }
      mu[u.index] = -acc;
    }
    return mu.at(t.index);
  }

  /// out[S] = sum_{T >= S} in[T].
  std::vector<Rational> zeta_transform(std::span<const Rational> point_mass) const {
    require_sized(point_mass);
    std::vector<Rational> out(size());
    for (std::size_t s = 0; s < size(); ++s) {
      Rational acc = 0;
      for (SubspaceId t : supersets_[s]) acc += point_mass[t.index];
      out[s] = acc;
    }
    return out;
  }

  /// out[S] = sum_{T >= S} mu(S, T) in[T]; inverse of zeta_transform.
  std::vector<Rational> mobius_transform(std::span<const Rational> cumulative) const {
    require_sized(cumulative);
    std::vector<Integer> mu_by_gap(n_ + 1);
    for (unsigned k = 0; k <= n_; ++k) mu_by_gap[k] = mobius_for_gap(k, field_.q());
    std::vector<Rational> out(size());
    for (std::size_t s = 0; s < size(); ++s) {
      Rational acc = 0;
      const unsigned ds = spaces_[s].dim;
      for (SubspaceId t : supersets_[s]) {
        if (cumulative[t.index] == 0) continue;
        acc += Rational(mu_by_gap[spaces_[t.index].dim - ds]) * cumulative[t.index];
      }
      out[s] = acc;
    }
    return out;
  }

  /// Every vector of the subspace, enumerated by coefficient tuples over the basis.
  std::vector<FqVector> elements(SubspaceId id) const {
    const Subspace& s = space(id);
    std::vector<FqVector> out;
    std::size_t count = 1;
    for (unsigned i = 0; i < s.dim; ++i) count *= field_.q();
    out.reserve(count);
    for (std::size_t code = 0; code < count; ++code) {
      FqVector v(n_);
      std::size_t c = code;
      for (unsigned i = 0; i < s.dim; ++i) {
        const FqElement coef{static_cast<unsigned>(c % field_.q())};
        c /= field_.q();
        if (coef.value != 0) v = add(field_, v, scale(field_, coef, s.basis[i]));
      }
      out.push_back(std::move(v));
    }
    return out;
  }

 private:
  Lattice(FieldSpec field, unsigned n) : field_(std::move(field)), n_(n) {}

  void require_sized(std::span<const Rational> values) const {
    if (values.size() != size()) {
      throw InputError("value vector has " + std::to_string(values.size()) + " entries, lattice has " +
                       std::to_string(size()));
    }
  }

  SubspaceId lookup(const Subspace& s) const {
    auto it = index_.find(detail::basis_key(s));
    if (it == index_.end()) throw InputError("subspace not present in lattice");
    return {it->second};
  }

  void build_spaces() {
    const unsigned q = field_.q();
    stratum_begin_.assign(n_ + 2, 0);
    for (unsigned k = 0; k <= n_; ++k) {
      std::vector<Subspace> layer;
      std::vector<unsigned> pivots(k);
      std::function<void(unsigned, unsigned)> choose = [&](unsigned pos, unsigned from) {
        if (pos == k) {
          emit_rref(pivots, q, layer);
          return;
        }
        for (unsigned c = from; c + (k - pos) <= n_; ++c) {
          pivots[pos] = c;
          choose(pos + 1, c + 1);
        }
      };
      choose(0, 0);
      std::sort(layer.begin(), layer.end(), [](const Subspace& a, const Subspace& b) {
        return detail::basis_key(a) < detail::basis_key(b);
      });
      stratum_begin_[k] = spaces_.size();
      for (auto& s : layer) spaces_.push_back(std::move(s));
    }
    stratum_begin_[n_ + 1] = spaces_.size();
    all_ids_.resize(spaces_.size());
    for (std::size_t i = 0; i < spaces_.size(); ++i) {
      all_ids_[i] = {static_cast<std::uint32_t>(i)};
      index_.emplace(detail::basis_key(spaces_[i]), static_cast<std::uint32_t>(i));
    }
  }

  void emit_rref(const std::vector<unsigned>& pivots, unsigned q, std::vector<Subspace>& layer) const {
    const auto k = static_cast<unsigned>(pivots.size());
    std::vector<bool> is_pivot(n_, false);
    for (unsigned p : pivots) is_pivot[p] = true;
    std::vector<std::pair<unsigned, unsigned>> free_slots;  // (row, column)
    for (unsigned i = 0; i < k; ++i) {
      for (unsigned c = pivots[i] + 1; c < n_; ++c) {
        if (!is_pivot[c]) free_slots.emplace_back(i, c);
      }
    }
    std::size_t count = 1;
    for (std::size_t i = 0; i < free_slots.size(); ++i) count *= q;
    for (std::size_t code = 0; code < count; ++code) {
      Subspace s;
      s.dim = k;
      s.pivots = pivots;
      s.basis.assign(k, FqVector(n_));
      for (unsigned i = 0; i < k; ++i) s.basis[i].set(pivots[i], field_.one());
      std::size_t c = code;
      for (const auto& [row, col] : free_slots) {
        s.basis[row].set(col, {static_cast<unsigned>(c % q)});
        c /= q;
      }
      layer.push_back(std::move(s));
    }
  }

  void build_containment() {
    const std::size_t count = spaces_.size();
    up_covers_.assign(count, {});
    down_covers_.assign(count, {});
    std::uint64_t total_vectors = 1;
    for (unsigned i = 0; i < n_; ++i) total_vectors *= field_.q();
    for (std::size_t s = 0; s < count; ++s) {
      const Subspace& base = spaces_[s];
      if (base.dim == n_) continue;
      std::vector<SubspaceId> found;
      std::vector<FqVector> rows = base.basis;
      rows.emplace_back(n_);
      for (std::uint64_t idx = 1; idx < total_vectors; ++idx) {
        FqVector v = detail::reduce(field_, base, vector_at(field_, n_, idx));
        if (v.is_zero()) continue;
        // only the reduced representative whose leading entry is 1 needs processing
        std::size_t lead = 0;
        while (v[lead] == 0) ++lead;
        if (v[lead] != 1) continue;
        rows.back() = v;
        found.push_back(lookup(detail::rref(field_, rows, n_)));
      }
      std::sort(found.begin(), found.end());
      found.erase(std::unique(found.begin(), found.end()), found.end());
      up_covers_[s] = std::move(found);
    }
    for (std::size_t s = 0; s < count; ++s) {
      for (SubspaceId t : up_covers_[s]) down_covers_[t.index].push_back({static_cast<std::uint32_t>(s)});
    }
    supersets_.assign(count, {});
    subsets_.assign(count, {});
    std::vector<std::size_t> stamp(count, count);
    std::vector<SubspaceId> frontier;
    for (std::size_t s = 0; s < count; ++s) {
      auto& up = supersets_[s];
      up.push_back({static_cast<std::uint32_t>(s)});
      stamp[s] = s;
      for (std::size_t head = 0; head < up.size(); ++head) {
        for (SubspaceId t : up_covers_[up[head].index]) {
          if (stamp[t.index] == s) continue;
          stamp[t.index] = s;
          up.push_back(t);
        }
      }
      std::sort(up.begin(), up.end());
    }
    for (std::size_t s = 0; s < count; ++s) {
      for (SubspaceId t : supersets_[s]) subsets_[t.index].push_back({static_cast<std::uint32_t>(s)});
    }
  }

  void build_duals_and_weights() {
    const std::size_t count = spaces_.size();
    duals_.resize(count);
    min_weights_.resize(count);
    for (std::size_t s = 0; s < count; ++s) {
      const Subspace& sp = spaces_[s];
      // null space of the RREF basis: one generator per non-pivot column
      std::vector<bool> is_pivot(n_, false);
      for (unsigned p : sp.pivots) is_pivot[p] = true;
      std::vector<FqVector> generators;
      for (unsigned col = 0; col < n_; ++col) {
        if (is_pivot[col]) continue;
        FqVector v(n_);
        v.set(col, field_.one());
        for (unsigned i = 0; i < sp.dim; ++i) v.set(sp.pivots[i], field_.neg(sp.basis[i].at(col)));
        generators.push_back(std::move(v));
      }
      duals_[s] = canonicalize(generators);

      MinWeight best;
      for (const auto& v : elements({static_cast<std::uint32_t>(s)})) {
        if (v.is_zero()) continue;
        best.value = std::min(best.value, hamming_weight(v));
      }
      min_weights_[s] = best;
    }
  }

  FieldSpec field_;
  unsigned n_;
  std::vector<Subspace> spaces_;
  std::vector<SubspaceId> all_ids_;
  std::vector<std::size_t> stratum_begin_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<std::vector<SubspaceId>> up_covers_;
  std::vector<std::vector<SubspaceId>> down_covers_;
  std::vector<std::vector<SubspaceId>> supersets_;
  std::vector<std::vector<SubspaceId>> subsets_;
  std::vector<SubspaceId> duals_;
  std::vector<MinWeight> min_weights_;
};

/// Entry of F_q as a single character: 0-9 then a-z (q <= 36), otherwise its decimal value.
inline std::string digit_string(const FqVector& v, unsigned q) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const unsigned x = v[i];
    if (q <= 36) {
      out.push_back(static_cast<char>(x < 10 ? '0' + x : 'a' + (x - 10)));
    } else {
      if (i > 0) out.push_back('.');
      out += std::to_string(x);
    }
  }
  return out;
}

/// One dump line: `id dim basis_rows_hex`, rows written as hexadecimal vector indices joined by
/// commas, `-` for the zero space.
inline std::string dump_line(const Lattice& lat, SubspaceId id) {
  std::ostringstream os;
  const Subspace& s = lat.space(id);
  os << id.index << ' ' << s.dim << ' ';
  if (s.dim == 0) {
    os << '-';
  } else {
    for (std::size_t i = 0; i < s.basis.size(); ++i) {
      if (i > 0) os << ',';
      os << std::hex << vector_index(lat.field(), s.basis[i]) << std::dec;
    }
  }
  return os.str();
}

}  // namespace krawlp

template <>
struct std::hash<krawlp::SubspaceId> {
  std::size_t operator()(const krawlp::SubspaceId& id) const noexcept { return id.index; }
};
