#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include "krawlp/errors.hpp"
#include "krawlp/field.hpp"
#include "krawlp/lattice.hpp"
#include "krawlp/lp.hpp"
#include "krawlp/rational.hpp"

namespace krawlp {

/// Problem parameters (q, n, d, level).
struct Instance {
  FieldSpec field;
  unsigned n = 1;
  unsigned d = 1;
  unsigned level = 1;

  static Instance make(unsigned q, unsigned n, unsigned d, unsigned level) {
    Instance inst{FieldSpec::of_order(q), n, d, level};
    inst.validate();
    return inst;
  }

  void validate() const {
    if (n < 1) throw InputError("blocklength n must be at least 1");
    if (d < 1) throw InputError("minimum distance d must be at least 1");
    if (level < 1) throw InputError("level must be at least 1");
  }
};

/// P[S = C~] for every subspace S, indexed by SubspaceId.
struct PseudoDistribution {
  std::vector<Rational> values;

  const Rational& operator[](SubspaceId id) const { return values.at(id.index); }
  Rational& operator[](SubspaceId id) { return values.at(id.index); }
  friend bool operator==(const PseudoDistribution&, const PseudoDistribution&) = default;
};

/// P[S subset-of C~] for every subspace S, indexed by SubspaceId.
struct CumulativeSolution {
  std::vector<Rational> values;

  const Rational& operator[](SubspaceId id) const { return values.at(id.index); }
  friend bool operator==(const CumulativeSolution&, const CumulativeSolution&) = default;
};

inline constexpr std::size_t kDefaultTupleCap = std::size_t{1} << 16;

inline std::string subspace_variable(SubspaceId id) { return "P_" + std::to_string(id.index); }
inline std::string tuple_variable(std::uint64_t t) { return "a_" + std::to_string(t); }

namespace detail {

inline void require_matching(const Instance& inst, const Lattice& lat) {
  inst.validate();
  if (!(lat.field() == inst.field) || lat.n() != inst.n) {
    throw InputError("lattice does not match the instance (q=" + std::to_string(inst.field.q()) +
                     ", n=" + std::to_string(inst.n) + ")");
  }
}

inline void require_pseudo_level(const Instance& inst) {
  if (inst.level < inst.n) {
    throw LevelError("pseudoprobability programs need level >= n (level=" + std::to_string(inst.level) +
                     ", n=" + std::to_string(inst.n) + ")");
  }
}

inline Rational q_power(unsigned q, long exponent) {
  if (exponent >= 0) return Rational(ipow(q, static_cast<unsigned>(exponent)));
  return Rational(Integer(1), ipow(q, static_cast<unsigned>(-exponent)));
}

inline LinearProgram subspace_model(const Lattice& lat) {
  LinearProgram lp(Sense::Maximize);
  for (SubspaceId id : lat.ids()) lp.add_variable(subspace_variable(id));
  return lp;
}

inline void set_size_objective(LinearProgram& lp, const Lattice& lat, unsigned power) {
  std::vector<Term> obj;
  for (SubspaceId id : lat.ids()) {
    obj.push_back({id.index, q_power(lat.field().q(), static_cast<long>(lat.dim(id)) * power)});
  }
  lp.set_objective(std::move(obj));
}

inline void add_normalization(LinearProgram& lp, const Lattice& lat) {
  std::vector<Term> terms;
  for (SubspaceId id : lat.ids()) terms.push_back({id.index, 1});
  lp.add_constraint("norm", std::move(terms), Relation::Equal, 1);
}

inline void add_distance_rows(LinearProgram& lp, const Lattice& lat, unsigned d) {
  for (SubspaceId id : lat.ids()) {
    if (lat.min_weight(id).violates_distance(d)) {
      lp.add_constraint("dist_" + std::to_string(id.index), {{id.index, 1}}, Relation::Equal, 0);
    }
  }
}

inline void add_dimension_rows(LinearProgram& lp, const Lattice& lat, unsigned k0) {
  for (SubspaceId id : lat.ids()) {
    if (lat.dim(id) > k0) lp.add_constraint("dim_" + std::to_string(id.index), {{id.index, 1}}, Relation::Equal, 0);
  }
}

// sum_{S <= U} (|S|/|U|)^level P[S] >= 0
inline void add_fourier_rows(LinearProgram& lp, const Lattice& lat, unsigned level) {
  const unsigned q = lat.field().q();
  for (SubspaceId u : lat.ids()) {
    std::vector<Term> terms;
    for (SubspaceId s : lat.subsets(u)) {
      terms.push_back({s.index, q_power(q, -static_cast<long>(level) * (lat.dim(u) - lat.dim(s)))});
    }
    lp.add_constraint("fourier_" + std::to_string(u.index), std::move(terms), Relation::GreaterEqual, 0);
  }
}

// sum_{S >= U} P[S] >= 0
inline void add_nonnegativity_rows(LinearProgram& lp, const Lattice& lat) {
  for (SubspaceId u : lat.ids()) {
    std::vector<Term> terms;
    for (SubspaceId s : lat.supersets(u)) terms.push_back({s.index, 1});
    lp.add_constraint("nonneg_" + std::to_string(u.index), std::move(terms), Relation::GreaterEqual, 0);
  }
}

}  // namespace detail

/// Krawtchouk hierarchy in pseudoprobability variables (level >= n).
inline LinearProgram build_kraw_pseudo(const Instance& inst, const Lattice& lat) {
  detail::require_matching(inst, lat);
  detail::require_pseudo_level(inst);
  auto lp = detail::subspace_model(lat);
  detail::set_size_objective(lp, lat, inst.level);
  detail::add_normalization(lp, lat);
  detail::add_distance_rows(lp, lat, inst.d);
  detail::add_fourier_rows(lp, lat, inst.level);
  detail::add_nonnegativity_rows(lp, lat);
  return lp;
}

/// As build_kraw_pseudo with the distance rows replaced by P[S] = 0 for dim(S) > k0.
inline LinearProgram build_kraw_pseudo_weak(const Instance& inst, const Lattice& lat, unsigned k0) {
  detail::require_matching(inst, lat);
  detail::require_pseudo_level(inst);
  auto lp = detail::subspace_model(lat);
  detail::set_size_objective(lp, lat, inst.level);
  detail::add_normalization(lp, lat);
  detail::add_dimension_rows(lp, lat, k0);
  detail::add_fourier_rows(lp, lat, inst.level);
  detail::add_nonnegativity_rows(lp, lat);
  return lp;
}

/// Feasible region of build_kraw_pseudo_weak with objective sum |S| P[S].
inline LinearProgram build_full_pseudo_weak(const Instance& inst, const Lattice& lat, unsigned k0) {
  auto lp = build_kraw_pseudo_weak(inst, lat, k0);
  std::vector<Term> obj;
  for (SubspaceId id : lat.ids()) obj.push_back({id.index, Rational(lat.cardinality(id))});
  lp.set_objective(std::move(obj));
  return lp;
}

/// Whether (T, U, r) indexes a partial Fourier row at this level.
inline bool admissible_partial_triple(const Lattice& lat, SubspaceId t, SubspaceId u, unsigned r, unsigned level) {
  if (!lat.is_subspace(t, u)) return false;
  if (r > level || r + lat.dim(u) < lat.n()) return false;
  return lat.dim(t) + r <= level;
}

/// Partial Krawtchouk hierarchy in pseudoprobability variables (level >= n): objective
/// sum |S| P[S], rows sum_{T <= S <= U} (|S|/|U|)^r P[S] >= 0 for every admissible (T, U, r).
/// Rows that coincide after scaling are emitted once, under the smallest (T, U, r).
inline LinearProgram build_partial_pseudo(const Instance& inst, const Lattice& lat) {
  detail::require_matching(inst, lat);
  detail::require_pseudo_level(inst);
  const unsigned q = lat.field().q();
  auto lp = detail::subspace_model(lat);
  detail::set_size_objective(lp, lat, 1);
  detail::add_normalization(lp, lat);
  detail::add_distance_rows(lp, lat, inst.d);

  std::unordered_set<std::string> seen;
  for (SubspaceId t : lat.ids()) {
    for (SubspaceId u : lat.supersets(t)) {
      std::vector<SubspaceId> interval;
      for (SubspaceId s : lat.supersets(t)) {
        if (lat.is_subspace(s, u)) interval.push_back(s);
      }
      const unsigned du = lat.dim(u);
      const unsigned r_lo = du >= lat.n() ? 0 : lat.n() - du;
      for (unsigned r = r_lo; r <= inst.level; ++r) {
        if (!admissible_partial_triple(lat, t, u, r, inst.level)) continue;
        std::vector<Term> terms;
        std::string key;
        for (SubspaceId s : interval) {
          Rational coef = detail::q_power(q, -static_cast<long>(r) * (du - lat.dim(s)));
          key += std::to_string(s.index) + ':' + to_string(coef) + ' ';
          terms.push_back({s.index, std::move(coef)});
        }
        if (!seen.insert(key).second) continue;
        lp.add_constraint("pfourier_" + std::to_string(t.index) + "_" + std::to_string(u.index) + "_" +
                              std::to_string(r),
                          std::move(terms), Relation::GreaterEqual, 0);
      }
    }
  }
  detail::add_nonnegativity_rows(lp, lat);
  return lp;
}

/// Tuples of `level` vectors of F_q^n, indexed row-major (first vector most significant).
class TupleSpace {
 public:
  TupleSpace(const FieldSpec& field, unsigned n, unsigned level, std::size_t cap)
      : field_(field), n_(n), level_(level) {
    vectors_ = 1;
    for (unsigned i = 0; i < n; ++i) vectors_ *= field.q();
    count_ = 1;
    for (unsigned i = 0; i < level; ++i) {
      if (count_ > cap / vectors_ + 1) {
        count_ = cap + 1;
        break;
      }
      count_ *= vectors_;
    }
    if (count_ > cap) {
      throw ResourceError("(F_" + std::to_string(field.q()) + "^" + std::to_string(n) + ")^" + std::to_string(level) +
                          " has more than the tuple cap of " + std::to_string(cap) + " elements");
    }
  }

  std::uint64_t size() const { return count_; }
  std::uint64_t vectors_per_slot() const { return vectors_; }

  /// Index of the vector in slot i of tuple t.
  std::uint64_t slot(std::uint64_t t, unsigned i) const {
    for (unsigned k = i + 1; k < level_; ++k) t /= vectors_;
    return t % vectors_;
  }

  std::vector<FqVector> vectors(std::uint64_t t) const {
    std::vector<FqVector> out(level_);
    for (unsigned i = level_; i-- > 0;) {
      out[i] = vector_at(field_, n_, t % vectors_);
      t /= vectors_;
    }
    return out;
  }

 private:
  FieldSpec field_;
  unsigned n_;
  unsigned level_;
  std::uint64_t vectors_ = 1;
  std::uint64_t count_ = 1;
};

namespace detail {

inline void require_binary(const Instance& inst) {
  if (inst.field.q() != 2) {
    throw UnsupportedFieldError("unsymmetrized programs are q=2 only (got q=" + std::to_string(inst.field.q()) + ")");
  }
}

inline std::vector<SubspaceId> tuple_spans(const TupleSpace& tuples, const Lattice& lat) {
  std::vector<SubspaceId> spans(tuples.size());
  for (std::uint64_t t = 0; t < tuples.size(); ++t) spans[t] = lat.canonicalize(tuples.vectors(t));
  return spans;
}

inline LinearProgram tuple_model(const TupleSpace& tuples, const std::vector<SubspaceId>& spans, const Lattice& lat,
                                 unsigned d) {
  LinearProgram lp(Sense::Maximize);
  for (std::uint64_t t = 0; t < tuples.size(); ++t) lp.add_variable(tuple_variable(t));
  lp.add_constraint("norm", {{0, 1}}, Relation::Equal, 1);
  for (std::uint64_t t = 0; t < tuples.size(); ++t) {
    if (lat.min_weight(spans[t]).violates_distance(d)) {
      lp.add_constraint("dist_" + std::to_string(t), {{t, 1}}, Relation::Equal, 0);
    }
  }
  return lp;
}

}  // namespace detail

/// Unsymmetrized Krawtchouk hierarchy over (F_2^n)^level. For q = 2 the tuple index, read in
/// binary, is the concatenation of all coordinates, so chi_alpha(x) = (-1)^popcount(alpha & x).
/// Reflection rows a_x = a_{-x} are vacuous over F_2 and are not emitted.
inline LinearProgram build_unsym_kraw(const Instance& inst, const Lattice& lat,
                                      std::size_t tuple_cap = kDefaultTupleCap) {
  detail::require_binary(inst);
  detail::require_matching(inst, lat);
  const TupleSpace tuples(inst.field, inst.n, inst.level, tuple_cap);
  const auto spans = detail::tuple_spans(tuples, lat);
  auto lp = detail::tuple_model(tuples, spans, lat, inst.d);
  std::vector<Term> obj;
  for (std::uint64_t t = 0; t < tuples.size(); ++t) obj.push_back({t, 1});
  lp.set_objective(std::move(obj));
  for (std::uint64_t alpha = 0; alpha < tuples.size(); ++alpha) {
    std::vector<Term> terms;
    terms.reserve(tuples.size());
    for (std::uint64_t x = 0; x < tuples.size(); ++x) {
      terms.push_back({x, (std::popcount(alpha & x) % 2 == 0) ? 1 : -1});
    }
    lp.add_constraint("fourier_" + std::to_string(alpha), std::move(terms), Relation::GreaterEqual, 0);
  }
  for (std::uint64_t t = 0; t < tuples.size(); ++t) {
    lp.add_constraint("nonneg_" + std::to_string(t), {{t, 1}}, Relation::GreaterEqual, 0);
  }
  return lp;
}

/// Unsymmetrized partial Krawtchouk hierarchy over (F_2^n)^level. Row pfourier_<alpha>_<mask>
/// uses the character of alpha_i in slots i where bit i of mask is set (slot 0 is the most
/// significant vector) and the indicator of alpha_i elsewhere; mask 0 is a_alpha >= 0.
/// Row gl_<k> equates the smallest tuple of a span class with another member of it.
inline LinearProgram build_unsym_partial(const Instance& inst, const Lattice& lat,
                                         std::size_t tuple_cap = kDefaultTupleCap) {
  detail::require_binary(inst);
  detail::require_matching(inst, lat);
  const TupleSpace tuples(inst.field, inst.n, inst.level, tuple_cap);
  const std::uint64_t masks = std::uint64_t{1} << inst.level;
  if (tuples.size() > tuple_cap / masks) {
    throw ResourceError("partial Fourier rows (" + std::to_string(tuples.size()) + " * " + std::to_string(masks) +
                        ") exceed the tuple cap of " + std::to_string(tuple_cap));
  }
  const auto spans = detail::tuple_spans(tuples, lat);
  auto lp = detail::tuple_model(tuples, spans, lat, inst.d);

  const std::uint64_t slot_size = tuples.vectors_per_slot();
  std::uint64_t first_slot_weight = 1;
  for (unsigned i = 1; i < inst.level; ++i) first_slot_weight *= slot_size;
  std::vector<Term> obj;
  for (std::uint64_t x1 = 0; x1 < slot_size; ++x1) obj.push_back({x1 * first_slot_weight, 1});
  lp.set_objective(std::move(obj));

  // bit pattern of slot i inside a tuple index
  std::vector<std::uint64_t> slot_bits(inst.level);
  for (unsigned i = 0; i < inst.level; ++i) {
    std::uint64_t weight = 1;
    for (unsigned k = i + 1; k < inst.level; ++k) weight *= slot_size;
    slot_bits[i] = (slot_size - 1) * weight;
  }
  for (std::uint64_t alpha = 0; alpha < tuples.size(); ++alpha) {
    for (std::uint64_t mask = 0; mask < masks; ++mask) {
      std::uint64_t free_bits = 0;
      for (unsigned i = 0; i < inst.level; ++i) {
        if (mask & (std::uint64_t{1} << i)) free_bits |= slot_bits[i];
      }
      const std::uint64_t fixed = alpha & ~free_bits;
      std::vector<Term> terms;
      // enumerate x agreeing with alpha outside the character slots
      std::uint64_t sub = 0;
      do {
        const std::uint64_t x = fixed | sub;
        const int sign = (std::popcount(alpha & sub) % 2 == 0) ? 1 : -1;
        terms.push_back({x, sign});
        sub = (sub - free_bits) & free_bits;
      } while (sub != 0);
      lp.add_constraint("pfourier_" + std::to_string(alpha) + "_" + std::to_string(mask), std::move(terms),
                        Relation::GreaterEqual, 0);
    }
  }

  std::map<std::uint32_t, std::vector<std::uint64_t>> classes;
  for (std::uint64_t t = 0; t < tuples.size(); ++t) classes[spans[t].index].push_back(t);
  std::size_t gl = 0;
  for (const auto& [span, members] : classes) {
    for (std::size_t k = 1; k < members.size(); ++k) {
      lp.add_constraint("gl_" + std::to_string(gl++), {{members.front(), 1}, {members[k], -1}}, Relation::Equal, 0);
    }
  }
  return lp;
}

/// Zeta transform: P[S subset-of C~] = sum_{T >= S} P[T = C~].
inline CumulativeSolution pseudo_to_cumulative(const PseudoDistribution& p, const Lattice& lat) {
  return {lat.zeta_transform(p.values)};
}

/// Mobius inversion of pseudo_to_cumulative.
inline PseudoDistribution cumulative_to_pseudo(const CumulativeSolution& c, const Lattice& lat) {
  return {lat.mobius_transform(c.values)};
}

/// a_x := P[Span(x) subset-of C~] on every tuple of (F_q^n)^level.
inline std::vector<Rational> lift_pseudo_to_unsym(const PseudoDistribution& p, const Instance& inst,
                                                  const Lattice& lat, std::size_t tuple_cap = kDefaultTupleCap) {
  detail::require_matching(inst, lat);
  const TupleSpace tuples(inst.field, inst.n, inst.level, tuple_cap);
  const auto cumulative = pseudo_to_cumulative(p, lat);
  std::vector<Rational> a(tuples.size());
  for (std::uint64_t t = 0; t < tuples.size(); ++t) a[t] = cumulative[lat.canonicalize(tuples.vectors(t))];
  return a;
}

/// sum_S |S|^power P[S]: the objective of the Krawtchouk (power = level) and partial (power = 1)
/// pseudoprobability programs.
inline Rational size_weighted_value(const PseudoDistribution& p, const Lattice& lat, unsigned power) {
  Rational acc = 0;
  for (SubspaceId id : lat.ids()) {
    if (p[id] != 0) acc += Rational(ipow(lat.cardinality(id), power)) * p[id];
  }
  return acc;
}

/// Reads a pseudodistribution off a solution of a subspace-variable model.
inline PseudoDistribution pseudo_from_primal(std::span<const Rational> primal, const Lattice& lat) {
  if (primal.size() != lat.size()) throw InputError("primal vector does not match the lattice");
  return {std::vector<Rational>(primal.begin(), primal.end())};
}

}  // namespace krawlp
