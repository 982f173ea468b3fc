#pragma once

#include <cstddef>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "krawlp/errors.hpp"
#include "krawlp/hierarchy.hpp"
#include "krawlp/lattice.hpp"
#include "krawlp/lp.hpp"
#include "krawlp/rational.hpp"
#include "krawlp/simplex.hpp"

namespace krawlp {

/// Exhaustive A_q^Lin(n, d) = q^k0 with a code attaining it.
struct OracleReport {
  Integer A;
  unsigned k0 = 0;
  SubspaceId witness;
};

inline OracleReport brute_force_A(const Instance& inst, const Lattice& lat) {
  detail::require_matching(inst, lat);
  OracleReport report{Integer(1), 0, lat.zero()};
  for (SubspaceId id : lat.ids()) {
    // ids ascend by dimension, so the first code of each larger dimension wins
    if (lat.dim(id) > report.k0 && !lat.min_weight(id).violates_distance(inst.d)) {
      report.k0 = lat.dim(id);
      report.witness = id;
    }
  }
  report.A = ipow(inst.field.q(), report.k0);
  return report;
}

/// The point mass on one code.
inline PseudoDistribution true_solution(SubspaceId code, const Lattice& lat) {
  PseudoDistribution p{std::vector<Rational>(lat.size())};
  p[code] = 1;
  return p;
}

/// Nonnegative and summing to one, i.e. a convex combination of true solutions.
inline bool integrality_test(const PseudoDistribution& p) {
  Rational total = 0;
  for (const auto& v : p.values) {
    if (v < 0) return false;
    total += v;
  }
  return total == 1;
}

/// sum_{S <= U} |S|^level P[S], the unscaled Fourier row at U.
inline Rational fourier_row_value(const PseudoDistribution& p, const Lattice& lat, SubspaceId u, unsigned level) {
  Rational acc = 0;
  for (SubspaceId s : lat.subsets(u)) {
    if (p[s] != 0) acc += Rational(ipow(lat.cardinality(s), level)) * p[s];
  }
  return acc;
}

struct NonintegralPoint {
  PseudoDistribution point;
  SubspaceId code;  // T: a dimension-k0 code of distance >= d
  SubspaceId line;  // T': the first one-dimensional subspace of T
};

/// Feasible point of the Krawtchouk pseudoprobability program with a negative entry:
/// P[T] = 1 - eps + eps/|T'|^level, P[T'] = -eps/|T'|^level, P[{0}] = eps.
inline NonintegralPoint nonintegral_point(const Lattice& lat, unsigned d, unsigned level, const Rational& eps) {
  if (eps <= 0 || eps >= 1) throw PreconditionError("epsilon must lie in (0, 1), got " + to_string(eps));
  const Instance inst{lat.field(), lat.n(), d, level};
  const auto oracle = brute_force_A(inst, lat);
  if (oracle.k0 < 2) {
    throw PreconditionError("construction needs k0 >= 2 (k0=" + std::to_string(oracle.k0) + ")");
  }
  NonintegralPoint out{PseudoDistribution{std::vector<Rational>(lat.size())}, oracle.witness, lat.zero()};
  for (SubspaceId s : lat.stratum(1)) {
    if (lat.is_subspace(s, oracle.witness)) {
      out.line = s;
      break;
    }
  }
  const Rational shrink = eps / Rational(ipow(lat.cardinality(out.line), level));
  out.point[out.code] = 1 - (eps - shrink);
  out.point[out.line] = -shrink;
  out.point[lat.zero()] = eps;
  return out;
}

struct EscalationResult {
  unsigned level = 0;
  SubspaceId witness;
  bool reached_cap = false;
};

inline constexpr unsigned kDefaultEscalationCap = 64;

/// Smallest level >= `level` at which the Fourier row of the largest-dimension negative entry
/// (first in canonical order on ties) evaluates below zero.
inline EscalationResult infeasibility_level(const PseudoDistribution& p, const Lattice& lat, unsigned level,
                                            unsigned cap = kDefaultEscalationCap) {
  std::optional<SubspaceId> witness;
  for (SubspaceId id : lat.ids()) {
    if (p[id] < 0 && (!witness || lat.dim(id) > lat.dim(*witness))) witness = id;
  }
  if (!witness) throw PreconditionError("pseudodistribution has no negative entry");
  for (unsigned l = level; l <= cap; ++l) {
    if (fourier_row_value(p, lat, *witness, l) < 0) return {l, *witness, false};
  }
  return {cap, *witness, true};
}

/// Raised when every support element already has dimension >= k0.
class NoTransferPossible : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

struct MassTransfer {
  PseudoDistribution next;
  SubspaceId source;  // S_min
  Rational moved;     // P[S_min]
  Rational predicted_gain;  // |S_min|^level (q^level - 1) P[S_min]
};

/// Moves the mass of a minimum-dimension support element equally onto its upper covers.
inline MassTransfer mass_transfer_step(const PseudoDistribution& p, const Lattice& lat, unsigned k0, unsigned level) {
  if (p.values.size() != lat.size()) throw InputError("pseudodistribution does not match the lattice");
  std::optional<unsigned> min_dim;
  for (SubspaceId id : lat.ids()) {
    if (p[id] != 0) {
      min_dim = lat.dim(id);
      break;
    }
  }
  if (!min_dim || *min_dim >= k0) {
    throw NoTransferPossible("support already lies in dimension >= k0=" + std::to_string(k0));
  }
  std::optional<SubspaceId> source;
  for (SubspaceId id : lat.stratum(*min_dim)) {
    if (p[id] > 0) {
      source = id;
      break;
    }
  }
  if (!source) throw PreconditionError("minimum-dimension support carries no positive mass");
  const auto covers = lat.covers(*source);
  MassTransfer out{p, *source, p[*source], Rational(0)};
  const Rational share = out.moved / Rational(static_cast<long>(covers.size()));
  out.next[*source] = 0;
  for (SubspaceId t : covers) out.next[t] += share;
  const unsigned q = lat.field().q();
  out.predicted_gain =
      Rational(ipow(lat.cardinality(*source), level)) * Rational(ipow(q, level) - 1) * out.moved;
  return out;
}

/// Outcome of checking one exact claim.
struct VerificationReport {
  std::string claim;
  Rational lp_value;
  Rational expected;
  bool equal = false;
  std::map<std::string, std::string> artifacts;

  std::string to_text() const {
    std::ostringstream os;
    os << "claim: " << claim << '\n';
    os << "lp_value: " << to_string(lp_value) << '\n';
    os << "expected: " << to_string(expected) << '\n';
    os << "equal: " << (equal ? "true" : "false") << '\n';
    for (const auto& [k, v] : artifacts) os << k << ": " << v << '\n';
    return os.str();
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["claim"] = claim;
    j["lp_value"] = to_string(lp_value);
    j["expected"] = to_string(expected);
    j["equal"] = equal;
    nlohmann::ordered_json art = nlohmann::ordered_json::object();
    for (const auto& [k, v] : artifacts) art[k] = v;
    j["artifacts"] = art;
    return j;
  }
};

namespace detail {

inline VerificationReport solve_and_compare(const std::string& claim, const LinearProgram& lp, const Rational& expected,
                                            const Lattice& lat) {
  VerificationReport r;
  r.claim = claim;
  r.expected = expected;
  const auto sol = solve(lp);
  r.artifacts["status"] = to_string(sol.status);
  r.artifacts["rows"] = std::to_string(lp.num_constraints());
  r.artifacts["variables"] = std::to_string(lp.num_variables());
  r.artifacts["pivots"] = std::to_string(sol.pivots);
  if (sol.status != LpStatus::Optimal) return r;
  r.lp_value = sol.objective_value;
  r.equal = r.lp_value == expected;
  r.artifacts["certificate_verified"] = verify_optimality(lp, sol) ? "true" : "false";
  const auto vertex = pseudo_from_primal(sol.primal, lat);
  r.artifacts["vertex_integral"] = integrality_test(vertex) ? "true" : "false";
  r.artifacts["alternative_optima_possible"] = sol.degenerate_dual ? "true" : "false";
  return r;
}

}  // namespace detail

/// Solves both pseudoprobability programs and compares against the brute-force oracle:
/// val(Krawtchouk) = A^level and val(partial) = A, exactly. Each report also records whether the
/// solver's certificate verifies and whether the returned optimal vertex is integral.
inline std::vector<VerificationReport> verify_completeness(const Instance& inst, const Lattice& lat) {
  detail::require_pseudo_level(inst);
  const auto oracle = brute_force_A(inst, lat);
  std::vector<VerificationReport> out;
  out.push_back(detail::solve_and_compare("kraw-pseudo value = A^level", build_kraw_pseudo(inst, lat),
                                          Rational(ipow(oracle.A, inst.level)), lat));
  out.push_back(detail::solve_and_compare("partial-pseudo value = A", build_partial_pseudo(inst, lat),
                                          Rational(oracle.A), lat));
  for (auto& r : out) {
    r.artifacts["A"] = oracle.A.str();
    r.artifacts["k0"] = std::to_string(oracle.k0);
  }
  return out;
}

}  // namespace krawlp
