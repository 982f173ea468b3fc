#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "krawlp/hierarchy.hpp"
#include "krawlp/lattice.hpp"
#include "krawlp/oracle.hpp"
#include "krawlp/simplex.hpp"

// Executable verification suites behind `krawlp verify <suite>`.

namespace krawlp {

struct Check {
  std::string label;
  bool pass = false;
  std::string lhs;
  std::string rhs;
};

struct SuiteResult {
  std::string name;
  std::vector<Check> checks;

  bool pass() const {
    for (const auto& c : checks) {
      if (!c.pass) return false;
    }
    return true;
  }

  void expect_equal(std::string label, const Rational& lhs, const Rational& rhs) {
    checks.push_back({std::move(label), lhs == rhs, to_string(lhs), to_string(rhs)});
  }
  void expect_equal(std::string label, const std::string& lhs, const std::string& rhs) {
    checks.push_back({std::move(label), lhs == rhs, lhs, rhs});
  }
  void expect_true(std::string label, bool value) {
    checks.push_back({std::move(label), value, value ? "true" : "false", "true"});
  }
};

struct SuiteParams {
  unsigned q = 2;
  unsigned n = 3;
  unsigned d = 2;
  unsigned level = 0;  // 0: use n
  Rational epsilon{1, 2};
  std::size_t subspace_cap = kDefaultSubspaceCap;
  std::size_t tuple_cap = kDefaultTupleCap;
  unsigned level_cap = kDefaultEscalationCap;
  std::uint64_t seed = 20240521;
  unsigned samples = 100;

  unsigned effective_level() const { return level == 0 ? n : level; }
};

inline SuiteResult suite_completeness(const SuiteParams& p) {
  SuiteResult res{"completeness", {}};
  const auto inst = Instance::make(p.q, p.n, p.d, p.effective_level());
  const auto lat = Lattice::enumerate(inst.field, inst.n, p.subspace_cap);
  for (const auto& r : verify_completeness(inst, lat)) {
    res.expect_equal(r.claim, r.lp_value, r.expected);
    res.expect_true(r.claim + ": certificate verified", r.artifacts.count("certificate_verified") &&
                                                            r.artifacts.at("certificate_verified") == "true");
    res.expect_true(r.claim + ": optimal vertex integral",
                    r.artifacts.count("vertex_integral") && r.artifacts.at("vertex_integral") == "true");
  }
  return res;
}

inline SuiteResult suite_nonintegral(const SuiteParams& p) {
  SuiteResult res{"nonintegral", {}};
  const auto inst = Instance::make(p.q, p.n, p.d, p.effective_level());
  const auto lat = Lattice::enumerate(inst.field, inst.n, p.subspace_cap);
  const auto np = nonintegral_point(lat, inst.d, inst.level, p.epsilon);
  const auto lp = build_kraw_pseudo(inst, lat);
  const auto violated = check_feasible(lp, np.point.values);
  res.expect_equal("violated rows of kraw-pseudo", violated.empty() ? std::string("none") : violated.front(), "none");
  res.expect_equal("P[T'] = -eps/|T'|^level", np.point[np.line],
                   -p.epsilon / Rational(ipow(lat.cardinality(np.line), inst.level)));
  res.expect_true("P[T'] < 0", np.point[np.line] < 0);
  res.expect_equal("sum of P", [&] {
    Rational s = 0;
    for (const auto& v : np.point.values) s += v;
    return s;
  }(), Rational(1));
  res.expect_equal("Fourier row at T' vanishes", fourier_row_value(np.point, lat, np.line, inst.level), Rational(0));
  Rational up = 0;
  for (SubspaceId s : lat.supersets(np.line)) up += np.point[s];
  res.expect_equal("nonnegativity row at T' = 1 - eps", up, 1 - p.epsilon);
  res.expect_true("integrality_test rejects the point", !integrality_test(np.point));
  return res;
}

inline SuiteResult suite_escalation(const SuiteParams& p) {
  SuiteResult res{"escalation", {}};
  const auto inst = Instance::make(p.q, p.n, p.d, p.effective_level());
  const auto lat = Lattice::enumerate(inst.field, inst.n, p.subspace_cap);
  const auto np = nonintegral_point(lat, inst.d, inst.level, p.epsilon);
  const auto esc = infeasibility_level(np.point, lat, inst.level, p.level_cap);
  res.expect_true("escalation terminated below the cap", !esc.reached_cap);
  res.expect_equal("witness U = T'", std::to_string(esc.witness.index), std::to_string(np.line.index));
  res.expect_true("Fourier row at U negative at returned level",
                  fourier_row_value(np.point, lat, esc.witness, esc.level) < 0);
  if (esc.level > inst.level) {
    res.expect_true("Fourier row at U nonnegative one level below",
                    fourier_row_value(np.point, lat, esc.witness, esc.level - 1) >= 0);
  }
  Instance higher = inst;
  higher.level = esc.level;
  const auto violated = check_feasible(build_kraw_pseudo(higher, lat), np.point.values);
  res.expect_true("point infeasible for kraw-pseudo at returned level", !violated.empty());
  res.checks.push_back({"escalated level", true, std::to_string(esc.level), std::to_string(esc.level)});
  return res;
}

inline SuiteResult suite_masstransfer(const SuiteParams& p) {
  SuiteResult res{"masstransfer", {}};
  const auto inst = Instance::make(p.q, p.n, p.d, p.effective_level());
  const auto lat = Lattice::enumerate(inst.field, inst.n, p.subspace_cap);
  const auto oracle = brute_force_A(inst, lat);
  const auto lp = build_kraw_pseudo_weak(inst, lat, oracle.k0);
  auto point = true_solution(lat.zero(), lat);
  for (unsigned step = 1;; ++step) {
    MassTransfer mt;
    try {
      mt = mass_transfer_step(point, lat, oracle.k0, inst.level);
    } catch (const NoTransferPossible&) {
      break;
    }
    const Rational before = size_weighted_value(point, lat, inst.level);
    const Rational after = size_weighted_value(mt.next, lat, inst.level);
    const std::string tag = "step " + std::to_string(step) + " (S_min=" + std::to_string(mt.source.index) + ")";
    res.expect_equal(tag + ": objective gain", after - before, mt.predicted_gain);
    res.expect_true(tag + ": strict increase", after > before);
    res.expect_true(tag + ": feasible for kraw-pseudo-weak", check_feasible(lp, mt.next.values).empty());
    point = std::move(mt.next);
  }
  res.expect_true("final point integral", integrality_test(point));
  res.expect_equal("final objective = A^level", size_weighted_value(point, lat, inst.level),
                   Rational(ipow(oracle.A, inst.level)));
  return res;
}

inline SuiteResult suite_mobius(const SuiteParams& p) {
  SuiteResult res{"mobius", {}};
  const auto field = FieldSpec::of_order(p.q);
  const auto lat = Lattice::enumerate(field, p.n, p.subspace_cap);
  std::mt19937_64 rng(p.seed);
  std::uniform_int_distribution<long> num(-50, 50);
  std::uniform_int_distribution<long> den(1, 12);
  unsigned round_trips = 0;
  for (unsigned s = 0; s < p.samples; ++s) {
    std::vector<Rational> v(lat.size());
    for (auto& x : v) x = Rational(num(rng), den(rng));
    if (lat.mobius_transform(lat.zeta_transform(v)) == v && lat.zeta_transform(lat.mobius_transform(v)) == v) {
      ++round_trips;
    }
  }
  res.expect_equal("exact round trips", std::to_string(round_trips), std::to_string(p.samples));
  unsigned lower_failures = 0, upper_failures = 0, closed_form_failures = 0;
  for (SubspaceId s : lat.ids()) {
    for (SubspaceId t : lat.supersets(s)) {
      Integer by_lower = 0, by_upper = 0;
      for (SubspaceId u : lat.supersets(s)) {
        if (!lat.is_subspace(u, t)) continue;
        by_lower += lat.mobius(s, u);
        by_upper += lat.mobius(u, t);
      }
      const Integer expected = (s == t) ? 1 : 0;
      lower_failures += by_lower != expected;
      upper_failures += by_upper != expected;
      closed_form_failures += lat.mobius(s, t) != lat.mobius_recursive(s, t);
    }
  }
  res.expect_equal("intervals failing sum_U mu(S,U) = [S=T]", std::to_string(lower_failures), "0");
  res.expect_equal("intervals failing sum_U mu(U,T) = [S=T]", std::to_string(upper_failures), "0");
  res.expect_equal("closed form != recursion", std::to_string(closed_form_failures), "0");
  return res;
}

/// Character sums over S^level against their closed forms (q = 2), for every alpha, S, and mixture.
inline SuiteResult suite_charsum(const SuiteParams& p) {
  SuiteResult res{"charsum", {}};
  if (p.q != 2) throw UnsupportedFieldError("charsum suite is q=2 only");
  const auto field = FieldSpec::of_order(2);
  const unsigned level = p.effective_level();
  const auto lat = Lattice::enumerate(field, p.n, p.subspace_cap);
  const TupleSpace tuples(field, p.n, level, p.tuple_cap);
  unsigned full_fail = 0, partial_fail = 0, cases = 0;
  for (std::uint64_t a = 0; a < tuples.size(); ++a) {
    const auto alpha = tuples.vectors(a);
    for (SubspaceId s : lat.ids()) {
      const auto elems = lat.elements(s);
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << level); ++mask) {
        ++cases;
        // brute force over x in S^level
        long brute = 0;
        std::vector<std::size_t> digits(level, 0);
        for (;;) {
          long term = 1;
          for (unsigned i = 0; i < level && term != 0; ++i) {
            const FqVector& xi = elems[digits[i]];
            if (mask & (std::uint64_t{1} << i)) {
              term *= dot(field, alpha[i], xi).value == 0 ? 1 : -1;
            } else {
              term *= (xi == alpha[i]) ? 1 : 0;
            }
          }
          brute += term;
          unsigned k = 0;
          while (k < level && ++digits[k] == elems.size()) digits[k++] = 0;
          if (k == level) break;
        }
        // closed form
        std::vector<FqVector> char_part;
        long closed = 1;
        unsigned chars = 0;
        for (unsigned i = 0; i < level; ++i) {
          if (mask & (std::uint64_t{1} << i)) {
            char_part.push_back(alpha[i]);
            ++chars;
          } else if (!lat.contains_vector(s, alpha[i])) {
            closed = 0;
          }
        }
        const SubspaceId annihilator = lat.dual(lat.canonicalize(char_part));
        if (!lat.is_subspace(s, annihilator)) closed = 0;
        if (closed != 0) {
          closed = 1;
          for (unsigned i = 0; i < chars; ++i) closed *= static_cast<long>(elems.size());
        }
        const bool full = mask + 1 == (std::uint64_t{1} << level);
        if (brute != closed) ++(full ? full_fail : partial_fail);
      }
    }
  }
  res.expect_equal("cases checked", std::to_string(cases), std::to_string(cases));
  res.expect_equal("full character sums mismatching |S|^l [S <= Span(alpha)^perp]", std::to_string(full_fail), "0");
  res.expect_equal("mixed sums mismatching the closed form", std::to_string(partial_fail), "0");
  return res;
}

inline SuiteResult suite_partial_integrality(const SuiteParams& p) {
  SuiteResult res{"partial-integrality", {}};
  const auto inst = Instance::make(p.q, p.n, p.d, p.effective_level());
  const auto lat = Lattice::enumerate(inst.field, inst.n, p.subspace_cap);
  const auto lp = build_partial_pseudo(inst, lat);
  std::vector<bool> singleton(lp.num_variables(), false);
  for (const auto& c : lp.constraints()) {
    if (c.rel == Relation::GreaterEqual && c.rhs == 0 && c.terms.size() == 1 && c.terms.front().coef > 0) {
      singleton[c.terms.front().var] = true;
    }
  }
  unsigned missing = 0;
  for (bool b : singleton) missing += !b;
  res.expect_equal("variables without a singleton >= 0 row", std::to_string(missing), "0");
  unsigned negative = 0, unverified = 0;
  for (std::size_t v = 0; v < lp.num_variables(); ++v) {
    LinearProgram probe = lp;
    probe.set_sense(Sense::Minimize);
    probe.set_objective({{v, 1}});
    const auto sol = solve(probe);
    if (sol.status != LpStatus::Optimal || sol.objective_value < 0) ++negative;
    if (!verify_optimality(probe, sol)) ++unverified;
  }
  res.expect_equal("variables with negative minimum", std::to_string(negative), "0");
  res.expect_equal("minimizations failing certificate check", std::to_string(unverified), "0");
  return res;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"completeness", "nonintegral", "escalation", "masstransfer",
                                              "mobius", "charsum", "partial-integrality"};
  return names;
}

inline SuiteResult run_suite(const std::string& name, const SuiteParams& p) {
  if (name == "completeness") return suite_completeness(p);
  if (name == "nonintegral") return suite_nonintegral(p);
  if (name == "escalation") return suite_escalation(p);
  if (name == "masstransfer") return suite_masstransfer(p);
  if (name == "mobius") return suite_mobius(p);
  if (name == "charsum") return suite_charsum(p);
  if (name == "partial-integrality") return suite_partial_integrality(p);
  throw InputError("unknown suite '" + name + "'");
}

}  // namespace krawlp
