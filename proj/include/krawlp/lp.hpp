#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "krawlp/errors.hpp"
#include "krawlp/rational.hpp"

namespace krawlp {

enum class Sense { Maximize, Minimize };
enum class Relation { LessEqual, Equal, GreaterEqual };

struct Term {
  std::size_t var = 0;
  Rational coef;

  friend bool operator==(const Term&, const Term&) = default;
};

struct Constraint {
  std::vector<Term> terms;  // sorted by variable, no zero coefficients
  Relation rel = Relation::LessEqual;
  Rational rhs;
  std::string label;

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

namespace detail {

inline bool valid_name(std::string_view name) {
  if (name.empty()) return false;
  for (char c : name) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == ':') return false;
  }
  return true;
}

// Sort by variable, merge repeats, drop zeros.
inline std::vector<Term> normalize_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
  std::vector<Term> out;
  out.reserve(terms.size());
  for (auto& t : terms) {
    if (!out.empty() && out.back().var == t.var) {
      out.back().coef += t.coef;
    } else {
      out.push_back(std::move(t));
    }
  }
  std::erase_if(out, [](const Term& t) { return t.coef == 0; });
  return out;
}

}  // namespace detail

/// Exact rational linear program over free variables. Sign restrictions are ordinary rows.
class LinearProgram {
 public:
  explicit LinearProgram(Sense sense = Sense::Maximize) : sense_(sense) {}

  Sense sense() const { return sense_; }
  void set_sense(Sense s) { sense_ = s; }

  std::size_t add_variable(std::string name) {
    if (!detail::valid_name(name)) throw InputError("invalid variable name '" + name + "'");
    if (var_index_.contains(name)) throw InputError("duplicate variable '" + name + "'");
    var_index_.emplace(name, variables_.size());
    variables_.push_back(std::move(name));
    return variables_.size() - 1;
  }

  void set_objective(std::vector<Term> terms) {
    check_vars(terms);
    objective_ = detail::normalize_terms(std::move(terms));
  }

  std::size_t add_constraint(std::string label, std::vector<Term> terms, Relation rel, Rational rhs) {
    if (!detail::valid_name(label)) throw InputError("invalid constraint label '" + label + "'");
    if (label_index_.contains(label)) throw InputError("duplicate constraint label '" + label + "'");
    check_vars(terms);
    label_index_.emplace(label, constraints_.size());
    constraints_.push_back({detail::normalize_terms(std::move(terms)), rel, std::move(rhs), std::move(label)});
    return constraints_.size() - 1;
  }

  std::span<const std::string> variables() const { return variables_; }
  std::span<const Term> objective() const { return objective_; }
  std::span<const Constraint> constraints() const { return constraints_; }
  std::size_t num_variables() const { return variables_.size(); }
  std::size_t num_constraints() const { return constraints_.size(); }

  std::optional<std::size_t> find_variable(std::string_view name) const {
    auto it = var_index_.find(std::string(name));
    if (it == var_index_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<std::size_t> find_constraint(std::string_view label) const {
    auto it = label_index_.find(std::string(label));
    if (it == label_index_.end()) return std::nullopt;
    return it->second;
  }

  const Constraint& constraint(std::string_view label) const {
    auto idx = find_constraint(label);
    if (!idx) throw InputError("unknown constraint '" + std::string(label) + "'");
    return constraints_[*idx];
  }

  friend bool operator==(const LinearProgram& a, const LinearProgram& b) {
    return a.sense_ == b.sense_ && a.variables_ == b.variables_ && a.objective_ == b.objective_ &&
           a.constraints_ == b.constraints_;
  }

 private:
  void check_vars(const std::vector<Term>& terms) const {
    for (const auto& t : terms) {
      if (t.var >= variables_.size()) throw InputError("term references undeclared variable " + std::to_string(t.var));
    }
  }

  Sense sense_;
  std::vector<std::string> variables_;
  std::unordered_map<std::string, std::size_t> var_index_;
  std::vector<Term> objective_;
  std::vector<Constraint> constraints_;
  std::unordered_map<std::string, std::size_t> label_index_;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };
enum class CertificateKind { Optimality, InfeasibilityRay, UnboundedRay };

inline std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "?";
}

inline std::string to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::Optimality: return "optimality";
    case CertificateKind::InfeasibilityRay: return "infeasibility-ray";
    case CertificateKind::UnboundedRay: return "unbounded-ray";
  }
  return "?";
}

/// Solver output. Vectors are indexed like the model's variables / constraints.
///
/// Dual sign convention: the objective gradient equals sum_i dual[i] * row_i. For a maximization,
/// <= rows carry dual >= 0 and >= rows carry dual <= 0; a minimization flips both. For an
/// infeasibility ray the same (maximization) signs hold, sum_i dual[i] * row_i = 0 and
/// sum_i dual[i] * rhs_i < 0. An unbounded ray is a primal direction stored in `ray`.
struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  CertificateKind certificate = CertificateKind::InfeasibilityRay;
  std::vector<Rational> primal;
  Rational objective_value;
  std::vector<Rational> dual;
  std::vector<Rational> ray;
  /// Some active row in the optimal basis has a zero multiplier, so the optimal face may
  /// contain points other than the returned vertex.
  bool degenerate_dual = false;
  std::size_t pivots = 0;
};

using Point = std::map<std::string, Rational>;

inline Rational row_activity(const Constraint& c, std::span<const Rational> x) {
  Rational acc = 0;
  for (const auto& t : c.terms) acc += t.coef * x[t.var];
  return acc;
}

inline bool row_satisfied(const Constraint& c, const Rational& lhs) {
  switch (c.rel) {
    case Relation::LessEqual: return lhs <= c.rhs;
    case Relation::Equal: return lhs == c.rhs;
    case Relation::GreaterEqual: return lhs >= c.rhs;
  }
  return false;
}

inline Rational objective_at(const LinearProgram& lp, std::span<const Rational> x) {
  Rational acc = 0;
  for (const auto& t : lp.objective()) acc += t.coef * x[t.var];
  return acc;
}

/// Labels of rows violated by a dense point (indexed by variable).
inline std::vector<std::string> check_feasible(const LinearProgram& lp, std::span<const Rational> x) {
  if (x.size() != lp.num_variables()) {
    throw InputError("point has " + std::to_string(x.size()) + " values for " + std::to_string(lp.num_variables()) +
                     " variables");
  }
  std::vector<std::string> violated;
  for (const auto& c : lp.constraints()) {
    if (!row_satisfied(c, row_activity(c, x))) violated.push_back(c.label);
  }
  return violated;
}

/// Named-point overload; absent variables are 0, unknown names are an input error.
inline std::vector<std::string> check_feasible(const LinearProgram& lp, const Point& point) {
  std::vector<Rational> x(lp.num_variables());
  for (const auto& [name, value] : point) {
    auto idx = lp.find_variable(name);
    if (!idx) throw InputError("unknown variable '" + name + "'");
    x[*idx] = value;
  }
  return check_feasible(lp, x);
}

/// Exact check of an optimality certificate: primal feasibility, dual sign feasibility,
/// stationarity (c = sum y_i a_i), and equal primal and dual objectives.
inline bool verify_optimality(const LinearProgram& lp, const LpSolution& sol) {
  if (sol.status != LpStatus::Optimal) return false;
  if (sol.primal.size() != lp.num_variables() || sol.dual.size() != lp.num_constraints()) return false;
  if (!check_feasible(lp, sol.primal).empty()) return false;
  const bool maximize = lp.sense() == Sense::Maximize;
  std::vector<Rational> gradient(lp.num_variables());
  Rational dual_value = 0;
  const auto rows = lp.constraints();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Rational& y = sol.dual[i];
    if (y == 0) continue;
    const bool nonneg_expected = (rows[i].rel == Relation::LessEqual) == maximize;
    if (rows[i].rel != Relation::Equal && (nonneg_expected ? y < 0 : y > 0)) return false;
    for (const auto& t : rows[i].terms) gradient[t.var] += y * t.coef;
    dual_value += y * rows[i].rhs;
  }
  std::vector<Rational> c(lp.num_variables());
  for (const auto& t : lp.objective()) c[t.var] = t.coef;
  if (gradient != c) return false;
  const Rational primal_value = objective_at(lp, sol.primal);
  return primal_value == dual_value && primal_value == sol.objective_value;
}

/// Farkas check: the dual ray proves 0 = y^T A x <= y^T b < 0 for every x.
inline bool verify_infeasibility(const LinearProgram& lp, const LpSolution& sol) {
  if (sol.status != LpStatus::Infeasible || sol.dual.size() != lp.num_constraints()) return false;
  std::vector<Rational> combo(lp.num_variables());
  Rational rhs = 0;
  const auto rows = lp.constraints();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Rational& y = sol.dual[i];
    if (y == 0) continue;
    if (rows[i].rel == Relation::LessEqual && y < 0) return false;
    if (rows[i].rel == Relation::GreaterEqual && y > 0) return false;
    for (const auto& t : rows[i].terms) combo[t.var] += y * t.coef;
    rhs += y * rows[i].rhs;
  }
  for (const auto& v : combo) {
    if (v != 0) return false;
  }
  return rhs < 0;
}

/// A feasible point plus a recession direction that improves the objective.
inline bool verify_unbounded(const LinearProgram& lp, const LpSolution& sol) {
  if (sol.status != LpStatus::Unbounded || sol.ray.size() != lp.num_variables()) return false;
  if (sol.primal.size() != lp.num_variables() || !check_feasible(lp, sol.primal).empty()) return false;
  for (const auto& c : lp.constraints()) {
    const Rational a = row_activity(c, sol.ray);
    if (c.rel == Relation::LessEqual && a > 0) return false;
    if (c.rel == Relation::GreaterEqual && a < 0) return false;
    if (c.rel == Relation::Equal && a != 0) return false;
  }
  const Rational gain = objective_at(lp, sol.ray);
  return lp.sense() == Sense::Maximize ? gain > 0 : gain < 0;
}

namespace detail {

inline void write_terms(std::ostream& os, const LinearProgram& lp, std::span<const Term> terms) {
  if (terms.empty()) {
    os << " 0";
    return;
  }
  for (const auto& t : terms) os << ' ' << lp.variables()[t.var] << ':' << to_string(t.coef);
}

inline const char* relation_token(Relation r) {
  switch (r) {
    case Relation::LessEqual: return "<=";
    case Relation::Equal: return "=";
    case Relation::GreaterEqual: return ">=";
  }
  return "?";
}

}  // namespace detail

/// Plain-text model format, version 1. Lines appear in declaration order:
///
///     lp v1
///     sense max|min
///     var <name>
///     obj <name>:<p>/<q> ...          (`obj 0` for an empty objective)
///     con <label> : <name>:<p>/<q> ... <rel> <p>/<q>   (`0` for an empty row)
inline std::string export_text(const LinearProgram& lp) {
  std::ostringstream os;
  os << "lp v1\n";
  os << "sense " << (lp.sense() == Sense::Maximize ? "max" : "min") << '\n';
  for (const auto& v : lp.variables()) os << "var " << v << '\n';
  os << "obj";
  detail::write_terms(os, lp, lp.objective());
  os << '\n';
  for (const auto& c : lp.constraints()) {
    os << "con " << c.label << " :";
    detail::write_terms(os, lp, c.terms);
    os << ' ' << detail::relation_token(c.rel) << ' ' << to_string(c.rhs) << '\n';
  }
  return os.str();
}

/// Inverse of export_text.
inline LinearProgram parse_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& msg) -> InputError {
    return InputError("lp text line " + std::to_string(lineno) + ": " + msg);
  };
  auto tokens_of = [](const std::string& l) {
    std::vector<std::string> toks;
    std::istringstream ls(l);
    for (std::string t; ls >> t;) toks.push_back(t);
    return toks;
  };
  auto parse_term = [&](const LinearProgram& lp, const std::string& tok) {
    const auto colon = tok.rfind(':');
    if (colon == std::string::npos) throw fail("expected name:coef, got '" + tok + "'");
    auto var = lp.find_variable(tok.substr(0, colon));
    if (!var) throw fail("unknown variable '" + tok.substr(0, colon) + "'");
    return Term{*var, parse_rational(tok.substr(colon + 1))};
  };

  LinearProgram lp;
  bool header = false;
  bool sense = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = tokens_of(line);
    if (toks.empty()) continue;
    if (!header) {
      if (toks.size() != 2 || toks[0] != "lp" || toks[1] != "v1") throw fail("missing 'lp v1' header");
      header = true;
      continue;
    }
    const std::string& kind = toks[0];
    if (kind == "sense") {
      if (toks.size() != 2 || (toks[1] != "max" && toks[1] != "min")) throw fail("bad sense line");
      lp.set_sense(toks[1] == "max" ? Sense::Maximize : Sense::Minimize);
      sense = true;
    } else if (kind == "var") {
      if (toks.size() != 2) throw fail("bad var line");
      lp.add_variable(toks[1]);
    } else if (kind == "obj") {
      std::vector<Term> terms;
      for (std::size_t i = 1; i < toks.size(); ++i) {
        if (toks[i] == "0" && toks.size() == 2) break;
        terms.push_back(parse_term(lp, toks[i]));
      }
      lp.set_objective(std::move(terms));
    } else if (kind == "con") {
      if (toks.size() < 5 || toks[2] != ":") throw fail("bad con line");
      const std::string& rel_tok = toks[toks.size() - 2];
      Relation rel;
      if (rel_tok == "<=") {
        rel = Relation::LessEqual;
      } else if (rel_tok == "=") {
        rel = Relation::Equal;
      } else if (rel_tok == ">=") {
        rel = Relation::GreaterEqual;
      } else {
        throw fail("bad relation '" + rel_tok + "'");
      }
      std::vector<Term> terms;
      const std::size_t last_term = toks.size() - 2;
      for (std::size_t i = 3; i < last_term; ++i) {
        if (toks[i] == "0" && last_term == 4) break;
        terms.push_back(parse_term(lp, toks[i]));
      }
      lp.add_constraint(toks[1], std::move(terms), rel, parse_rational(toks.back()));
    } else {
      throw fail("unknown line kind '" + kind + "'");
    }
  }
  if (!header) throw InputError("lp text: missing 'lp v1' header");
  if (!sense) throw InputError("lp text: missing sense line");
  return lp;
}

}  // namespace krawlp
