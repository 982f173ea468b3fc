#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "krawlp/lp.hpp"
#include "krawlp/rational.hpp"

namespace krawlp {

struct SolveOptions {
  /// Consecutive degenerate pivots tolerated under Dantzig pricing before switching to Bland's rule.
  std::size_t degenerate_limit = 50;
  /// Use Bland's rule throughout.
  bool bland_only = false;
};

namespace detail {

/// Exact revised simplex applied to the dual of
///
///     max c'x  s.t.  a'_i x <= b'_i (i in I),  a'_i x = b'_i (i in E),  x free,
///
/// i.e. to  min b'y  s.t.  A'^T y = c',  y_I >= 0  (y_E split into two signed columns).
/// The basis has one slot per primal variable, so its size is independent of the row count;
/// the simplex multipliers of an optimal dual basis are an optimal primal vertex.
class DualRevisedSimplex {
 public:
  DualRevisedSimplex(const LinearProgram& lp, const SolveOptions& options, bool zero_objective)
      : lp_(lp), options_(options), n_(lp.num_variables()) {
    build_rows();
    objective_.assign(n_, Rational(0));
    if (!zero_objective) {
      const Rational s = lp.sense() == Sense::Maximize ? 1 : -1;
      for (const auto& t : lp.objective()) objective_[t.var] = s * t.coef;
    }
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      columns_.push_back({static_cast<std::uint32_t>(i), 1});
      if (rows_[i].equality) columns_.push_back({static_cast<std::uint32_t>(i), -1});
    }
  }

  enum class Outcome { Optimal, DualUnbounded, DualInfeasible };

  Outcome run() {
    init_artificial_basis();
    if (!iterate(/*phase=*/1)) return Outcome::DualInfeasible;  // cannot happen: phase 1 is bounded
    Rational infeasibility = 0;
    for (std::size_t r = 0; r < n_; ++r) {
      if (is_artificial(head_[r])) infeasibility += x_basic_[r];
    }
    if (infeasibility > 0) {
      farkas_direction_ = pi_;
      return Outcome::DualInfeasible;
    }
    drive_out_artificials();
    recompute_multipliers(/*phase=*/2);
    if (!iterate(/*phase=*/2)) return Outcome::DualUnbounded;
    return Outcome::Optimal;
  }

  /// Primal vertex (multipliers of the optimal dual basis).
  const std::vector<Rational>& multipliers() const { return pi_; }

  /// Phase-1 multipliers when the dual is infeasible: a primal recession direction.
  const std::vector<Rational>& farkas_direction() const { return farkas_direction_; }

  /// Dual values in the model's sign convention (see LpSolution).
  std::vector<Rational> model_duals(bool include_sense) const {
    std::vector<Rational> y(rows_.size());
    for (std::size_t r = 0; r < n_; ++r) {
      if (is_artificial(head_[r])) continue;
      const Column& col = columns_[head_[r]];
      if (col.sign > 0) {
        y[col.row] += x_basic_[r];
      } else {
        y[col.row] -= x_basic_[r];
      }
    }
    return to_model_signs(std::move(y), include_sense);
  }

  /// Dual ray proving primal infeasibility, in the model's sign convention.
  std::vector<Rational> infeasibility_ray() const {
    std::vector<Rational> y(rows_.size());
    auto accumulate = [&](std::size_t j, const Rational& amount) {
      if (is_artificial(j)) return;
      const Column& col = columns_[j];
      if (col.sign > 0) {
        y[col.row] += amount;
      } else {
        y[col.row] -= amount;
      }
    };
    accumulate(ray_entering_, Rational(1));
    for (std::size_t r = 0; r < n_; ++r) {
      if (ray_direction_[r] != 0) accumulate(head_[r], -ray_direction_[r]);
    }
    return to_model_signs(std::move(y), /*include_sense=*/false);
  }

  bool degenerate_dual() const {
    for (std::size_t r = 0; r < n_; ++r) {
      if (!is_artificial(head_[r]) && x_basic_[r] == 0) return true;
    }
    return false;
  }

  std::size_t pivots() const { return pivots_; }

 private:
  struct Row {
    std::vector<std::pair<std::uint32_t, Rational>> terms;  // integer coefficients
    Rational rhs;
    bool equality = false;
    Rational model_scale;  // internal row = model_scale * model row
  };

  struct Column {
    std::uint32_t row;
    int sign;
  };

  void build_rows() {
    rows_.reserve(lp_.num_constraints());
    for (const auto& c : lp_.constraints()) {
      Row row;
      row.equality = c.rel == Relation::Equal;
      // clear denominators, then divide by the content
      Integer lcm = 1;
      auto absorb_den = [&](const Rational& v) {
        lcm = boost::multiprecision::lcm(lcm, denominator_of(v));
      };
      for (const auto& t : c.terms) absorb_den(t.coef);
      absorb_den(c.rhs);
      Integer content = 0;
      auto absorb_num = [&](const Rational& v) {
        const Integer scaled = numerator_of(v) * (lcm / denominator_of(v));
        content = boost::multiprecision::gcd(content, scaled);
      };
      for (const auto& t : c.terms) absorb_num(t.coef);
      absorb_num(c.rhs);
      if (content == 0) content = 1;
      Rational scale(lcm, content);
      if (c.rel == Relation::GreaterEqual) scale = -scale;
      row.model_scale = scale;
      for (const auto& t : c.terms) row.terms.emplace_back(static_cast<std::uint32_t>(t.var), t.coef * scale);
      row.rhs = c.rhs * scale;
      rows_.push_back(std::move(row));
    }
  }

  std::vector<Rational> to_model_signs(std::vector<Rational> y, bool include_sense) const {
    const bool flip = include_sense && lp_.sense() == Sense::Minimize;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (y[i] == 0) continue;
      y[i] *= rows_[i].model_scale;
      if (flip) y[i] = -y[i];
    }
    return y;
  }

  std::size_t num_real() const { return columns_.size(); }
  bool is_artificial(std::size_t j) const { return j >= num_real(); }

  Rational cost(std::size_t j, int phase) const {
    if (is_artificial(j)) return phase == 1 ? Rational(1) : Rational(0);
    if (phase == 1) return Rational(0);
    const Column& col = columns_[j];
    return col.sign > 0 ? rows_[col.row].rhs : Rational(-rows_[col.row].rhs);
  }

  // pi . column_j
  Rational dot_multipliers(std::size_t j) const {
    if (is_artificial(j)) {
      const std::size_t k = j - num_real();
      return artificial_sign_[k] > 0 ? pi_[k] : Rational(-pi_[k]);
    }
    const Column& col = columns_[j];
    Rational acc = 0;
    for (const auto& [var, coef] : rows_[col.row].terms) {
      if (pi_[var] != 0) acc += pi_[var] * coef;
    }
    return col.sign > 0 ? acc : Rational(-acc);
  }

  // B^{-1} column_j
  std::vector<Rational> ftran(std::size_t j) const {
    std::vector<Rational> u(n_);
    if (is_artificial(j)) {
      const std::size_t k = j - num_real();
      for (std::size_t i = 0; i < n_; ++i) {
        if (binv_[k][i] != 0) u[i] = artificial_sign_[k] > 0 ? binv_[k][i] : Rational(-binv_[k][i]);
      }
      return u;
    }
    const Column& col = columns_[j];
    for (const auto& [var, coef] : rows_[col.row].terms) {
      const Rational a = col.sign > 0 ? coef : Rational(-coef);
      const auto& bcol = binv_[var];
      for (std::size_t i = 0; i < n_; ++i) {
        if (bcol[i] != 0) u[i] += bcol[i] * a;
      }
    }
    return u;
  }

  void init_artificial_basis() {
    const std::size_t real = num_real();
    basic_.assign(real + n_, 0);
    head_.resize(n_);
    x_basic_.resize(n_);
    artificial_sign_.resize(n_);
    binv_.assign(n_, std::vector<Rational>(n_));
    pi_.assign(n_, Rational(0));
    for (std::size_t k = 0; k < n_; ++k) {
      artificial_sign_[k] = objective_[k] >= 0 ? 1 : -1;
      head_[k] = real + k;
      basic_[real + k] = 1;
      x_basic_[k] = artificial_sign_[k] > 0 ? objective_[k] : Rational(-objective_[k]);
      binv_[k][k] = artificial_sign_[k];
      pi_[k] = artificial_sign_[k];
    }
  }

  void recompute_multipliers(int phase) {
    for (std::size_t k = 0; k < n_; ++k) {
      Rational acc = 0;
      for (std::size_t i = 0; i < n_; ++i) {
        if (binv_[k][i] == 0) continue;
        const Rational g = cost(head_[i], phase);
        if (g != 0) acc += g * binv_[k][i];
      }
      pi_[k] = acc;
    }
  }

  void pivot(std::size_t r, std::size_t entering, const std::vector<Rational>& u, const Rational& reduced_cost) {
    const Rational pivot_value = u[r];
    const Rational theta = x_basic_[r] / pivot_value;
    // multipliers use the old row r of B^{-1}
    if (reduced_cost != 0) {
      const Rational ratio = reduced_cost / pivot_value;
      for (std::size_t k = 0; k < n_; ++k) {
        if (binv_[k][r] != 0) pi_[k] += ratio * binv_[k][r];
      }
    }
    if (theta != 0) {
      for (std::size_t i = 0; i < n_; ++i) {
        if (i != r && u[i] != 0) x_basic_[i] -= theta * u[i];
      }
    }
    x_basic_[r] = theta;
    std::vector<std::size_t> touched;
    for (std::size_t i = 0; i < n_; ++i) {
      if (i != r && u[i] != 0) touched.push_back(i);
    }
    for (std::size_t k = 0; k < n_; ++k) {
      auto& bcol = binv_[k];
      if (bcol[r] == 0) continue;
      bcol[r] /= pivot_value;
      const Rational& pivot_row_entry = bcol[r];
      for (std::size_t i : touched) bcol[i] -= u[i] * pivot_row_entry;
    }
    basic_[head_[r]] = 0;
    head_[r] = entering;
    basic_[entering] = 1;
    ++pivots_;
  }

  // Returns false if the current phase is unbounded (only possible in phase 2).
  bool iterate(int phase) {
    std::size_t degenerate_run = 0;
    bool bland = options_.bland_only;
    const std::size_t real = num_real();
    for (;;) {
      // pricing
      std::optional<std::size_t> entering;
      Rational best;
      for (std::size_t j = 0; j < real; ++j) {
        if (basic_[j]) continue;
        const Rational d = cost(j, phase) - dot_multipliers(j);
        if (d >= 0) continue;
        if (bland) {
          entering = j;
          best = d;
          break;
        }
        if (!entering || d < best) {
          entering = j;
          best = d;
        }
      }
      if (!entering) return true;

      const auto u = ftran(*entering);
      std::optional<std::size_t> leave;
      Rational best_ratio;
      for (std::size_t i = 0; i < n_; ++i) {
        if (u[i] <= 0) continue;
        const Rational ratio = x_basic_[i] / u[i];
        if (!leave) {
          leave = i;
          best_ratio = ratio;
          continue;
        }
        if (ratio < best_ratio) {
          leave = i;
          best_ratio = ratio;
        } else if (ratio == best_ratio) {
          const bool prefer_artificial = !bland && is_artificial(head_[i]) != is_artificial(head_[*leave]);
          if (prefer_artificial ? is_artificial(head_[i]) : head_[i] < head_[*leave]) leave = i;
        }
      }
      if (!leave) {
        ray_entering_ = *entering;
        ray_direction_ = u;
        return false;
      }
      const bool degenerate = best_ratio == 0;
      pivot(*leave, *entering, u, best);
      if (degenerate) {
        if (++degenerate_run >= options_.degenerate_limit) bland = true;
      } else {
        degenerate_run = 0;
        bland = options_.bland_only;
      }
    }
  }

  void drive_out_artificials() {
    const std::size_t real = num_real();
    for (std::size_t r = 0; r < n_; ++r) {
      if (!is_artificial(head_[r])) continue;
      for (std::size_t j = 0; j < real; ++j) {
        if (basic_[j]) continue;
        // row r of B^{-1} times column j
        const Column& col = columns_[j];
        Rational entry = 0;
        for (const auto& [var, coef] : rows_[col.row].terms) {
          if (binv_[var][r] != 0) entry += binv_[var][r] * coef;
        }
        if (entry == 0) continue;
        pivot(r, j, ftran(j), Rational(0));
        break;
      }
      // a row that stays artificial is redundant: its entries are zero for every real column
    }
  }

  const LinearProgram& lp_;
  SolveOptions options_;
  std::size_t n_;
  std::vector<Row> rows_;
  std::vector<Column> columns_;
  std::vector<Rational> objective_;
  std::vector<int> artificial_sign_;
  std::vector<char> basic_;
  std::vector<std::size_t> head_;
  std::vector<Rational> x_basic_;
  std::vector<std::vector<Rational>> binv_;  // binv_[k][i] = (B^{-1})_{i,k}
  std::vector<Rational> pi_;
  std::vector<Rational> farkas_direction_;
  std::size_t ray_entering_ = 0;
  std::vector<Rational> ray_direction_;
  std::size_t pivots_ = 0;
};

}  // namespace detail

/// Solve exactly. The result always carries a certificate matching its status.
inline LpSolution solve(const LinearProgram& lp, const SolveOptions& options = {}) {
  LpSolution sol;
  detail::DualRevisedSimplex simplex(lp, options, /*zero_objective=*/false);
  const auto outcome = simplex.run();
  sol.pivots = simplex.pivots();
  if (outcome == detail::DualRevisedSimplex::Outcome::Optimal) {
    sol.status = LpStatus::Optimal;
    sol.certificate = CertificateKind::Optimality;
    sol.primal = simplex.multipliers();
    sol.dual = simplex.model_duals(/*include_sense=*/true);
    sol.objective_value = objective_at(lp, sol.primal);
    sol.degenerate_dual = simplex.degenerate_dual();
    return sol;
  }
  if (outcome == detail::DualRevisedSimplex::Outcome::DualUnbounded) {
    sol.status = LpStatus::Infeasible;
    sol.certificate = CertificateKind::InfeasibilityRay;
    sol.dual = simplex.infeasibility_ray();
    return sol;
  }
  // Dual infeasible: the primal is unbounded or infeasible; settle feasibility separately.
  detail::DualRevisedSimplex feasibility(lp, options, /*zero_objective=*/true);
  const auto feas = feasibility.run();
  sol.pivots += feasibility.pivots();
  if (feas == detail::DualRevisedSimplex::Outcome::DualUnbounded) {
    sol.status = LpStatus::Infeasible;
    sol.certificate = CertificateKind::InfeasibilityRay;
    sol.dual = feasibility.infeasibility_ray();
    return sol;
  }
  sol.status = LpStatus::Unbounded;
  sol.certificate = CertificateKind::UnboundedRay;
  sol.primal = feasibility.multipliers();
  sol.ray = simplex.farkas_direction();
  sol.objective_value = objective_at(lp, sol.primal);
  return sol;
}

}  // namespace krawlp
