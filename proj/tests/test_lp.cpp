#include <gtest/gtest.h>

#include <fstream>
#include <optional>
#include <random>
#include <sstream>

#include "krawlp/hierarchy.hpp"
#include "krawlp/lattice.hpp"
#include "krawlp/lp.hpp"
#include "krawlp/simplex.hpp"

using namespace krawlp;

namespace {

LinearProgram single_constraint() {
  LinearProgram lp;
  auto x = lp.add_variable("x");
  lp.set_objective({{x, 1}});
  lp.add_constraint("cap", {{x, 1}}, Relation::LessEqual, 1);
  return lp;
}

// Best vertex of {x : rows} by trying every square subsystem; rows must bound the region.
std::optional<Rational> vertex_oracle(const LinearProgram& lp) {
  const std::size_t n = lp.num_variables();
  const auto rows = lp.constraints();
  std::optional<Rational> best;
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    if (pick.size() == n) {
      std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n + 1));
      for (std::size_t i = 0; i < n; ++i) {
        for (const auto& t : rows[pick[i]].terms) m[i][t.var] = t.coef;
        m[i][n] = rows[pick[i]].rhs;
      }
      for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m[p][c] == 0) ++p;
        if (p == n) return;
        std::swap(m[p], m[c]);
        for (std::size_t r = 0; r < n; ++r) {
          if (r == c || m[r][c] == 0) continue;
          const Rational f = m[r][c] / m[c][c];
          for (std::size_t k = c; k <= n; ++k) m[r][k] -= f * m[c][k];
        }
      }
      std::vector<Rational> x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = m[i][n] / m[i][i];
      if (!check_feasible(lp, x).empty()) return;
      const Rational v = objective_at(lp, x);
      if (!best || (lp.sense() == Sense::Maximize ? v > *best : v < *best)) best = v;
      return;
    }
    for (std::size_t i = from; i < rows.size(); ++i) {
      pick.push_back(i);
      rec(i + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return best;
}

}  // namespace

TEST(Model, Validation) {
  LinearProgram lp;
  auto x = lp.add_variable("x");
  EXPECT_THROW(lp.add_variable("x"), InputError);
  EXPECT_THROW(lp.add_variable("bad name"), InputError);
  lp.add_constraint("r", {{x, 1}}, Relation::LessEqual, 1);
  EXPECT_THROW(lp.add_constraint("r", {{x, 1}}, Relation::LessEqual, 1), InputError);
  EXPECT_THROW(lp.add_constraint("s", {{5, 1}}, Relation::LessEqual, 1), InputError);
  lp.add_constraint("merged", {{x, 1}, {x, 2}}, Relation::GreaterEqual, 0);
  ASSERT_EQ(lp.constraint("merged").terms.size(), 1u);
  EXPECT_EQ(lp.constraint("merged").terms[0].coef, 3);
  EXPECT_THROW(lp.constraint("nope"), InputError);
}

TEST(Solve, BoundedInterval) {
  auto lp = single_constraint();
  lp.add_constraint("floor", {{0, 1}}, Relation::GreaterEqual, 0);
  auto sol = solve(lp);
  ASSERT_EQ(sol.status, LpStatus::Optimal);
  EXPECT_EQ(sol.certificate, CertificateKind::Optimality);
  EXPECT_EQ(sol.objective_value, 1);
  EXPECT_TRUE(verify_optimality(lp, sol));
}

TEST(Solve, Infeasible) {
  LinearProgram lp;
  auto x = lp.add_variable("x");
  lp.add_constraint("lo", {{x, 1}}, Relation::GreaterEqual, 1);
  lp.add_constraint("hi", {{x, 1}}, Relation::LessEqual, 0);
  auto sol = solve(lp);
  EXPECT_EQ(sol.status, LpStatus::Infeasible);
  EXPECT_EQ(sol.certificate, CertificateKind::InfeasibilityRay);
  EXPECT_TRUE(verify_infeasibility(lp, sol));
  lp.set_sense(Sense::Minimize);
  lp.set_objective({{x, 1}});
  auto sol2 = solve(lp);
  EXPECT_EQ(sol2.status, LpStatus::Infeasible);
  EXPECT_TRUE(verify_infeasibility(lp, sol2));
}

TEST(Solve, InfeasibleWithUnboundedObjectiveDirection) {
  LinearProgram lp;
  auto x = lp.add_variable("x");
  auto y = lp.add_variable("y");
  lp.set_objective({{y, 1}});
  lp.add_constraint("a", {{x, 1}}, Relation::GreaterEqual, 2);
  lp.add_constraint("b", {{x, 1}}, Relation::LessEqual, 1);
  auto sol = solve(lp);
  EXPECT_EQ(sol.status, LpStatus::Infeasible);
  EXPECT_TRUE(verify_infeasibility(lp, sol));
}

TEST(Solve, Unbounded) {
  LinearProgram lp;
  auto x = lp.add_variable("x");
  lp.set_objective({{x, 1}});
  lp.add_constraint("floor", {{x, 1}}, Relation::GreaterEqual, 0);
  auto sol = solve(lp);
  EXPECT_EQ(sol.status, LpStatus::Unbounded);
  EXPECT_EQ(sol.certificate, CertificateKind::UnboundedRay);
  EXPECT_TRUE(verify_unbounded(lp, sol));
}

TEST(Solve, MinimizeWithFreeDirectionBounded) {
  LinearProgram lp(Sense::Minimize);
  auto x = lp.add_variable("x");
  auto y = lp.add_variable("y");
  lp.set_objective({{x, 1}, {y, -1}});
  lp.add_constraint("xlo", {{x, 1}}, Relation::GreaterEqual, 1);
  lp.add_constraint("gap", {{y, 1}, {x, -1}}, Relation::LessEqual, Rational(1, 2));
  auto sol = solve(lp);
  ASSERT_EQ(sol.status, LpStatus::Optimal);
  EXPECT_EQ(sol.objective_value, Rational(-1, 2));
  EXPECT_TRUE(verify_optimality(lp, sol));
}

TEST(Solve, EqualitiesAndRedundantRows) {
  LinearProgram lp;
  auto x = lp.add_variable("x");
  auto y = lp.add_variable("y");
  lp.set_objective({{x, 2}, {y, 3}});
  lp.add_constraint("sum", {{x, 1}, {y, 1}}, Relation::Equal, 4);
  lp.add_constraint("sum2", {{x, 2}, {y, 2}}, Relation::Equal, 8);
  lp.add_constraint("x0", {{x, 1}}, Relation::GreaterEqual, 1);
  lp.add_constraint("ycap", {{y, 1}}, Relation::LessEqual, Rational(5, 2));
  lp.add_constraint("empty", {}, Relation::LessEqual, 0);
  auto sol = solve(lp);
  ASSERT_EQ(sol.status, LpStatus::Optimal);
  EXPECT_EQ(sol.objective_value, Rational(2 * 3, 2) + Rational(15, 2));
  EXPECT_TRUE(verify_optimality(lp, sol));
}

TEST(Solve, EmptyRowContradiction) {
  LinearProgram lp;
  lp.add_variable("x");
  lp.add_constraint("bad", {}, Relation::GreaterEqual, 1);
  auto sol = solve(lp);
  EXPECT_EQ(sol.status, LpStatus::Infeasible);
  EXPECT_TRUE(verify_infeasibility(lp, sol));
}

// Beale's example cycles under the textbook largest-coefficient rule without anti-cycling.
TEST(Solve, BealeCyclingExample) {
  for (bool bland_only : {false, true}) {
    LinearProgram lp(Sense::Minimize);
    std::vector<std::size_t> x;
    for (int i = 4; i <= 7; ++i) x.push_back(lp.add_variable("x" + std::to_string(i)));
    lp.set_objective({{x[0], Rational(-3, 4)}, {x[1], 20}, {x[2], Rational(-1, 2)}, {x[3], 6}});
    lp.add_constraint("r1", {{x[0], Rational(1, 4)}, {x[1], -8}, {x[2], -1}, {x[3], 9}}, Relation::LessEqual, 0);
    lp.add_constraint("r2", {{x[0], Rational(1, 2)}, {x[1], -12}, {x[2], Rational(-1, 2)}, {x[3], 3}},
                      Relation::LessEqual, 0);
    lp.add_constraint("r3", {{x[2], 1}}, Relation::LessEqual, 1);
    for (std::size_t i = 0; i < 4; ++i) lp.add_constraint("nn" + std::to_string(i), {{x[i], 1}}, Relation::GreaterEqual, 0);
    auto sol = solve(lp, SolveOptions{.degenerate_limit = 50, .bland_only = bland_only});
    ASSERT_EQ(sol.status, LpStatus::Optimal);
    EXPECT_EQ(sol.objective_value, Rational(-5, 4));
    EXPECT_TRUE(verify_optimality(lp, sol));
  }
}

TEST(Solve, RandomAgainstVertexOracle) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> coef(-4, 4), rhs(0, 6), den(1, 3);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 2 + trial % 2;
    LinearProgram lp(trial % 3 == 0 ? Sense::Minimize : Sense::Maximize);
    std::vector<Term> obj;
    for (std::size_t v = 0; v < n; ++v) {
      lp.add_variable("v" + std::to_string(v));
      obj.push_back({v, Rational(coef(rng), den(rng))});
    }
    lp.set_objective(obj);
    for (std::size_t v = 0; v < n; ++v) {
      lp.add_constraint("lo" + std::to_string(v), {{v, 1}}, Relation::GreaterEqual, -3);
      lp.add_constraint("hi" + std::to_string(v), {{v, 1}}, Relation::LessEqual, 3);
    }
    for (int r = 0; r < 3; ++r) {
      std::vector<Term> terms;
      for (std::size_t v = 0; v < n; ++v) terms.push_back({v, coef(rng)});
      const Relation rel = r == 2 && trial % 5 == 0 ? Relation::Equal
                           : (r % 2 ? Relation::GreaterEqual : Relation::LessEqual);
      const Rational b = Rational(rhs(rng), den(rng)) * (rel == Relation::GreaterEqual ? -1 : 1);
      lp.add_constraint("r" + std::to_string(r), terms, rel, b);
    }
    auto sol = solve(lp);
    auto oracle = vertex_oracle(lp);
    SCOPED_TRACE(export_text(lp));
    if (!oracle) {
      EXPECT_EQ(sol.status, LpStatus::Infeasible);
      EXPECT_TRUE(verify_infeasibility(lp, sol));
    } else {
      ASSERT_EQ(sol.status, LpStatus::Optimal);
      EXPECT_EQ(sol.objective_value, *oracle);
      EXPECT_TRUE(verify_optimality(lp, sol));
    }
  }
}

TEST(Solve, ScalingInvariance) {
  auto inst = Instance::make(2, 2, 2, 2);
  auto lat = Lattice::enumerate(inst.field, 2);
  auto lp = build_kraw_pseudo(inst, lat);
  LinearProgram scaled(lp.sense());
  for (const auto& v : lp.variables()) scaled.add_variable(v);
  scaled.set_objective({lp.objective().begin(), lp.objective().end()});
  for (const auto& c : lp.constraints()) {
    std::vector<Term> terms(c.terms.begin(), c.terms.end());
    Rational rhs = c.rhs;
    if (c.rel == Relation::GreaterEqual) {
      for (auto& t : terms) t.coef *= Rational(7, 3);
      rhs *= Rational(7, 3);
    }
    scaled.add_constraint(c.label, terms, c.rel, rhs);
  }
  auto a = solve(lp), b = solve(scaled);
  EXPECT_EQ(a.status, b.status);
  EXPECT_EQ(a.objective_value, b.objective_value);
  EXPECT_TRUE(verify_optimality(scaled, b));
}

TEST(Solve, DeterministicAndPerturbationDetected) {
  auto inst = Instance::make(2, 3, 2, 3);
  auto lat = Lattice::enumerate(inst.field, 3);
  auto lp = build_kraw_pseudo(inst, lat);
  auto sol = solve(lp);
  auto again = solve(lp);
  EXPECT_EQ(sol.primal, again.primal);
  EXPECT_EQ(sol.dual, again.dual);
  EXPECT_EQ(sol.objective_value, 64);
  ASSERT_TRUE(verify_optimality(lp, sol));
  auto bad = sol;
  bad.primal[0] += Rational(1, 1000000);
  EXPECT_FALSE(verify_optimality(lp, bad));
  auto bad_dual = sol;
  for (auto& y : bad_dual.dual) {
    if (y != 0) {
      y += Rational(1, 1000000);
      break;
    }
  }
  EXPECT_FALSE(verify_optimality(lp, bad_dual));
}

TEST(Certificates, HandBuilt) {
  auto lp = single_constraint();
  LpSolution sol;
  sol.status = LpStatus::Optimal;
  sol.certificate = CertificateKind::Optimality;
  sol.primal = {1};
  sol.dual = {1};
  sol.objective_value = 1;
  EXPECT_TRUE(verify_optimality(lp, sol));
  sol.dual = {-1};
  EXPECT_FALSE(verify_optimality(lp, sol));
  sol.dual = {2};
  EXPECT_FALSE(verify_optimality(lp, sol));
}

TEST(Feasibility, CheckFeasible) {
  LinearProgram lp;
  auto a = lp.add_variable("a");
  auto b = lp.add_variable("b");
  lp.add_constraint("norm", {{a, 1}, {b, 1}}, Relation::Equal, 1);
  lp.add_constraint("bnn", {{b, 1}}, Relation::GreaterEqual, 0);
  EXPECT_TRUE(check_feasible(lp, Point{{"a", Rational(1, 2)}, {"b", Rational(1, 2)}}).empty());
  EXPECT_EQ(check_feasible(lp, Point{{"a", Rational(1, 2)}}), std::vector<std::string>{"norm"});
  EXPECT_THROW(check_feasible(lp, Point{{"zz", 1}}), InputError);
  EXPECT_THROW(check_feasible(lp, std::vector<Rational>{1}), InputError);
}

TEST(TextFormat, GoldenSingleConstraint) {
  std::ifstream in(KRAWLP_GOLDEN_DIR "/single_constraint.lp", std::ios::binary);
  ASSERT_TRUE(in);
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(export_text(single_constraint()), buf.str());
  EXPECT_EQ(parse_text(buf.str()), single_constraint());
}

TEST(TextFormat, RoundTrip) {
  auto inst = Instance::make(2, 2, 2, 2);
  auto lat = Lattice::enumerate(inst.field, 2);
  for (const auto& lp : {build_kraw_pseudo(inst, lat), build_partial_pseudo(inst, lat), build_unsym_kraw(inst, lat)}) {
    EXPECT_EQ(parse_text(export_text(lp)), lp);
  }
}

TEST(TextFormat, EmptyObjectiveAndRows) {
  LinearProgram lp(Sense::Minimize);
  lp.add_variable("x");
  lp.add_constraint("nothing", {}, Relation::LessEqual, Rational(-3, 6));
  const auto text = export_text(lp);
  EXPECT_EQ(text, "lp v1\nsense min\nvar x\nobj 0\ncon nothing : 0 <= -1/2\n");
  EXPECT_EQ(parse_text(text), lp);
}

TEST(TextFormat, ParseErrors) {
  EXPECT_THROW(parse_text("sense max\n"), InputError);
  EXPECT_THROW(parse_text("lp v1\nvar x\n"), InputError);
  EXPECT_THROW(parse_text("lp v1\nsense max\nvar x\nobj y:1/1\n"), InputError);
  EXPECT_THROW(parse_text("lp v1\nsense max\nvar x\ncon c : x:1/1 << 1/1\n"), InputError);
  EXPECT_THROW(parse_text("lp v1\nsense max\nvar x\ncon c : x:1/0 <= 1/1\n"), InputError);
}

TEST(Rationals, ParseAndPrint) {
  EXPECT_EQ(parse_rational("-6/4"), Rational(-3, 2));
  EXPECT_EQ(parse_rational("7"), 7);
  EXPECT_EQ(to_string(Rational(-4, 8)), "-1/2");
  EXPECT_EQ(to_string(parse_rational("4/-8")), "-1/2");
  EXPECT_EQ(to_string(Rational(3)), "3/1");
  EXPECT_THROW(parse_rational("1/0"), InputError);
  EXPECT_THROW(parse_rational("abc"), InputError);
}
