#include <gtest/gtest.h>

#include <random>
#include <set>
#include <vector>

#include "krawlp/lattice.hpp"

using namespace krawlp;

namespace {

using ElementSet = std::set<std::uint64_t>;

// Span of a vector list as a set of vector indices, by closing under addition and scaling.
ElementSet span_closure(const FieldSpec& f, unsigned n, const std::vector<FqVector>& gens) {
  ElementSet out{0};
  std::vector<FqVector> frontier{FqVector(n)};
  while (!frontier.empty()) {
    auto v = frontier.back();
    frontier.pop_back();
    for (const auto& g : gens)
      for (unsigned c = 1; c < f.q(); ++c) {
        auto w = add(f, v, scale(f, {c}, g));
        if (out.insert(vector_index(f, w)).second) frontier.push_back(w);
      }
  }
  return out;
}

// Every subspace of F_q^n, found as spans of all tuples of up to n vectors.
std::set<ElementSet> brute_subspaces(const FieldSpec& f, unsigned n) {
  std::uint64_t total = 1;
  for (unsigned i = 0; i < n; ++i) total *= f.q();
  std::set<ElementSet> out;
  std::vector<std::uint64_t> idx;
  std::function<void(unsigned)> rec = [&](unsigned depth) {
    std::vector<FqVector> gens;
    for (auto i : idx) gens.push_back(vector_at(f, n, i));
    out.insert(span_closure(f, n, gens));
    if (depth == n) return;
    for (std::uint64_t i = idx.empty() ? 1 : idx.back() + 1; i < total; ++i) {
      idx.push_back(i);
      rec(depth + 1);
      idx.pop_back();
    }
  };
  rec(0);
  return out;
}

ElementSet as_set(const Lattice& lat, SubspaceId id) {
  ElementSet s;
  for (const auto& v : lat.elements(id)) s.insert(vector_index(lat.field(), v));
  return s;
}

}  // namespace

TEST(Gaussian, Values) {
  EXPECT_EQ(gaussian_binomial(2, 1, 2), 3);
  EXPECT_EQ(gaussian_binomial(4, 2, 2), 35);
  EXPECT_EQ(gaussian_binomial(5, 0, 7), 1);
  EXPECT_EQ(gaussian_binomial(2, 3, 2), 0);
  EXPECT_EQ(subspace_count(2, 2), 5);
  EXPECT_EQ(subspace_count(3, 2), 16);
  EXPECT_EQ(subspace_count(1, 3), 2);
}

TEST(Lattice, CountsMatchBruteForce) {
  for (auto [q, n] : std::vector<std::pair<unsigned, unsigned>>{{2, 1}, {2, 2}, {2, 3}, {2, 4}, {3, 1}, {3, 2}, {4, 2}}) {
    SCOPED_TRACE(std::to_string(q) + "," + std::to_string(n));
    auto f = FieldSpec::of_order(q);
    auto lat = Lattice::enumerate(f, n);
    auto brute = brute_subspaces(f, n);
    EXPECT_EQ(lat.size(), brute.size());
    std::set<ElementSet> ours;
    for (auto id : lat.ids()) ours.insert(as_set(lat, id));
    EXPECT_EQ(ours, brute);
    for (unsigned k = 0; k <= n; ++k) EXPECT_EQ(Integer(lat.stratum(k).size()), gaussian_binomial(n, k, q));
  }
}

TEST(Lattice, SpecCounts) {
  EXPECT_EQ(Lattice::enumerate(FieldSpec::of_order(2), 2).size(), 5u);
  EXPECT_EQ(Lattice::enumerate(FieldSpec::of_order(2), 3).size(), 16u);
  EXPECT_EQ(Lattice::enumerate(FieldSpec::of_order(3), 1).size(), 2u);
  EXPECT_EQ(Lattice::enumerate(FieldSpec::of_order(2), 4).stratum(2).size(), 35u);
}

TEST(Lattice, CapNamesCount) {
  try {
    Lattice::enumerate(FieldSpec::of_order(2), 4, 10);
    FAIL();
  } catch (const ResourceError& e) {
    EXPECT_NE(std::string(e.what()).find("67"), std::string::npos);
  }
}

TEST(Lattice, CanonicalOrder) {
  auto lat = Lattice::enumerate(FieldSpec::of_order(2), 3);
  EXPECT_EQ(lat.dim(lat.zero()), 0u);
  EXPECT_EQ(lat.dim(lat.full()), 3u);
  for (std::size_t i = 1; i < lat.size(); ++i) {
    EXPECT_LE(lat.dim({static_cast<std::uint32_t>(i - 1)}), lat.dim({static_cast<std::uint32_t>(i)}));
  }
  // first line in lex order of RREF rows is span{001}
  EXPECT_EQ(lat.space(lat.stratum(1)[0]).basis[0], (FqVector{0, 0, 1}));
  for (auto id : lat.ids()) {
    const auto& s = lat.space(id);
    for (std::size_t r = 0; r < s.dim; ++r) EXPECT_EQ(s.basis[r][s.pivots[r]], 1u);
  }
}

TEST(Lattice, Canonicalize) {
  auto lat = Lattice::enumerate(FieldSpec::of_order(2), 3);
  EXPECT_EQ(lat.canonicalize(std::span<const FqVector>{}), lat.zero());
  auto a = lat.canonicalize({FqVector{1, 1, 0}, FqVector{0, 1, 1}, FqVector{1, 0, 1}});
  auto b = lat.canonicalize({FqVector{1, 1, 0}, FqVector{0, 1, 1}});
  EXPECT_EQ(a, b);
  EXPECT_EQ(lat.dim(a), 2u);
  EXPECT_EQ(lat.canonicalize({FqVector{0, 1, 1}, FqVector{1, 1, 0}}), b);
  EXPECT_EQ(lat.canonicalize({FqVector{0, 0, 1}, FqVector{1, 0, 0}, FqVector{0, 1, 0}}), lat.full());

  auto lat3 = Lattice::enumerate(FieldSpec::of_order(3), 2);
  EXPECT_EQ(lat3.canonicalize({FqVector{2, 1}}), lat3.canonicalize({FqVector{1, 2}}));
}

TEST(Lattice, MinWeight) {
  auto lat = Lattice::enumerate(FieldSpec::of_order(2), 3);
  EXPECT_TRUE(lat.min_weight(lat.zero()).infinite());
  EXPECT_FALSE(lat.min_weight(lat.zero()).violates_distance(100));
  auto even = lat.canonicalize({FqVector{1, 1, 0}, FqVector{0, 1, 1}});
  EXPECT_EQ(lat.min_weight(even).value, 2u);
  EXPECT_EQ(lat.min_weight(lat.full()).value, 1u);
  EXPECT_TRUE(lat.min_weight(lat.full()).violates_distance(2));
  EXPECT_FALSE(lat.min_weight(even).violates_distance(2));
}

TEST(Lattice, Dual) {
  auto lat2 = Lattice::enumerate(FieldSpec::of_order(2), 2);
  auto diag = lat2.canonicalize({FqVector{1, 1}});
  EXPECT_EQ(lat2.dual(diag), diag);
  EXPECT_EQ(lat2.dual(lat2.zero()), lat2.full());
  EXPECT_EQ(lat2.dual(lat2.full()), lat2.zero());
  for (unsigned q : {2u, 3u}) {
    auto lat = Lattice::enumerate(FieldSpec::of_order(q), 3);
    for (auto s : lat.ids()) {
      EXPECT_EQ(lat.dim(s) + lat.dim(lat.dual(s)), 3u);
      EXPECT_EQ(lat.dual(lat.dual(s)), s);
      for (const auto& v : lat.elements(s))
        for (const auto& w : lat.elements(lat.dual(s))) EXPECT_EQ(dot(lat.field(), v, w).value, 0u);
      for (auto t : lat.supersets(s)) EXPECT_TRUE(lat.is_subspace(lat.dual(t), lat.dual(s)));
    }
  }
}

TEST(Lattice, Covers) {
  auto lat = Lattice::enumerate(FieldSpec::of_order(2), 3);
  EXPECT_EQ(lat.covers(lat.zero()).size(), 7u);
  for (auto line : lat.stratum(1)) EXPECT_EQ(lat.covers(line).size(), 3u);
  EXPECT_TRUE(lat.covers(lat.full()).empty());
  auto lat3 = Lattice::enumerate(FieldSpec::of_order(3), 2);
  EXPECT_EQ(lat3.covers(lat3.zero()).size(), 4u);
  for (auto s : lat.ids())
    for (auto t : lat.covers(s)) {
      EXPECT_EQ(lat.dim(t), lat.dim(s) + 1);
      EXPECT_TRUE(lat.is_subspace(s, t));
    }
}

TEST(Lattice, ContainmentMatchesElementSets) {
  auto lat = Lattice::enumerate(FieldSpec::of_order(3), 2);
  for (auto s : lat.ids())
    for (auto t : lat.ids()) {
      auto a = as_set(lat, s), b = as_set(lat, t);
      const bool subset = std::includes(b.begin(), b.end(), a.begin(), a.end());
      EXPECT_EQ(lat.is_subspace(s, t), subset);
    }
}

TEST(Mobius, Examples) {
  auto lat = Lattice::enumerate(FieldSpec::of_order(2), 3);
  auto line = lat.stratum(1)[0];
  EXPECT_EQ(lat.mobius(line, line), 1);
  EXPECT_EQ(lat.mobius(lat.zero(), line), -1);
  EXPECT_EQ(lat.mobius(lat.zero(), lat.stratum(2)[0]), 2);
  EXPECT_EQ(lat.mobius(lat.zero(), lat.full()), -8);
  EXPECT_EQ(lat.mobius(lat.full(), lat.zero()), 0);
  EXPECT_EQ(mobius_for_gap(2, 3), 3);
}

TEST(Mobius, IdentitiesAndRecursion) {
  for (auto [q, n] : std::vector<std::pair<unsigned, unsigned>>{{2, 1}, {2, 2}, {2, 3}, {2, 4}, {3, 2}, {3, 3}}) {
    auto lat = Lattice::enumerate(FieldSpec::of_order(q), n);
    for (auto s : lat.ids())
      for (auto t : lat.supersets(s)) {
        Integer lower = 0, upper = 0;
        for (auto u : lat.supersets(s)) {
          if (!lat.is_subspace(u, t)) continue;
          lower += lat.mobius(s, u);
          upper += lat.mobius(u, t);
        }
        EXPECT_EQ(lower, s == t ? 1 : 0);
        EXPECT_EQ(upper, s == t ? 1 : 0);
        EXPECT_EQ(lat.mobius(s, t), lat.mobius_recursive(s, t));
      }
  }
}

TEST(Transforms, Examples) {
  auto lat = Lattice::enumerate(FieldSpec::of_order(2), 3);
  auto c1 = lat.stratum(2)[0], c2 = lat.stratum(2)[3];
  std::vector<Rational> delta(lat.size()), mix(lat.size());
  delta[c1.index] = 1;
  mix[c1.index] = Rational(1, 2);
  mix[c2.index] = Rational(1, 2);
  auto cum = lat.zeta_transform(delta);
  auto cum_mix = lat.zeta_transform(mix);
  for (auto s : lat.ids()) {
    EXPECT_EQ(cum[s.index], lat.is_subspace(s, c1) ? 1 : 0);
    EXPECT_EQ(cum_mix[s.index], Rational((lat.is_subspace(s, c1) ? 1 : 0) + (lat.is_subspace(s, c2) ? 1 : 0), 2));
  }
  EXPECT_EQ(lat.mobius_transform(cum), delta);
  std::vector<Rational> zero(lat.size());
  EXPECT_EQ(lat.mobius_transform(zero), zero);
  EXPECT_THROW(lat.zeta_transform(std::vector<Rational>(3)), InputError);
}

TEST(Transforms, RandomRoundTrip) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> num(-30, 30), den(1, 9);
  for (auto [q, n] : std::vector<std::pair<unsigned, unsigned>>{{2, 3}, {2, 4}, {3, 3}}) {
    auto lat = Lattice::enumerate(FieldSpec::of_order(q), n);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<Rational> v(lat.size());
      for (auto& x : v) x = Rational(num(rng), den(rng));
      EXPECT_EQ(lat.mobius_transform(lat.zeta_transform(v)), v);
      EXPECT_EQ(lat.zeta_transform(lat.mobius_transform(v)), v);
    }
  }
}

TEST(Dump, Format) {
  auto lat = Lattice::enumerate(FieldSpec::of_order(2), 2);
  EXPECT_EQ(dump_line(lat, lat.zero()), "0 0 -");
  EXPECT_EQ(dump_line(lat, lat.full()), "4 2 2,1");
  EXPECT_EQ(digit_string(FqVector{1, 0, 1}, 2), "101");
  EXPECT_EQ(digit_string(FqVector{12, 3}, 13), "c3");
}
