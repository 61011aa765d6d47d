// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <numeric>

#include "expect_error.hpp"
#include "test_support.hpp"

namespace normcx {
namespace {

using testing::expect_error;
using testing::load_fan;
using testing::load_matroid;

std::vector<Flat> load_building(const Matroid& m, const std::string& name) {
  return io::building_set_from_json(m, io::load_json(testing::data_path(name)));
}

const std::vector<std::string> kFixtures{"example.matroid.json", "u23.matroid.json",
                                         "u24.matroid.json", "u34.matroid.json",
                                         "k4.matroid.json"};

TEST(ValidateMatroid, Examples) {
  EXPECT_TRUE(validate_matroid(load_matroid("example.matroid.json")).valid());
  EXPECT_TRUE(validate_matroid(load_matroid("u23.matroid.json")).valid());
  const auto bad = validate_matroid(load_matroid("example_missing02.matroid.json"));
  ASSERT_FALSE(bad.valid());
  bool mentions_two = false;
  for (const auto& v : bad.violations) mentions_two |= v.find("'2'") != std::string::npos;
  EXPECT_TRUE(mentions_two);
  for (const auto& name : kFixtures) EXPECT_TRUE(validate_matroid(load_matroid(name)).valid());
}

TEST(ValidateMatroid, MissingGroundOrIntersection) {
  const auto no_ground = Matroid::from_flat_lists({"0", "1"}, {{}, {"0"}, {"1"}});
  EXPECT_FALSE(validate_matroid(no_ground).valid());
  const auto no_meet =
      Matroid::from_flat_lists({"0", "1", "2"}, {{}, {"0", "1"}, {"1", "2"}, {"0", "1", "2"}});
  EXPECT_FALSE(validate_matroid(no_meet).valid());
}

TEST(MatroidInput, Errors) {
  expect_error(ErrorKind::kInput, [] { Matroid::from_flat_lists({"0"}, {{"9"}}); });
  expect_error(ErrorKind::kInput, [] { Matroid::from_flat_lists({"0", "0"}, {}); });
  expect_error(ErrorKind::kInvalidMatroid, [] { Matroid::graphic({"a"}, {{"a", "a"}}); });
  expect_error(ErrorKind::kInput, [] { Matroid::graphic({"a", "b"}, {{"a", "z"}}); });
}

TEST(Closure, Examples) {
  const auto m = load_matroid("example.matroid.json");
  EXPECT_EQ(m.closure(0), 0u);
  EXPECT_EQ(m.rank(Flat{0}), 0u);
  EXPECT_EQ(m.closure(m.parse({"1", "2"})), m.parse({"1", "2", "3"}));
  EXPECT_EQ(m.rank(m.parse({"1", "2"})), 2u);
  EXPECT_EQ(m.rank(), 3u);
  EXPECT_EQ(m.name(m.parse({"1", "2", "3"})), "123");
  EXPECT_EQ(m.flat_named("03"), m.parse({"0", "3"}));
}

TEST(Closure, UniformMatchesCardinalityOracle) {
  for (std::size_t r = 1; r <= 4; ++r) {
    for (std::size_t n = r; n <= 6; ++n) {
      const auto m = Matroid::uniform(r, n);
      EXPECT_TRUE(validate_matroid(m).valid());
      for (Flat s = 0; s <= m.full(); ++s) {
        EXPECT_EQ(m.rank(s), std::min<std::size_t>(popcount(s), r));
        EXPECT_EQ(m.closure(s), popcount(s) < r ? s : m.full());
      }
    }
  }
}

// Graphic rank: number of vertices minus number of components of the
// spanning subgraph on the chosen edges.
std::size_t graphic_rank(std::size_t nv, const std::vector<std::pair<int, int>>& edges,
                         Flat s) {
  std::vector<int> comp(nv);
  std::iota(comp.begin(), comp.end(), 0);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (!(s >> e & 1)) continue;
    const int from = comp[edges[e].first], to = comp[edges[e].second];
    for (auto& c : comp) {
      if (c == from) c = to;
    }
  }
  std::set<int> distinct(comp.begin(), comp.end());
  return nv - distinct.size();
}

TEST(Closure, GraphicMatchesComponentOracle) {
  const auto k4 = load_matroid("k4.matroid.json");
  EXPECT_EQ(k4.size(), 6u);
  EXPECT_EQ(k4.flats().size(), 15u);
  const std::vector<std::pair<int, int>> edges{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  for (Flat s = 0; s <= k4.full(); ++s) {
    EXPECT_EQ(k4.rank(s), graphic_rank(4, edges, s));
    const Flat c = k4.closure(s);
    EXPECT_TRUE(subset_of(s, c));
    for (std::size_t e = 0; e < 6; ++e) {
      if (s >> e & 1) continue;
      EXPECT_EQ(c >> e & 1, graphic_rank(4, edges, s | Flat{1} << e) == k4.rank(s));
    }
  }
  EXPECT_EQ(k4.name(k4.parse({"a-b", "c-d"})), "a-b+c-d");
}

TEST(BuildingSets, Examples) {
  const auto m = load_matroid("example.matroid.json");
  EXPECT_TRUE(is_building_set(m, maximal_building_set(m)));
  EXPECT_TRUE(is_building_set(m, load_building(m, "example_minimal.building.json")));
  EXPECT_FALSE(is_building_set(m, load_building(m, "example_no123.building.json")));
  for (const auto& name : kFixtures) {
    const auto mat = load_matroid(name);
    EXPECT_TRUE(is_building_set(mat, maximal_building_set(mat))) << name;
  }
}

TEST(BuildingSets, Enumeration) {
  const auto m = load_matroid("example.matroid.json");
  const auto all = enumerate_building_sets(m);
  EXPECT_EQ(all.size(), 8u);
  EXPECT_EQ(all.front(), maximal_building_set(m));
  const Flat f123 = m.flat_named("123");
  for (const auto& b : all) {
    EXPECT_NE(std::find(b.begin(), b.end(), f123), b.end());
    EXPECT_TRUE(is_building_set(m, b));
  }
  EXPECT_EQ(enumerate_building_sets(load_matroid("k4.matroid.json")).size(), 8u);
  EXPECT_EQ(enumerate_building_sets(load_matroid("u23.matroid.json")).size(), 1u);
  EXPECT_EQ(enumerate_building_sets(load_matroid("u34.matroid.json")).size(), 64u);
}

TEST(BuildingSets, EnumerationMatchesBruteForce) {
  for (const auto& name : {"example.matroid.json", "k4.matroid.json"}) {
    const auto m = load_matroid(name);
    std::vector<Flat> optional;
    std::vector<Flat> forced;
    for (Flat f : m.flats()) {
      if (f == 0) continue;
      (f == m.full() || m.rank(f) == 1 ? forced : optional).push_back(f);
    }
    std::size_t brute = 0;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << optional.size()); ++s) {
      auto b = forced;
      for (std::size_t i = 0; i < optional.size(); ++i) {
        if (s >> i & 1) b.push_back(optional[i]);
      }
      brute += is_building_set(m, b);
    }
    EXPECT_EQ(enumerate_building_sets(m).size(), brute) << name;
  }
}

TEST(NestedSets, Examples) {
  const auto m = load_matroid("example.matroid.json");
  const auto gmax = maximal_building_set(m);
  const auto nested = nested_sets(m, gmax);
  std::size_t two = 0;
  for (const auto& n : nested) {
    two += n.size() == 2;
    // For the maximal building set nested sets are flags.
    for (std::size_t i = 0; i < n.size(); ++i) {
      for (std::size_t j = i + 1; j < n.size(); ++j) {
        EXPECT_TRUE(subset_of(n[i], n[j]) || subset_of(n[j], n[i]));
      }
    }
  }
  EXPECT_EQ(two, 9u);
  for (Flat g : gmax) {
    if (g == m.full()) continue;
    EXPECT_NE(std::find(nested.begin(), nested.end(), NestedSet{g}), nested.end());
  }
  EXPECT_EQ(nested.front(), NestedSet{});
}

TEST(NestedSets, IncomparableMembersAreDisjoint) {
  for (const auto& name : kFixtures) {
    const auto m = load_matroid(name);
    for (const auto& b : enumerate_building_sets(m)) {
      const std::set<Flat> bset(b.begin(), b.end());
      for (const auto& n : nested_sets(m, b)) {
        for (std::size_t i = 0; i < n.size(); ++i) {
          for (std::size_t j = i + 1; j < n.size(); ++j) {
            if (subset_of(n[i], n[j]) || subset_of(n[j], n[i])) continue;
            EXPECT_EQ(n[i] & n[j], 0u) << name;
            EXPECT_FALSE(bset.contains(m.closure(n[i] | n[j]))) << name;
          }
        }
      }
    }
  }
}

TEST(Bergman, MaximalBuildingSetGivesBalancedFixture) {
  const auto m = load_matroid("example.matroid.json");
  const Fan f = bergman_fan(m, maximal_building_set(m));
  const auto expected = load_fan("balanced.fan.json");
  EXPECT_EQ(f.ray_ids(), expected.fan.ray_ids());
  for (RayIndex r = 0; r < f.num_rays(); ++r) {
    EXPECT_EQ(f.generator(r), expected.fan.generator(r)) << f.ray_id(r);
  }
  EXPECT_EQ(f.max_cones(), expected.fan.max_cones());
}

TEST(Bergman, MinimalBuildingSetDropsRays) {
  const auto m = load_matroid("example.matroid.json");
  const Fan f = bergman_fan(m, load_building(m, "example_minimal.building.json"));
  EXPECT_EQ(f.ray_ids(), (std::vector<std::string>{"0", "1", "123", "2", "3"}));
  std::set<std::vector<std::string>> cones;
  for (const auto& c : f.max_cones()) cones.insert(f.ids_of(c));
  EXPECT_EQ(cones, (std::set<std::vector<std::string>>{{"1", "123"},
                                                       {"123", "2"},
                                                       {"123", "3"},
                                                       {"0", "1"},
                                                       {"0", "2"},
                                                       {"0", "3"}}));
  EXPECT_TRUE(validate(f).valid());
  EXPECT_TRUE(check_balancing(f, WeightFunction::constant(f)).balanced());
}

TEST(Bergman, RankTwoUniform) {
  const auto m = load_matroid("u23.matroid.json");
  const Fan f = bergman_fan(m, maximal_building_set(m));
  EXPECT_EQ(f.num_rays(), 3u);
  EXPECT_EQ(f.dim(), 1u);
  const auto fixture = load_fan("u23.fan.json");
  for (RayIndex r = 0; r < f.num_rays(); ++r) {
    EXPECT_EQ(f.generator(r), fixture.fan.generator(r));
  }
}

TEST(Bergman, EveryFixtureIsValidBalancedAndPure) {
  for (const auto& name : kFixtures) {
    const auto m = load_matroid(name);
    for (const auto& b : enumerate_building_sets(m)) {
      const auto bf = bergman_fan_with_flats(m, b);
      EXPECT_TRUE(validate(bf.fan).valid()) << name;
      EXPECT_TRUE(check_balancing(bf.fan, WeightFunction::constant(bf.fan)).balanced())
          << name;
      EXPECT_EQ(bf.fan.dim(), m.rank() - 1) << name;
      for (const Cone& c : bf.fan.max_cones()) {
        EXPECT_EQ(rank(bf.fan.generators_of(c)), c.dim());
      }
    }
  }
}

TEST(Bergman, Errors) {
  const auto bad = load_matroid("example_missing02.matroid.json");
  expect_error(ErrorKind::kInvalidMatroid,
               [&] { bergman_fan(bad, maximal_building_set(bad)); });
  const auto m = load_matroid("example.matroid.json");
  expect_error(ErrorKind::kInvalidBuildingSet, [&] {
    bergman_fan(m, load_building(m, "example_no123.building.json"));
  });
  const auto u12 = Matroid::uniform(1, 2);
  expect_error(ErrorKind::kInvalidMatroid,
               [&] { bergman_fan(u12, maximal_building_set(u12)); });
}

TEST(CubicalZ, ValuesAtSixteen) {
  const auto m = load_matroid("example.matroid.json");
  const auto bf = bergman_fan_with_flats(m, maximal_building_set(m));
  const ZValue z = cubical_z_for(m, bf, Rational(16));
  const auto by_id = z.to_map(bf.fan);
  EXPECT_EQ(by_id.at("123"), Rational(3) - Rational(BigInt(1), BigInt(16)));
  EXPECT_EQ(by_id.at("01"), Rational(2) - Rational(BigInt(1), BigInt(256)));
  EXPECT_EQ(by_id.at("1"), Rational(1) - Rational(BigInt(1), BigInt(4096)));
  EXPECT_EQ(by_id.at("0"), Rational(3) - Rational(BigInt(1), BigInt(16)));
  EXPECT_EQ(is_cubical(bf.fan, InnerProduct::dot(3), z).verdict, Cubicality::kCubical);
}

TEST(CubicalZ, RankTwoAnyPositiveValue) {
  SplitMix64 rng(3);
  const auto m = load_matroid("u23.matroid.json");
  const Fan f = bergman_fan(m, maximal_building_set(m));
  for (int t = 0; t < 20; ++t) {
    const ZValue z(testing::random_vector(rng, 3, 0, 5, 7) + RatVector(3, Rational(1, 7)));
    EXPECT_EQ(is_cubical(f, InnerProduct::dot(2), z).verdict, Cubicality::kCubical);
  }
}

TEST(Certificate, EveryFixtureAndBuildingSet) {
  for (const auto& name : kFixtures) {
    const auto m = load_matroid(name);
    for (const auto& b : enumerate_building_sets(m)) {
      const auto cert = construct_cubical_z(m, b);
      EXPECT_EQ(is_cubical(cert.bergman.fan, InnerProduct::dot(cert.bergman.fan.ambient_dim()),
                           cert.z)
                    .verdict,
                Cubicality::kCubical)
          << name;
      EXPECT_EQ(cert.table.size(), nested_sets(m, b).size() - 1);
      for (const auto& row : cert.table) {
        for (const auto& a : row.a) EXPECT_GT(a, 0) << name;
      }
    }
  }
}

TEST(Certificate, EscalationCap) {
  const auto m = load_matroid("example.matroid.json");
  const auto cert = construct_cubical_z(m, maximal_building_set(m));
  EXPECT_EQ(cert.m, 8);
  EXPECT_EQ(cert.escalations, 0u);
}

// The construction proof rewrites the w-vector equations of a nested set N
// into closed forms for partial sums of its coefficients a_F. N0 is the set
// of members containing e0 (a chain), G0 its minimum, hat(G) the smallest
// member of N0 u {E} containing G, and G+ the smallest member of N u {E}
// strictly containing G. Sums anchored at G0 are empty when N0 is empty.
struct ProofCheck {
  const Matroid& m;
  const NestedCoefficients& row;
  Rational mm;

  Flat full() const { return m.full(); }
  bool has_e0(Flat g) const { return g & 1; }
  long size(Flat g) const { return static_cast<long>(popcount(g)); }
  long co(Flat g) const { return static_cast<long>(m.size()) - size(g); }
  Rational inv_pow(long k) const { return pow(mm, -k); }

  std::optional<Flat> g0() const {
    std::optional<Flat> best;
    for (Flat f : row.nested) {
      if (has_e0(f) && (!best || subset_of(f, *best))) best = f;
    }
    return best;
  }
  Flat hat(Flat g) const {
    Flat best = full();
    for (Flat f : row.nested) {
      if (has_e0(f) && subset_of(g, f) && subset_of(f, best)) best = f;
    }
    return best;
  }
  Flat plus(Flat g) const {
    Flat best = full();
    for (Flat f : row.nested) {
      if (f != g && subset_of(g, f) && subset_of(f, best)) best = f;
    }
    return best;
  }
  // Sum of a_F over members F with lo <= F and F < hi (or F <= hi).
  Rational sum_between(std::optional<Flat> lo, Flat hi, bool strict_hi) const {
    Rational s;
    if (!lo) return s;
    for (std::size_t i = 0; i < row.nested.size(); ++i) {
      const Flat f = row.nested[i];
      if (!subset_of(*lo, f) || !subset_of(f, hi)) continue;
      if (strict_hi && f == hi) continue;
      s += row.a[i];
    }
    return s;
  }

  // Closed form for the partial sum over G0 <= F <= G, G in N0: the
  // defining equations of G and G+ combined with those of every H outside
  // N0 with H+ = G+. When G+ = E there is no equation for G+.
  Rational first_rhs(Flat g) const {
    const Flat gp = plus(g);
    Rational num = Rational(co(g) - co(gp)) - inv_pow(size(g));
    if (gp != full()) num += inv_pow(size(gp));
    Rational den = Rational(co(g) - co(gp));
    for (Flat h : row.nested) {
      if (has_e0(h) || plus(h) != gp) continue;
      num += Rational(size(h)) - inv_pow(co(h));
      den -= size(h);
    }
    return num / den;
  }

  // Closed form for the partial sum over G <= F < hat(G), G outside N0.
  Rational second_rhs(Flat g) const {
    Rational num = inv_pow(co(g));
    Rational den = Rational(size(g));
    for (Flat h : row.nested) {
      if (plus(h) != g) continue;
      num -= inv_pow(co(h));
      den -= size(h);
    }
    return Rational(1) + sum_between(g0(), hat(g), true) - num / den;
  }
};

TEST(Certificate, ProofIdentitiesAndMonotonicity) {
  for (const auto& name : kFixtures) {
    const auto m = load_matroid(name);
    for (const auto& b : enumerate_building_sets(m)) {
      const auto cert = construct_cubical_z(m, b);
      for (const auto& row : cert.table) {
        const ProofCheck pc{m, row, Rational(cert.m)};
        const auto g0 = pc.g0();
        std::vector<Flat> chain;
        for (Flat f : row.nested) {
          if (pc.has_e0(f)) chain.push_back(f);
        }
        std::sort(chain.begin(), chain.end(),
                  [](Flat a, Flat b) { return popcount(a) < popcount(b); });
        Rational prev(-1);
        for (Flat g : chain) {
          const Rational lhs = pc.sum_between(g0, g, false);
          EXPECT_EQ(lhs, pc.first_rhs(g)) << name << " " << m.name(g);
          EXPECT_GT(lhs, prev) << name << " " << m.name(g);
          prev = lhs;
        }
        for (Flat g : row.nested) {
          if (pc.has_e0(g)) continue;
          const Rational lhs = pc.sum_between(g, pc.hat(g), true);
          EXPECT_EQ(lhs, pc.second_rhs(g)) << name << " " << m.name(g);
          // Decreasing along chains that share hat(G).
          for (Flat h : row.nested) {
            if (h == g || pc.has_e0(h) || !subset_of(g, h) || pc.hat(h) != pc.hat(g)) continue;
            EXPECT_GT(lhs, pc.sum_between(h, pc.hat(h), true)) << name;
          }
        }
      }
    }
  }
}

}  // namespace
}  // namespace normcx
