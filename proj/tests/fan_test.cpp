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

#include "expect_error.hpp"
#include "test_support.hpp"

namespace normcx {
namespace {

using testing::expect_error;
using testing::load_fan;

TEST(Validate, HexagonIsValid) {
  const auto hex = load_fan("hexagon.fan.json");
  EXPECT_TRUE(validate(hex.fan).valid());
  EXPECT_EQ(hex.fan.dim(), 2u);
  EXPECT_EQ(hex.fan.max_cones().size(), 6u);
}

TEST(Validate, SingleRay) {
  const auto ray = load_fan("ray.fan.json");
  EXPECT_TRUE(validate(ray.fan).valid());
  EXPECT_EQ(ray.fan.dim(), 1u);
}

TEST(Validate, OverlappingConesAreImproper) {
  const auto f = load_fan("overlap.fan.json");
  // Independent witness: c = a + b lies in the interior of cone(a, b) and is
  // a generator of the other cone.
  const auto& g = f.fan;
  EXPECT_EQ(g.generator(*g.ray_index("a")) + g.generator(*g.ray_index("b")),
            g.generator(*g.ray_index("c")));
  const auto rep = validate(f.fan);
  EXPECT_TRUE(rep.has(ViolationKind::kImproperIntersection));
}

TEST(Validate, EmptyFan) {
  const auto f = load_fan("empty.fan.json");
  const auto rep = validate(f.fan);
  ASSERT_FALSE(rep.valid());
  EXPECT_TRUE(rep.has(ViolationKind::kNoMaximalCones));
  EXPECT_EQ(rep.violations.front().message, "no maximal cones");
}

TEST(Validate, ReportsEachDefect) {
  const Fan zero(2, {{"a", {0, 0}}, {"b", {0, 1}}}, {{"a", "b"}});
  EXPECT_TRUE(validate(zero).has(ViolationKind::kZeroGenerator));

  const Fan dup(2, {{"a", {1, 0}}, {"b", {2, 0}}, {"c", {0, 1}}}, {{"a", "c"}, {"b"}});
  EXPECT_TRUE(validate(dup).has(ViolationKind::kDuplicateRay));

  const Fan dep(2, {{"a", {1, 0}}, {"b", {1, 1}}, {"c", {2, 1}}}, {{"a", "b", "c"}});
  EXPECT_TRUE(validate(dep).has(ViolationKind::kNonSimplicial));

  const Fan impure(3, {{"a", {1, 0, 0}}, {"b", {0, 1, 0}}, {"c", {0, 0, -1}}},
                   {{"a", "b"}, {"c"}});
  EXPECT_TRUE(validate(impure).has(ViolationKind::kNonPure));

  const Fan empty_cone(2, {{"a", {1, 0}}}, {{}});
  EXPECT_TRUE(validate(empty_cone).has(ViolationKind::kEmptyCone));
}

TEST(Validate, SharedFaceIsProper) {
  const Fan f(2, {{"a", {1, 0}}, {"b", {0, 1}}, {"c", {-1, 0}}}, {{"a", "b"}, {"b", "c"}});
  EXPECT_TRUE(validate(f).valid());
}

TEST(FanInput, RejectsMalformedData) {
  expect_error(ErrorKind::kInput, [] { Fan(2, {{"a", {1}}}, {{"a"}}); });
  expect_error(ErrorKind::kInput, [] { Fan(2, {{"a", {1, 0}}}, {{"z"}}); });
  expect_error(ErrorKind::kInput, [] { Fan(2, {{"a", {1, 0}}}, {{"a", "a"}}); });
  expect_error(ErrorKind::kInput, [] { Fan(2, {{"a,b", {1, 0}}}, {}); });
}

TEST(Faces, Counts) {
  const auto hex = load_fan("hexagon.fan.json");
  EXPECT_EQ(hex.fan.faces(1).size(), 6u);
  ASSERT_EQ(hex.fan.faces(0).size(), 1u);
  EXPECT_EQ(hex.fan.faces(0).front().dim(), 0u);
  EXPECT_EQ(hex.fan.faces(2), hex.fan.max_cones());

  const auto bal = load_fan("balanced.fan.json");
  EXPECT_EQ(bal.fan.faces(2).size(), 9u);
  EXPECT_EQ(bal.fan.faces(1).size(), 8u);
  expect_error(ErrorKind::kBadDimension, [&] { bal.fan.faces(3); });
}

TEST(Faces, CountsInvariantUnderRenaming) {
  const auto hex = load_fan("hexagon.fan.json");
  const Fan& f = hex.fan;
  // Reverse the lexicographic order of the ids.
  std::map<std::string, RatVector> rays;
  std::map<std::string, std::string> rename;
  for (RayIndex r = 0; r < f.num_rays(); ++r) {
    const std::string id = "r" + std::to_string(f.num_rays() - r);
    rename[f.ray_id(r)] = id;
    rays[id] = f.generator(r);
  }
  std::vector<std::vector<std::string>> cones;
  for (const auto& c : f.max_cones()) {
    std::vector<std::string> ids;
    for (const auto& id : f.ids_of(c)) ids.push_back(rename[id]);
    cones.push_back(ids);
  }
  const Fan g(2, rays, cones);
  for (std::size_t k = 0; k <= 2; ++k) EXPECT_EQ(f.faces(k).size(), g.faces(k).size());
  EXPECT_TRUE(validate(g).valid());
}

TEST(Cones, UnknownCone) {
  const auto bal = load_fan("balanced.fan.json");
  const Cone c = bal.fan.cone_from_ids({"1", "2"});
  EXPECT_FALSE(bal.fan.has_cone(c));
  expect_error(ErrorKind::kUnknownCone, [&] { bal.fan.require_cone(c); });
  expect_error(ErrorKind::kUnknownCone, [&] { bal.fan.cone_from_ids({"9"}); });
}

TEST(Balancing, ExamplesFromFixtures) {
  const auto bal = load_fan("balanced.fan.json");
  EXPECT_TRUE(check_balancing(bal.fan, bal.weights).balanced());
  const auto hex = load_fan("hexagon.fan.json");
  EXPECT_TRUE(check_balancing(hex.fan, hex.weights).balanced());
  const auto u23 = load_fan("u23.fan.json");
  EXPECT_TRUE(check_balancing(u23.fan, u23.weights).balanced());
}

TEST(Balancing, QuadrantFailsAtBothRays) {
  const auto q = load_fan("quadrant.fan.json");
  const auto rep = check_balancing(q.fan, q.weights);
  ASSERT_EQ(rep.failures.size(), 2u);
  // At tau = ray 1 the outgoing generator is e2, outside span(e1).
  EXPECT_EQ(q.fan.ids_of(rep.failures[0].tau), std::vector<std::string>{"1"});
  EXPECT_EQ(rep.failures[0].witness, (RatVector{0, 1}));
}

TEST(Balancing, WeightsMatter) {
  const auto hex = load_fan("hexagon.fan.json");
  std::map<Cone, Rational> w;
  for (const auto& c : hex.fan.max_cones()) w.emplace(c, 1);
  w[hex.fan.max_cones().front()] = 2;
  EXPECT_FALSE(check_balancing(hex.fan, WeightFunction(w)).balanced());
  expect_error(ErrorKind::kMissingWeight,
               [&] { check_balancing(hex.fan, WeightFunction(std::map<Cone, Rational>{})); });
  expect_error(ErrorKind::kInput, [&] {
    WeightFunction({{hex.fan.max_cones().front(), Rational(-1)}});
  });
}

TEST(Balancing, InvariantUnderScaling) {
  for (const char* name : {"balanced.fan.json", "hexagon.fan.json", "quadrant.fan.json"}) {
    const auto f = load_fan(name);
    const bool base = check_balancing(f.fan, f.weights).balanced();
    for (long s : {2L, 5L, 11L}) {
      EXPECT_EQ(check_balancing(f.fan, f.weights.scaled(Rational(BigInt(s), BigInt(3))))
                    .balanced(),
                base)
          << name;
    }
  }
}

// Two generators p, q spanning a pointed 2D cone; interiors of two such cones
// with distinct ray directions meet iff some generator of one lies strictly
// inside the other.
bool strictly_inside(const RatVector& v, const RatVector& p, const RatVector& q) {
  auto cross = [](const RatVector& a, const RatVector& b) {
    return a[0] * b[1] - a[1] * b[0];
  };
  const Rational pq = cross(p, q);
  return (cross(p, v) * pq).sign() > 0 && (cross(v, q) * pq).sign() > 0;
}

TEST(Validate, RandomPlanarPairsMatchAngularOracle) {
  const std::vector<RatVector> dirs{{1, 0},  {2, 1},  {1, 1},   {1, 2},  {0, 1},
                                    {-1, 2}, {-1, 1}, {-2, 1},  {-1, 0}, {-2, -1},
                                    {-1, -1}, {-1, -2}, {0, -1}, {1, -2}, {1, -1},
                                    {2, -1}};
  SplitMix64 rng(41);
  int improper = 0, proper = 0;
  for (int t = 0; t < 300; ++t) {
    std::vector<std::size_t> pick;
    while (pick.size() < 4) {
      const std::size_t i = rng.below(dirs.size());
      if (std::find(pick.begin(), pick.end(), i) == pick.end()) pick.push_back(i);
    }
    // Allow one shared ray some of the time.
    if (rng.below(3) == 0) pick[2] = pick[0];
    auto pointed = [&](std::size_t a, std::size_t b) {
      const auto& p = dirs[a];
      const auto& q = dirs[b];
      return !(p[0] * q[1] - p[1] * q[0]).is_zero();
    };
    if (!pointed(pick[0], pick[1]) || !pointed(pick[2], pick[3])) continue;
    std::map<std::string, RatVector> rays;
    for (std::size_t i : pick) rays["d" + std::to_string(i)] = dirs[i];
    const auto id = [](std::size_t i) { return "d" + std::to_string(i); };
    const Fan f(2, rays, {{id(pick[0]), id(pick[1])}, {id(pick[2]), id(pick[3])}});
    const auto& p1 = dirs[pick[0]];
    const auto& q1 = dirs[pick[1]];
    const auto& p2 = dirs[pick[2]];
    const auto& q2 = dirs[pick[3]];
    const bool oracle = strictly_inside(p2, p1, q1) || strictly_inside(q2, p1, q1) ||
                        strictly_inside(p1, p2, q2) || strictly_inside(q1, p2, q2);
    const bool got = validate(f).has(ViolationKind::kImproperIntersection);
    EXPECT_EQ(got, oracle) << f.key(f.max_cones()[0]) << " | " << f.key(f.max_cones()[1]);
    (oracle ? improper : proper)++;
  }
  EXPECT_GT(improper, 20);
  EXPECT_GT(proper, 20);
}

}  // namespace
}  // namespace normcx
