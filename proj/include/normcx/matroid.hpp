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

#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "normcx/error.hpp"
#include "normcx/fan.hpp"
#include "normcx/linalg.hpp"
#include "normcx/normal.hpp"
#include "normcx/rational.hpp"

namespace normcx {

/// Subset of the ground set; bit i is the i-th ground element.
using Flat = std::uint64_t;

inline std::size_t popcount(Flat f) {
  return static_cast<std::size_t>(std::popcount(f));
}
inline bool subset_of(Flat a, Flat b) { return (a & ~b) == 0; }

/// Matroid given by its lattice of flats. Construction only normalizes;
/// use validate_matroid to check the axioms.
class Matroid {
 public:
  Matroid() = default;
  Matroid(std::vector<std::string> ground, std::vector<Flat> flats)
      : ground_(std::move(ground)) {
    if (ground_.size() > 64) {
      throw Error(ErrorKind::kInput, "ground sets larger than 64 are unsupported");
    }
    std::set<std::string> seen;
    for (const auto& id : ground_) {
      if (id.empty() || !seen.insert(id).second) {
        throw Error(ErrorKind::kInput, "ground ids must be distinct and nonempty");
      }
    }
    std::sort(flats.begin(), flats.end(), [](Flat a, Flat b) {
      return popcount(a) != popcount(b) ? popcount(a) < popcount(b) : a < b;
    });
    flats.erase(std::unique(flats.begin(), flats.end()), flats.end());
    for (Flat f : flats) {
      if (!subset_of(f, full())) {
        throw Error(ErrorKind::kInput, "flat outside the ground set");
      }
    }
    flats_ = std::move(flats);
    compute_heights();
  }

  /// Flats listed by element ids.
  static Matroid from_flat_lists(
      const std::vector<std::string>& ground,
      const std::vector<std::vector<std::string>>& flats) {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < ground.size(); ++i) index[ground[i]] = i;
    std::vector<Flat> masks;
    for (const auto& f : flats) {
      Flat m = 0;
      for (const auto& id : f) {
        auto it = index.find(id);
        if (it == index.end()) {
          throw Error(ErrorKind::kInput, "flat names unknown element '" + id + "'");
        }
        m |= Flat{1} << it->second;
      }
      masks.push_back(m);
    }
    return Matroid(ground, std::move(masks));
  }

  /// Uniform matroid U_{r,n} on elements "0", ..., "n-1".
  static Matroid uniform(std::size_t r, std::size_t n) {
    std::vector<std::string> ground;
    for (std::size_t i = 0; i < n; ++i) ground.push_back(std::to_string(i));
    std::vector<Flat> flats;
    const Flat all = n == 64 ? ~Flat{0} : (Flat{1} << n) - 1;
    for (Flat s = 0; s <= all; ++s) {
      if (popcount(s) < r) flats.push_back(s);
      if (s == all) break;
    }
    flats.push_back(all);
    return Matroid(std::move(ground), std::move(flats));
  }

  /// Cycle matroid of a loopless graph. An edge set is closed when no other
  /// edge joins two vertices it already connects. Edge ids are "a-b".
  static Matroid graphic(
      const std::vector<std::string>& vertices,
      const std::vector<std::pair<std::string, std::string>>& edges) {
    std::map<std::string, std::size_t> vix;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      if (!vix.emplace(vertices[i], i).second) {
        throw Error(ErrorKind::kInput, "duplicate vertex '" + vertices[i] + "'");
      }
    }
    if (edges.size() > 20) {
      throw Error(ErrorKind::kInput, "graphs with more than 20 edges are unsupported");
    }
    std::vector<std::pair<std::size_t, std::size_t>> ends;
    std::vector<std::string> ground;
    for (const auto& [a, b] : edges) {
      auto ia = vix.find(a), ib = vix.find(b);
      if (ia == vix.end() || ib == vix.end()) {
        throw Error(ErrorKind::kInput, "edge uses unknown vertex");
      }
      if (ia->second == ib->second) {
        throw Error(ErrorKind::kInvalidMatroid, "loop at vertex '" + a + "'");
      }
      ends.emplace_back(ia->second, ib->second);
      ground.push_back(a + "-" + b);
    }
    const std::size_t ne = edges.size();
    std::vector<Flat> flats;
    for (Flat s = 0; s < (Flat{1} << ne); ++s) {
      std::vector<std::size_t> parent(vertices.size());
      for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
      std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
      };
      for (std::size_t e = 0; e < ne; ++e) {
        if (s >> e & 1) parent[find(ends[e].first)] = find(ends[e].second);
      }
      bool closed = true;
      for (std::size_t e = 0; e < ne && closed; ++e) {
        if (!(s >> e & 1) && find(ends[e].first) == find(ends[e].second)) {
          closed = false;
        }
      }
      if (closed) flats.push_back(s);
    }
    return Matroid(std::move(ground), std::move(flats));
  }

  const std::vector<std::string>& ground() const { return ground_; }
  std::size_t size() const { return ground_.size(); }
  Flat full() const {
    return ground_.size() == 64 ? ~Flat{0} : (Flat{1} << ground_.size()) - 1;
  }
  /// Flats ordered by size, then by mask.
  const std::vector<Flat>& flats() const { return flats_; }
  bool is_flat(Flat f) const {
    return std::binary_search(flats_.begin(), flats_.end(), f,
                              [](Flat a, Flat b) {
                                return popcount(a) != popcount(b)
                                           ? popcount(a) < popcount(b)
                                           : a < b;
                              });
  }

  /// Smallest flat containing s (the intersection of all such flats).
  Flat closure(Flat s) const {
    Flat c = full();
    for (Flat f : flats_) {
      if (subset_of(s, f)) c &= f;
    }
    return c;
  }

  Flat join(Flat a, Flat b) const { return closure(a | b); }

  /// Length of a longest chain of flats ending at cl(s).
  std::size_t rank(Flat s) const {
    auto it = height_.find(closure(s));
    return it == height_.end() ? 0 : it->second;
  }
  std::size_t rank() const { return rank(full()); }

  std::vector<std::string> ids(Flat f) const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < ground_.size(); ++i) {
      if (f >> i & 1) out.push_back(ground_[i]);
    }
    return out;
  }

  /// Concatenated element ids ("013"), or "+"-joined when some id is longer
  /// than one character.
  std::string name(Flat f) const {
    const bool short_ids =
        std::all_of(ground_.begin(), ground_.end(),
                    [](const std::string& s) { return s.size() == 1; });
    std::string out;
    for (const auto& id : ids(f)) {
      if (!short_ids && !out.empty()) out += "+";
      out += id;
    }
    return out;
  }

  Flat parse(const std::vector<std::string>& ids) const {
    Flat m = 0;
    for (const auto& id : ids) {
      auto it = std::find(ground_.begin(), ground_.end(), id);
      if (it == ground_.end()) {
        throw Error(ErrorKind::kInput, "unknown element '" + id + "'");
      }
      m |= Flat{1} << (it - ground_.begin());
    }
    return m;
  }

  /// Flat named as by name().
  Flat flat_named(const std::string& n) const {
    for (Flat f : flats_) {
      if (name(f) == n) return f;
    }
    throw Error(ErrorKind::kInput, "no flat named '" + n + "'");
  }

 private:
  void compute_heights() {
    for (Flat f : flats_) {
      std::size_t h = f == 0 ? 0 : 1;
      for (Flat g : flats_) {
        if (popcount(g) >= popcount(f)) break;
        if (subset_of(g, f)) h = std::max(h, height_.at(g) + 1);
      }
      height_[f] = h;
    }
  }

  std::vector<std::string> ground_;
  std::vector<Flat> flats_;
  std::map<Flat, std::size_t> height_;
};

struct MatroidReport {
  std::vector<std::string> violations;
  bool valid() const { return violations.empty(); }
};

/// Checks the flat axioms: empty set and ground set are flats, flats are
/// closed under intersection, and the covers of every flat partition its
/// complement.
inline MatroidReport validate_matroid(const Matroid& m) {
  MatroidReport r;
  auto show = [&](Flat f) { return "{" + m.name(f) + "}"; };
  if (!m.is_flat(0)) r.violations.push_back("the empty set is not a flat");
  if (!m.is_flat(m.full())) r.violations.push_back("the ground set is not a flat");
  const auto& fl = m.flats();
  for (std::size_t i = 0; i < fl.size(); ++i) {
    for (std::size_t j = i + 1; j < fl.size(); ++j) {
      if (!m.is_flat(fl[i] & fl[j])) {
        r.violations.push_back("intersection of " + show(fl[i]) + " and " +
                               show(fl[j]) + " is not a flat");
      }
    }
  }
  for (Flat f : fl) {
    std::vector<Flat> covers;
    for (Flat g : fl) {
      if (g == f || !subset_of(f, g)) continue;
      bool minimal = true;
      for (Flat h : fl) {
        if (h != f && h != g && subset_of(f, h) && subset_of(h, g)) {
          minimal = false;
          break;
        }
      }
      if (minimal) covers.push_back(g);
    }
    for (std::size_t e = 0; e < m.size(); ++e) {
      if (f >> e & 1) continue;
      const auto n = std::count_if(covers.begin(), covers.end(),
                                   [e](Flat g) { return g >> e & 1; });
      if (n != 1) {
        r.violations.push_back("element '" + m.ground()[e] + "' lies in " +
                               std::to_string(n) + " covers of " + show(f));
      }
    }
  }
  return r;
}

namespace detail {

inline std::vector<Flat> maximal_below(const std::vector<Flat>& building,
                                       Flat f) {
  std::vector<Flat> below;
  for (Flat g : building) {
    if (subset_of(g, f)) below.push_back(g);
  }
  std::vector<Flat> out;
  for (Flat g : below) {
    bool maximal = std::none_of(below.begin(), below.end(), [g](Flat h) {
      return h != g && subset_of(g, h);
    });
    if (maximal) out.push_back(g);
  }
  return out;
}

/// Is the join map from the product of [0, G_i] onto [0, F] a poset
/// isomorphism, for G_i the maximal building-set members below F?
inline bool factors_interval(const Matroid& m,
                             const std::vector<Flat>& building, Flat f) {
  if (std::find(building.begin(), building.end(), f) != building.end()) {
    return true;
  }
  const auto maxes = maximal_below(building, f);
  std::vector<std::vector<Flat>> intervals;
  for (Flat g : maxes) {
    std::vector<Flat> iv;
    for (Flat h : m.flats()) {
      if (subset_of(h, g)) iv.push_back(h);
    }
    intervals.push_back(std::move(iv));
  }
  std::vector<Flat> target;
  for (Flat h : m.flats()) {
    if (subset_of(h, f)) target.push_back(h);
  }
  std::size_t total = 1;
  for (const auto& iv : intervals) total *= iv.size();
  if (total != target.size()) return false;

  std::vector<std::vector<Flat>> tuples;
  std::vector<Flat> images;
  std::vector<Flat> cur(intervals.size());
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == intervals.size()) {
      Flat u = 0;
      for (Flat x : cur) u |= x;
      tuples.push_back(cur);
      images.push_back(m.closure(u));
      return;
    }
    for (Flat x : intervals[i]) {
      cur[i] = x;
      rec(i + 1);
    }
  };
  rec(0);
  std::set<Flat> distinct(images.begin(), images.end());
  if (distinct.size() != target.size()) return false;
  for (Flat x : images) {
    if (!subset_of(x, f)) return false;
  }
  for (std::size_t a = 0; a < tuples.size(); ++a) {
    for (std::size_t b = 0; b < tuples.size(); ++b) {
      bool le = true;
      for (std::size_t i = 0; i < intervals.size() && le; ++i) {
        le = subset_of(tuples[a][i], tuples[b][i]);
      }
      if (le != subset_of(images[a], images[b])) return false;
    }
  }
  return true;
}

}  // namespace detail

/// Exact building-set test by explicit interval-product isomorphisms.
inline bool is_building_set(const Matroid& m, const std::vector<Flat>& building) {
  if (std::find(building.begin(), building.end(), m.full()) == building.end()) {
    return false;
  }
  for (Flat g : building) {
    if (g == 0 || !m.is_flat(g)) return false;
  }
  for (Flat f : m.flats()) {
    if (f != 0 && !detail::factors_interval(m, building, f)) return false;
  }
  return true;
}

/// The maximal building set: every nonempty flat.
inline std::vector<Flat> maximal_building_set(const Matroid& m) {
  std::vector<Flat> out;
  for (Flat f : m.flats()) {
    if (f != 0) out.push_back(f);
  }
  return out;
}

/// All building sets, each sorted like Matroid::flats(). Atoms and the
/// ground set are in every building set; the remaining flats are decided
/// in rank order, pruning as soon as a fully decided rank fails.
inline std::vector<std::vector<Flat>> enumerate_building_sets(
    const Matroid& m, std::size_t max_candidates = 20) {
  std::vector<Flat> forced, optional;
  for (Flat f : m.flats()) {
    if (f == 0) continue;
    if (f == m.full() || m.rank(f) == 1) {
      forced.push_back(f);
    } else {
      optional.push_back(f);
    }
  }
  if (optional.size() > max_candidates) {
    throw Error(ErrorKind::kInput,
                std::to_string(optional.size()) +
                    " optional flats is too many to enumerate building sets");
  }
  std::stable_sort(optional.begin(), optional.end(), [&](Flat a, Flat b) {
    return m.rank(a) < m.rank(b);
  });
  std::vector<std::vector<Flat>> out;
  std::vector<Flat> chosen = forced;
  auto sorted_chosen = [&] {
    auto v = chosen;
    std::sort(v.begin(), v.end(), [](Flat a, Flat b) {
      return popcount(a) != popcount(b) ? popcount(a) < popcount(b) : a < b;
    });
    return v;
  };
  // Every flat of rank r must factor once all flats of rank <= r are decided.
  auto rank_ok = [&](std::size_t r) {
    for (Flat f : m.flats()) {
      if (f != 0 && m.rank(f) == r &&
          !detail::factors_interval(m, chosen, f)) {
        return false;
      }
    }
    return true;
  };
  if (!rank_ok(1)) return out;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i > 0) {
      const std::size_t r = m.rank(optional[i - 1]);
      if (i == optional.size() || m.rank(optional[i]) != r) {
        if (!rank_ok(r)) return;
      }
    }
    if (i == optional.size()) {
      if (is_building_set(m, chosen)) out.push_back(sorted_chosen());
      return;
    }
    chosen.push_back(optional[i]);
    rec(i + 1);
    chosen.pop_back();
    rec(i + 1);
  };
  rec(0);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() > b.size() : a < b;
  });
  return out;
}

/// Nested set, sorted by mask.
using NestedSet = std::vector<Flat>;

namespace detail {

/// Does adding g keep n nested? Every antichain through g of size >= 2
/// must join outside the building set.
inline bool extends_nested(const Matroid& m, const std::set<Flat>& building,
                           const NestedSet& n, Flat g) {
  std::vector<Flat> incomparable;
  for (Flat h : n) {
    if (!subset_of(h, g) && !subset_of(g, h)) incomparable.push_back(h);
  }
  const std::size_t k = incomparable.size();
  for (std::uint64_t s = 1; s < (std::uint64_t{1} << k); ++s) {
    Flat u = g;
    bool antichain = true;
    std::vector<Flat> pick;
    for (std::size_t i = 0; i < k; ++i) {
      if (s >> i & 1) pick.push_back(incomparable[i]);
    }
    for (std::size_t a = 0; a < pick.size() && antichain; ++a) {
      for (std::size_t b = a + 1; b < pick.size() && antichain; ++b) {
        if (subset_of(pick[a], pick[b]) || subset_of(pick[b], pick[a])) {
          antichain = false;
        }
      }
    }
    if (!antichain) continue;
    for (Flat h : pick) u |= h;
    if (building.contains(m.closure(u))) return false;
  }
  return true;
}

}  // namespace detail

/// All nested sets of proper building-set flats, including the empty one.
inline std::vector<NestedSet> nested_sets(const Matroid& m,
                                          const std::vector<Flat>& building) {
  const std::set<Flat> bset(building.begin(), building.end());
  std::vector<Flat> proper;
  for (Flat g : bset) {
    if (g != m.full()) proper.push_back(g);
  }
  std::vector<NestedSet> out;
  NestedSet cur;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    out.push_back(cur);
    for (std::size_t i = start; i < proper.size(); ++i) {
      if (!detail::extends_nested(m, bset, cur, proper[i])) continue;
      cur.push_back(proper[i]);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

/// Bergman fan together with the flat behind each ray.
struct BergmanFan {
  Fan fan;
  std::vector<Flat> ray_flats;  // by RayIndex

  RayIndex ray_of(Flat f) const {
    auto it = std::find(ray_flats.begin(), ray_flats.end(), f);
    if (it == ray_flats.end()) {
      throw Error(ErrorKind::kUnknownCone, "flat is not a ray");
    }
    return static_cast<RayIndex>(it - ray_flats.begin());
  }

  Cone cone_of(const NestedSet& n) const {
    std::vector<RayIndex> r;
    for (Flat f : n) r.push_back(ray_of(f));
    return Cone(r);
  }
};

/// Generator of the ray of G in coordinates e_1..e_n of Z^E / Z(1,...,1):
/// the indicator of G, or minus the indicator of its complement when G
/// contains e_0.
inline RatVector bergman_generator(const Matroid& m, Flat g) {
  RatVector u = zeros(m.size() - 1);
  const bool has_e0 = g & 1;
  for (std::size_t i = 1; i < m.size(); ++i) {
    const bool in = g >> i & 1;
    if (has_e0) {
      if (!in) u[i - 1] = -1;
    } else if (in) {
      u[i - 1] = 1;
    }
  }
  return u;
}

inline BergmanFan bergman_fan_with_flats(const Matroid& m,
                                         const std::vector<Flat>& building) {
  const auto report = validate_matroid(m);
  if (!report.valid()) {
    throw Error(ErrorKind::kInvalidMatroid, report.violations.front());
  }
  if (m.rank() < 2) {
    throw Error(ErrorKind::kInvalidMatroid,
                "Bergman fans need rank at least 2");
  }
  if (!is_building_set(m, building)) {
    throw Error(ErrorKind::kInvalidBuildingSet,
                "the given flats do not form a building set");
  }
  const auto nested = nested_sets(m, building);
  const std::set<Flat> bset(building.begin(), building.end());
  std::map<std::string, RatVector> rays;
  std::map<std::string, Flat> by_name;
  for (Flat g : bset) {
    if (g == m.full()) continue;
    rays.emplace(m.name(g), bergman_generator(m, g));
    by_name.emplace(m.name(g), g);
  }
  std::vector<std::vector<std::string>> max_cones;
  for (const auto& n : nested) {
    bool maximal = true;
    for (Flat g : bset) {
      if (g == m.full() || std::find(n.begin(), n.end(), g) != n.end()) {
        continue;
      }
      if (detail::extends_nested(m, bset, n, g)) {
        maximal = false;
        break;
      }
    }
    if (!maximal) continue;
    std::vector<std::string> ids;
    for (Flat g : n) ids.push_back(m.name(g));
    max_cones.push_back(std::move(ids));
  }
  BergmanFan out{Fan(m.size() - 1, rays, max_cones), {}};
  for (const auto& id : out.fan.ray_ids()) out.ray_flats.push_back(by_name.at(id));
  return out;
}

/// Fan with one cone per nested set, on rays u_G for proper G in the
/// building set.
inline Fan bergman_fan(const Matroid& m, const std::vector<Flat>& building) {
  return bergman_fan_with_flats(m, building).fan;
}

/// z_G = |G| - m^{-|G^c|} when e_0 is not in G, else |G^c| - m^{-|G|}.
inline ZValue cubical_z_for(const Matroid& mat, const BergmanFan& bf,
                            const Rational& m) {
  RatVector z(bf.ray_flats.size());
  for (RayIndex r = 0; r < bf.ray_flats.size(); ++r) {
    const Flat g = bf.ray_flats[r];
    const long in = static_cast<long>(popcount(g));
    const long out = static_cast<long>(mat.size()) - in;
    z[r] = (g & 1) ? Rational(out) - pow(m, -in) : Rational(in) - pow(m, -out);
  }
  return ZValue(std::move(z));
}

struct NestedCoefficients {
  NestedSet nested;
  std::vector<Rational> a;  // aligned with nested
};

struct CubicalCertificate {
  BigInt m;
  ZValue z;
  BergmanFan bergman;
  std::size_t escalations = 0;
  /// w-vector coefficients of every nonempty nested set.
  std::vector<NestedCoefficients> table;
};

/// Finds a cubical value under the dot product in the e_1..e_n basis:
/// m starts at 2|E| and is squared until is_cubical certifies the result.
inline CubicalCertificate construct_cubical_z(const Matroid& mat,
                                              const std::vector<Flat>& building,
                                              std::size_t max_escalations = 8) {
  BergmanFan bf = bergman_fan_with_flats(mat, building);
  const InnerProduct ip = InnerProduct::dot(bf.fan.ambient_dim());
  BigInt m = 2 * static_cast<long>(mat.size());
  for (std::size_t attempt = 0; attempt <= max_escalations; ++attempt) {
    ZValue z = cubical_z_for(mat, bf, Rational(m));
    if (is_cubical(bf.fan, ip, z).verdict == Cubicality::kCubical) {
      CubicalCertificate cert{m, z, bf, attempt, {}};
      for (const auto& n : nested_sets(mat, building)) {
        if (n.empty()) continue;
        const WVector w = w_vector(bf.fan, ip, z, bf.cone_of(n));
        NestedCoefficients row{n, {}};
        for (Flat g : n) {
          row.a.push_back(w.coeff(bf.ray_of(g)));
          if (row.a.back().sign() <= 0) {
            throw Error(ErrorKind::kCertificationFailed,
                        "nonpositive coefficient in a certified value");
          }
        }
        cert.table.push_back(std::move(row));
      }
      return cert;
    }
    m *= m;
  }
  throw Error(ErrorKind::kCertificationFailed,
              "no cubical value found after " +
                  std::to_string(max_escalations) + " escalations of m");
}

}  // namespace normcx
