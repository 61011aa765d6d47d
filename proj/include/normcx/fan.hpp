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
#include <cstddef>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "normcx/error.hpp"
#include "normcx/linalg.hpp"
#include "normcx/rational.hpp"

namespace normcx {

using RayIndex = std::size_t;

/// A cone of a simplicial fan, identified with its sorted set of ray
/// indices. Ray indices follow the lexicographic order of the ray ids, so
/// sorted indices are also sorted ids.
struct Cone {
  std::vector<RayIndex> rays;

  Cone() = default;
  explicit Cone(std::vector<RayIndex> r) : rays(std::move(r)) {
    std::sort(rays.begin(), rays.end());
    rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
  }

  std::size_t dim() const { return rays.size(); }
  bool contains(RayIndex r) const {
    return std::binary_search(rays.begin(), rays.end(), r);
  }
  bool is_face_of(const Cone& other) const {
    return std::includes(other.rays.begin(), other.rays.end(), rays.begin(),
                         rays.end());
  }
  Cone without(RayIndex r) const {
    Cone c;
    for (RayIndex x : rays) {
      if (x != r) c.rays.push_back(x);
    }
    return c;
  }
  Cone with(RayIndex r) const {
    std::vector<RayIndex> v(rays);
    v.push_back(r);
    return Cone(std::move(v));
  }

  friend auto operator<=>(const Cone&, const Cone&) = default;
};

/// Subsets of `cone` of size k, each as a Cone, in lexicographic order.
inline std::vector<Cone> subcones(const Cone& cone, std::size_t k) {
  std::vector<Cone> out;
  const std::size_t n = cone.dim();
  if (k > n) return out;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    Cone c;
    c.rays.reserve(k);
    for (std::size_t i : idx) c.rays.push_back(cone.rays[i]);
    out.push_back(std::move(c));
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

/// All faces of a simplicial cone (every subset of its rays).
inline std::vector<Cone> all_subcones(const Cone& cone) {
  std::vector<Cone> out;
  for (std::size_t k = 0; k <= cone.dim(); ++k) {
    auto part = subcones(cone, k);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

/// Marked pure simplicial fan: explicit ray generators u_rho and a list of
/// maximal cones. Dimension is inferred from the maximal cones.
class Fan {
 public:
  Fan() = default;

  /// Builds a fan from id-keyed data. Unknown ray ids, generator-length
  /// mismatches and repeated ids inside a cone are input errors; geometric
  /// problems are left for `validate`.
  Fan(std::size_t ambient_dim, const std::map<std::string, RatVector>& rays,
      const std::vector<std::vector<std::string>>& max_cones)
      : ambient_dim_(ambient_dim) {
    for (const auto& [id, gen] : rays) {
      if (gen.size() != ambient_dim) {
        throw Error(ErrorKind::kInput,
                    "ray '" + id + "' has " + std::to_string(gen.size()) +
                        " coordinates, expected " +
                        std::to_string(ambient_dim));
      }
      if (id.find(',') != std::string::npos) {
        throw Error(ErrorKind::kInput, "ray id '" + id + "' contains a comma");
      }
      ids_.push_back(id);
      generators_.push_back(gen);
    }
    std::set<Cone> seen;
    for (const auto& cone_ids : max_cones) {
      std::vector<RayIndex> idx;
      for (const auto& id : cone_ids) {
        auto r = ray_index(id);
        if (!r) throw Error(ErrorKind::kInput, "unknown ray id '" + id + "'");
        idx.push_back(*r);
      }
      Cone c(idx);
      if (c.dim() != cone_ids.size()) {
        throw Error(ErrorKind::kInput, "repeated ray id in a maximal cone");
      }
      if (seen.insert(c).second) max_cones_.push_back(std::move(c));
    }
    std::sort(max_cones_.begin(), max_cones_.end());
    for (const auto& c : max_cones_) dim_ = std::max(dim_, c.dim());
    for (const auto& c : max_cones_) {
      for (auto& f : all_subcones(c)) face_set_.insert(std::move(f));
    }
  }

  std::size_t ambient_dim() const { return ambient_dim_; }
  std::size_t dim() const { return dim_; }
  std::size_t num_rays() const { return ids_.size(); }
  const std::vector<std::string>& ray_ids() const { return ids_; }
  const std::string& ray_id(RayIndex r) const { return ids_.at(r); }
  const RatVector& generator(RayIndex r) const { return generators_.at(r); }
  const std::vector<Cone>& max_cones() const { return max_cones_; }

  std::optional<RayIndex> ray_index(const std::string& id) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) return std::nullopt;
    return static_cast<RayIndex>(it - ids_.begin());
  }

  /// True when `c` is a face of some maximal cone.
  bool has_cone(const Cone& c) const { return face_set_.contains(c); }

  void require_cone(const Cone& c) const {
    if (!has_cone(c)) {
      throw Error(ErrorKind::kUnknownCone, "{" + key(c) + "} is not a cone");
    }
  }

  Cone cone_from_ids(const std::vector<std::string>& ids) const {
    std::vector<RayIndex> idx;
    for (const auto& id : ids) {
      auto r = ray_index(id);
      if (!r) throw Error(ErrorKind::kUnknownCone, "unknown ray '" + id + "'");
      idx.push_back(*r);
    }
    return Cone(idx);
  }

  std::vector<std::string> ids_of(const Cone& c) const {
    std::vector<std::string> out;
    for (RayIndex r : c.rays) out.push_back(ids_[r]);
    return out;
  }

  /// Comma-joined sorted ray ids; the key used by the weight file format.
  std::string key(const Cone& c) const {
    std::string s;
    for (std::size_t i = 0; i < c.rays.size(); ++i) {
      if (i) s += ',';
      s += ids_[c.rays[i]];
    }
    return s;
  }

  /// All k-dimensional cones, deduplicated and sorted.
  std::vector<Cone> faces(std::size_t k) const {
    if (k > dim_) {
      throw Error(ErrorKind::kBadDimension,
                  "k=" + std::to_string(k) + " exceeds fan dimension " +
                      std::to_string(dim_));
    }
    std::vector<Cone> out;
    for (const auto& c : face_set_) {
      if (c.dim() == k) out.push_back(c);
    }
    return out;
  }

  const std::set<Cone>& all_cones() const { return face_set_; }

  std::vector<RatVector> generators_of(const Cone& c) const {
    std::vector<RatVector> out;
    for (RayIndex r : c.rays) out.push_back(generators_[r]);
    return out;
  }

 private:
  std::size_t ambient_dim_ = 0;
  std::size_t dim_ = 0;
  std::vector<std::string> ids_;
  std::vector<RatVector> generators_;
  std::vector<Cone> max_cones_;
  std::set<Cone> face_set_;
};

/// Positive weights on the maximal cones.
class WeightFunction {
 public:
  WeightFunction() = default;
  explicit WeightFunction(std::map<Cone, Rational> weights)
      : weights_(std::move(weights)) {
    for (const auto& [c, w] : weights_) {
      if (w.sign() <= 0) {
        throw Error(ErrorKind::kInput, "weights must be strictly positive");
      }
    }
  }

  static WeightFunction constant(const Fan& fan, const Rational& value = 1) {
    std::map<Cone, Rational> w;
    for (const auto& c : fan.max_cones()) w.emplace(c, value);
    return WeightFunction(std::move(w));
  }

  const Rational& at(const Fan& fan, const Cone& c) const {
    auto it = weights_.find(c);
    if (it == weights_.end()) {
      throw Error(ErrorKind::kMissingWeight, "no weight for {" + fan.key(c) + "}");
    }
    return it->second;
  }

  void require_total(const Fan& fan) const {
    for (const auto& c : fan.max_cones()) at(fan, c);
  }

  WeightFunction scaled(const Rational& s) const {
    auto w = weights_;
    for (auto& [c, v] : w) v *= s;
    return WeightFunction(std::move(w));
  }

  const std::map<Cone, Rational>& values() const { return weights_; }

 private:
  std::map<Cone, Rational> weights_;
};

enum class ViolationKind {
  kNoMaximalCones,
  kEmptyCone,
  kZeroGenerator,
  kDuplicateRay,
  kNonSimplicial,
  kNonPure,
  kImproperIntersection,
};

inline std::string_view to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::kNoMaximalCones: return "no-maximal-cones";
    case ViolationKind::kEmptyCone: return "empty-cone";
    case ViolationKind::kZeroGenerator: return "zero-generator";
    case ViolationKind::kDuplicateRay: return "duplicate-ray";
    case ViolationKind::kNonSimplicial: return "non-simplicial";
    case ViolationKind::kNonPure: return "non-pure";
    case ViolationKind::kImproperIntersection: return "improper-intersection";
  }
  return "unknown";
}

struct Violation {
  ViolationKind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool valid() const { return violations.empty(); }
  bool has(ViolationKind k) const {
    return std::any_of(violations.begin(), violations.end(),
                       [k](const Violation& v) { return v.kind == k; });
  }
};

namespace detail {

inline bool positively_proportional(const RatVector& u, const RatVector& v) {
  std::size_t i = 0;
  while (i < u.size() && u[i].is_zero()) ++i;
  if (i == u.size() || v[i].is_zero()) return false;
  const Rational lambda = v[i] / u[i];
  if (lambda.sign() <= 0) return false;
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (v[j] != lambda * u[j]) return false;
  }
  return true;
}

/// Does cone(a) meet cone(b) outside their common face? Both simplicial.
inline bool improper_overlap(const Fan& fan, const Cone& a, const Cone& b) {
  std::vector<RayIndex> only_a;
  std::set_difference(a.rays.begin(), a.rays.end(), b.rays.begin(),
                      b.rays.end(), std::back_inserter(only_a));
  if (only_a.empty()) return false;
  std::vector<RayIndex> all;
  std::set_union(a.rays.begin(), a.rays.end(), b.rays.begin(), b.rays.end(),
                 std::back_inserter(all));
  if (rank(fan.generators_of(Cone(all))) == all.size()) return false;

  // Variables: coefficients on a's rays, then on b's rays, all >= 0.
  // sum_a x u - sum_b y u = 0 and the a-only coefficients sum to one.
  const std::size_t n = fan.ambient_dim();
  const std::size_t na = a.dim();
  RatMatrix m(n + 1, na + b.dim());
  for (std::size_t j = 0; j < na; ++j) {
    const auto& u = fan.generator(a.rays[j]);
    for (std::size_t i = 0; i < n; ++i) m(i, j) = u[i];
    if (!b.contains(a.rays[j])) m(n, j) = 1;
  }
  for (std::size_t j = 0; j < b.dim(); ++j) {
    const auto& u = fan.generator(b.rays[j]);
    for (std::size_t i = 0; i < n; ++i) m(i, na + j) = -u[i];
  }
  RatVector rhs = zeros(n + 1);
  rhs[n] = 1;
  return nonnegative_solution(m, rhs).has_value();
}

}  // namespace detail

/// Checks the fan axioms exactly and lists every violation found.
inline ValidationReport validate(const Fan& fan) {
  ValidationReport report;
  auto add = [&](ViolationKind k, std::string msg) {
    report.violations.push_back({k, std::move(msg)});
  };
  if (fan.max_cones().empty()) {
    add(ViolationKind::kNoMaximalCones, "no maximal cones");
    return report;
  }
  for (RayIndex r = 0; r < fan.num_rays(); ++r) {
    if (is_zero(fan.generator(r))) {
      add(ViolationKind::kZeroGenerator,
          "ray '" + fan.ray_id(r) + "' has a zero generator");
    }
  }
  for (RayIndex r = 0; r < fan.num_rays(); ++r) {
    for (RayIndex s = r + 1; s < fan.num_rays(); ++s) {
      if (detail::positively_proportional(fan.generator(r),
                                          fan.generator(s))) {
        add(ViolationKind::kDuplicateRay, "rays '" + fan.ray_id(r) + "' and '" +
                                              fan.ray_id(s) +
                                              "' span the same ray");
      }
    }
  }
  std::vector<bool> simplicial(fan.max_cones().size(), true);
  for (std::size_t i = 0; i < fan.max_cones().size(); ++i) {
    const Cone& c = fan.max_cones()[i];
    if (c.dim() == 0) {
      add(ViolationKind::kEmptyCone, "a maximal cone has no rays");
      simplicial[i] = false;
      continue;
    }
    if (rank(fan.generators_of(c)) != c.dim()) {
      add(ViolationKind::kNonSimplicial,
          "{" + fan.key(c) + "} has linearly dependent generators");
      simplicial[i] = false;
    }
    if (c.dim() != fan.dim()) {
      add(ViolationKind::kNonPure, "{" + fan.key(c) + "} has dimension " +
                                       std::to_string(c.dim()) +
                                       ", fan dimension is " +
                                       std::to_string(fan.dim()));
    }
  }
  const auto& mc = fan.max_cones();
  for (std::size_t i = 0; i < mc.size(); ++i) {
    if (!simplicial[i]) continue;
    for (std::size_t j = i + 1; j < mc.size(); ++j) {
      if (!simplicial[j]) continue;
      if (detail::improper_overlap(fan, mc[i], mc[j])) {
        add(ViolationKind::kImproperIntersection,
            "{" + fan.key(mc[i]) + "} and {" + fan.key(mc[j]) +
                "} overlap outside their common face");
      }
    }
  }
  return report;
}

struct BalancingFailure {
  Cone tau;
  RatVector witness;  // sum of weighted outward generators, not in span(tau)
};

struct BalancingReport {
  std::vector<BalancingFailure> failures;
  bool balanced() const { return failures.empty(); }
};

/// Weighted balancing at every codimension-one cone: the weighted sum of
/// the generators leaving tau must lie in span(tau).
inline BalancingReport check_balancing(const Fan& fan,
                                       const WeightFunction& weights) {
  weights.require_total(fan);
  BalancingReport report;
  if (fan.dim() == 0) return report;
  std::map<Cone, RatVector> outward;
  for (const auto& sigma : fan.max_cones()) {
    if (sigma.dim() != fan.dim()) continue;
    const Rational& w = weights.at(fan, sigma);
    for (RayIndex r : sigma.rays) {
      auto [it, fresh] =
          outward.try_emplace(sigma.without(r), zeros(fan.ambient_dim()));
      it->second = it->second + w * fan.generator(r);
    }
  }
  for (const auto& [tau, v] : outward) {
    auto gens = fan.generators_of(tau);
    const std::size_t base = rank(gens);
    gens.push_back(v);
    if (rank(gens) != base) report.failures.push_back({tau, v});
  }
  return report;
}

}  // namespace normcx
