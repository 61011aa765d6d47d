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
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "normcx/error.hpp"
#include "normcx/fan.hpp"
#include "normcx/linalg.hpp"
#include "normcx/rational.hpp"

namespace normcx {

/// Symmetric positive-definite form u * v = u^T M v on the ambient space.
class InnerProduct {
 public:
  InnerProduct() = default;
  explicit InnerProduct(RatMatrix m) : m_(std::move(m)) {
    if (!m_.square()) {
      throw Error(ErrorKind::kNonSquare, "inner product matrix is not square");
    }
    if (!is_positive_definite(m_)) {
      throw Error(ErrorKind::kInput,
                  "inner product matrix is not symmetric positive definite");
    }
  }

  static InnerProduct dot(std::size_t n) {
    return InnerProduct(RatMatrix::identity(n));
  }

  std::size_t dim() const { return m_.rows(); }
  const RatMatrix& matrix() const { return m_; }

  Rational operator()(const RatVector& a, const RatVector& b) const {
    Rational s;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.size(); ++j) s += a[i] * m_(i, j) * b[j];
    }
    return s;
  }

 private:
  RatMatrix m_;
};

/// A value z in R^{rays}, stored densely by ray index of a fixed fan.
class ZValue {
 public:
  ZValue() = default;
  explicit ZValue(RatVector values) : values_(std::move(values)) {}

  static ZValue zero(const Fan& fan) { return ZValue(zeros(fan.num_rays())); }

  /// Requires exactly one entry per ray id of `fan`.
  static ZValue from_map(const Fan& fan,
                        const std::map<std::string, Rational>& by_id) {
    RatVector v(fan.num_rays());
    std::vector<bool> seen(fan.num_rays(), false);
    for (const auto& [id, value] : by_id) {
      auto r = fan.ray_index(id);
      if (!r) throw Error(ErrorKind::kInput, "z names unknown ray '" + id + "'");
      v[*r] = value;
      seen[*r] = true;
    }
    for (RayIndex r = 0; r < fan.num_rays(); ++r) {
      if (!seen[r]) {
        throw Error(ErrorKind::kInput, "z has no value for ray '" +
                                           fan.ray_id(r) + "'");
      }
    }
    return ZValue(std::move(v));
  }

  std::map<std::string, Rational> to_map(const Fan& fan) const {
    std::map<std::string, Rational> out;
    for (RayIndex r = 0; r < values_.size(); ++r) out[fan.ray_id(r)] = values_[r];
    return out;
  }

  std::size_t size() const { return values_.size(); }
  const Rational& operator[](RayIndex r) const { return values_.at(r); }
  Rational& operator[](RayIndex r) { return values_.at(r); }
  const RatVector& values() const { return values_; }

  RatVector restrict_to(const Cone& c) const {
    RatVector out;
    out.reserve(c.dim());
    for (RayIndex r : c.rays) out.push_back(values_.at(r));
    return out;
  }

  friend ZValue operator+(const ZValue& a, const ZValue& b) {
    return ZValue(a.values_ + b.values_);
  }
  friend ZValue operator*(const Rational& s, const ZValue& z) {
    return ZValue(s * z.values_);
  }
  friend bool operator==(const ZValue&, const ZValue&) = default;

 private:
  RatVector values_;
};

inline void require_compatible(const Fan& fan, const InnerProduct& ip) {
  if (ip.dim() != fan.ambient_dim()) {
    throw Error(ErrorKind::kBadDimension,
                "inner product is " + std::to_string(ip.dim()) +
                    "-dimensional, fan lives in dimension " +
                    std::to_string(fan.ambient_dim()));
  }
}

inline void require_compatible(const Fan& fan, const ZValue& z) {
  if (z.size() != fan.num_rays()) {
    throw Error(ErrorKind::kInput, "z has " + std::to_string(z.size()) +
                                       " entries, fan has " +
                                       std::to_string(fan.num_rays()) +
                                       " rays");
  }
}

namespace detail {

inline RatMatrix gram_unchecked(const Fan& fan, const InnerProduct& ip,
                                const Cone& c) {
  const std::size_t k = c.dim();
  RatMatrix g(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      g(i, j) = ip(fan.generator(c.rays[i]), fan.generator(c.rays[j]));
      g(j, i) = g(i, j);
    }
  }
  return g;
}

inline std::size_t position(const Cone& c, RayIndex r) {
  auto it = std::lower_bound(c.rays.begin(), c.rays.end(), r);
  return static_cast<std::size_t>(it - c.rays.begin());
}

}  // namespace detail

/// Gram matrix (u_rho * u_eta) over the cone's rays in canonical order.
inline RatMatrix gram(const Fan& fan, const InnerProduct& ip, const Cone& c) {
  require_compatible(fan, ip);
  fan.require_cone(c);
  return detail::gram_unchecked(fan, ip, c);
}

/// The unique point w of span(cone) with w * u_rho = z_rho on the cone's
/// rays, with its coefficients in the generator basis.
struct WVector {
  Cone cone;
  RatVector point;
  RatVector coeffs;  // aligned with cone.rays

  const Rational& coeff(RayIndex r) const {
    return coeffs.at(detail::position(cone, r));
  }
};

namespace detail {

inline WVector w_vector_unchecked(const Fan& fan, const InnerProduct& ip,
                                  const ZValue& z, const Cone& tau) {
  WVector w{tau, zeros(fan.ambient_dim()), {}};
  if (tau.dim() == 0) return w;
  w.coeffs = solve(gram_unchecked(fan, ip, tau), z.restrict_to(tau));
  for (std::size_t i = 0; i < tau.dim(); ++i) {
    w.point = w.point + w.coeffs[i] * fan.generator(tau.rays[i]);
  }
  return w;
}

}  // namespace detail

inline WVector w_vector(const Fan& fan, const InnerProduct& ip, const ZValue& z,
                        const Cone& tau) {
  require_compatible(fan, ip);
  require_compatible(fan, z);
  fan.require_cone(tau);
  return detail::w_vector_unchecked(fan, ip, z, tau);
}

/// Cramer quotient det(G_tau with the rho column replaced by z_tau) /
/// det(G_tau): the rho-coefficient of w_tau computed through determinants.
inline Rational cramer_coefficient(const Fan& fan, const InnerProduct& ip,
                                   const ZValue& z, const Cone& tau,
                                   RayIndex rho) {
  const RatMatrix g = detail::gram_unchecked(fan, ip, tau);
  const RatVector zt = z.restrict_to(tau);
  return cramer_quotient(g, zt, detail::position(tau, rho));
}

enum class Cubicality { kCubical, kPseudoCubical, kNeither };

inline std::string_view to_string(Cubicality c) {
  switch (c) {
    case Cubicality::kCubical: return "Cubical";
    case Cubicality::kPseudoCubical: return "PseudoCubical";
    case Cubicality::kNeither: return "Neither";
  }
  return "Unknown";
}

/// A face/ray pair (tau, rho) with slack z_rho - u_rho * w_tau.
struct CubicalityWitness {
  Cone tau;
  RayIndex rho;
  Rational slack;
};

struct CubicalityResult {
  Cubicality verdict = Cubicality::kCubical;
  /// First violated pair for kNeither, first tight pair for kPseudoCubical.
  std::optional<CubicalityWitness> witness;

  bool pseudo_cubical() const { return verdict != Cubicality::kNeither; }
};

namespace detail {

/// Shared w-vector cache for one (fan, ip, z).
class WCache {
 public:
  WCache(const Fan& fan, const InnerProduct& ip, const ZValue& z)
      : fan_(fan), ip_(ip), z_(z) {}

  const WVector& at(const Cone& tau) {
    auto it = cache_.find(tau);
    if (it == cache_.end()) {
      it = cache_.emplace(tau, w_vector_unchecked(fan_, ip_, z_, tau)).first;
    }
    return it->second;
  }

 private:
  const Fan& fan_;
  const InnerProduct& ip_;
  const ZValue& z_;
  std::map<Cone, WVector> cache_;
};

inline void classify_cone(const Fan& fan, const InnerProduct& ip,
                          const ZValue& z, const Cone& sigma, WCache& cache,
                          std::set<std::pair<Cone, RayIndex>>& done,
                          CubicalityResult& result) {
  for (const Cone& tau : all_subcones(sigma)) {
    for (RayIndex rho : sigma.rays) {
      if (tau.contains(rho)) continue;
      if (!done.emplace(tau, rho).second) continue;
      const Rational slack = z[rho] - ip(fan.generator(rho), cache.at(tau).point);
      if (slack.sign() < 0) {
        if (result.verdict != Cubicality::kNeither) {
          result.verdict = Cubicality::kNeither;
          result.witness = CubicalityWitness{tau, rho, slack};
        }
      } else if (slack.is_zero() && result.verdict == Cubicality::kCubical) {
        result.verdict = Cubicality::kPseudoCubical;
        result.witness = CubicalityWitness{tau, rho, slack};
      }
    }
  }
}

}  // namespace detail

/// Classifies z for a single cone via the face/ray inequalities
/// u_rho * w_tau < z_rho (cubical) or <= z_rho (pseudo-cubical).
inline CubicalityResult is_cubical(const Fan& fan, const InnerProduct& ip,
                                   const ZValue& z, const Cone& sigma) {
  require_compatible(fan, ip);
  require_compatible(fan, z);
  fan.require_cone(sigma);
  detail::WCache cache(fan, ip, z);
  std::set<std::pair<Cone, RayIndex>> done;
  CubicalityResult result;
  detail::classify_cone(fan, ip, z, sigma, cache, done, result);
  return result;
}

/// Classifies z for the whole fan; w-vectors of shared faces are computed
/// once.
inline CubicalityResult is_cubical(const Fan& fan, const InnerProduct& ip,
                                   const ZValue& z) {
  require_compatible(fan, ip);
  require_compatible(fan, z);
  detail::WCache cache(fan, ip, z);
  std::set<std::pair<Cone, RayIndex>> done;
  CubicalityResult result;
  for (const Cone& sigma : fan.max_cones()) {
    detail::classify_cone(fan, ip, z, sigma, cache, done, result);
  }
  return result;
}

/// One defining form of the cubical cone: sum_r form[r] z_r > 0 (or >= 0
/// for the closure). Dense over the fan's rays.
struct CubicalInequality {
  Cone tau;
  RayIndex rho;
  RatVector form;
  bool strict = true;

  Rational evaluate(const ZValue& z) const { return dot(form, z.values()); }
};

/// H-representation of Cub(fan, ip); weak versions of the same forms cut
/// out its closure.
struct CubicalCone {
  std::vector<CubicalInequality> inequalities;

  CubicalityResult classify(const ZValue& z) const {
    CubicalityResult result;
    for (const auto& ineq : inequalities) {
      const Rational v = ineq.evaluate(z);
      if (v.sign() < 0) {
        return {Cubicality::kNeither, CubicalityWitness{ineq.tau, ineq.rho, v}};
      }
      if (v.is_zero() && result.verdict == Cubicality::kCubical) {
        result = {Cubicality::kPseudoCubical,
                  CubicalityWitness{ineq.tau, ineq.rho, v}};
      }
    }
    return result;
  }
};

/// Builds z -> z_rho - u_rho * w_tau(z) for every face/ray pair, with the
/// coordinates of w_tau(z) expanded symbolically by cofactors.
inline CubicalCone cubical_cone(const Fan& fan, const InnerProduct& ip) {
  require_compatible(fan, ip);
  std::set<std::pair<Cone, RayIndex>> pairs;
  for (const Cone& sigma : fan.max_cones()) {
    for (const Cone& tau : all_subcones(sigma)) {
      for (RayIndex rho : sigma.rays) {
        if (!tau.contains(rho)) pairs.emplace(tau, rho);
      }
    }
  }
  std::map<Cone, std::pair<RatMatrix, std::vector<RatVector>>> symbolic;
  CubicalCone cone;
  for (const auto& [tau, rho] : pairs) {
    RatVector form = zeros(fan.num_rays());
    form[rho] = 1;
    if (tau.dim() > 0) {
      auto it = symbolic.find(tau);
      if (it == symbolic.end()) {
        RatMatrix g = detail::gram_unchecked(fan, ip, tau);
        const Rational d = det(g);
        std::vector<RatVector> coeff_forms;  // a_eta(z) = sum_mu c[mu] z_mu
        for (std::size_t e = 0; e < tau.dim(); ++e) {
          RatVector c = column_cofactors(g, e);
          for (auto& x : c) x /= d;
          coeff_forms.push_back(std::move(c));
        }
        it = symbolic.emplace(tau, std::make_pair(std::move(g),
                                                  std::move(coeff_forms)))
                 .first;
      }
      const auto& coeff_forms = it->second.second;
      for (std::size_t e = 0; e < tau.dim(); ++e) {
        const Rational g_rho_eta =
            ip(fan.generator(rho), fan.generator(tau.rays[e]));
        if (g_rho_eta.is_zero()) continue;
        for (std::size_t mu = 0; mu < tau.dim(); ++mu) {
          form[tau.rays[mu]] -= g_rho_eta * coeff_forms[e][mu];
        }
      }
    }
    cone.inequalities.push_back({tau, rho, std::move(form), true});
  }
  return cone;
}

namespace detail {

inline void require_pseudo_cubical(const Fan& fan, const InnerProduct& ip,
                                   const ZValue& z, const Cone& sigma) {
  const auto res = is_cubical(fan, ip, z, sigma);
  if (!res.pseudo_cubical()) {
    throw Error(ErrorKind::kNotPseudoCubical,
                "z is not pseudo-cubical on {" + fan.key(sigma) +
                    "}: face {" + fan.key(res.witness->tau) + "}, ray '" +
                    fan.ray_id(res.witness->rho) + "'");
  }
}

inline void require_pseudo_cubical(const Fan& fan, const InnerProduct& ip,
                                   const ZValue& z) {
  const auto res = is_cubical(fan, ip, z);
  if (!res.pseudo_cubical()) {
    throw Error(ErrorKind::kNotPseudoCubical,
                "z is not pseudo-cubical: face {" +
                    fan.key(res.witness->tau) + "}, ray '" +
                    fan.ray_id(res.witness->rho) + "'");
  }
}

}  // namespace detail

/// Vertex set {w_tau : tau a face of sigma}, deduplicated and sorted.
inline std::vector<RatVector> polytope_vertices(const Fan& fan,
                                                const InnerProduct& ip,
                                                const ZValue& z,
                                                const Cone& sigma) {
  detail::require_pseudo_cubical(fan, ip, z, sigma);
  detail::WCache cache(fan, ip, z);
  std::set<RatVector> verts;
  for (const Cone& tau : all_subcones(sigma)) verts.insert(cache.at(tau).point);
  return {verts.begin(), verts.end()};
}

/// Simplex conv(w_{sigma(f,0)}, ..., w_{sigma(f,k)}) for one labeling f.
struct LabeledSimplex {
  Cone cone;
  std::vector<RayIndex> labeling;   // labeling[j-1] = f(j)
  std::vector<RatVector> vertices;  // vertices[0] is the origin
  bool degenerate = false;
};

/// Every labeling of sigma's rays, in lexicographic order of ray ids.
inline std::vector<std::vector<RayIndex>> labelings(const Cone& sigma) {
  std::vector<std::vector<RayIndex>> out;
  std::vector<RayIndex> f(sigma.rays);
  do {
    out.push_back(f);
  } while (std::next_permutation(f.begin(), f.end()));
  return out;
}

/// One simplex per labeling, degenerate ones flagged rather than dropped.
inline std::vector<LabeledSimplex> triangulate(const Fan& fan,
                                               const InnerProduct& ip,
                                               const ZValue& z,
                                               const Cone& sigma) {
  detail::require_pseudo_cubical(fan, ip, z, sigma);
  detail::WCache cache(fan, ip, z);
  std::vector<LabeledSimplex> out;
  for (auto& f : labelings(sigma)) {
    LabeledSimplex s{sigma, f, {zeros(fan.ambient_dim())}, false};
    Cone prefix;
    for (RayIndex r : f) {
      prefix = prefix.with(r);
      s.vertices.push_back(cache.at(prefix).point);
    }
    std::vector<RatVector> spanning(s.vertices.begin() + 1, s.vertices.end());
    s.degenerate = rank(spanning) < sigma.dim();
    out.push_back(std::move(s));
  }
  return out;
}

namespace detail {

/// Sum over labelings f of prod_j factor(sigma(f,j), f(j)), computed by
/// memoizing on the prefix set sigma(f,j).
inline Rational labeling_sum(
    const Cone& sigma,
    const std::function<Rational(const Cone&, RayIndex)>& factor) {
  std::map<Cone, Rational> memo;
  std::function<Rational(const Cone&)> rec = [&](const Cone& pi) -> Rational {
    if (pi.dim() == 0) return Rational(1);
    auto it = memo.find(pi);
    if (it != memo.end()) return it->second;
    Rational s;
    for (RayIndex last : pi.rays) {
      const Rational f = factor(pi, last);
      if (f.is_zero()) continue;
      s += rec(pi.without(last)) * f;
    }
    memo.emplace(pi, s);
    return s;
  };
  return rec(sigma);
}

/// det(G_sigma) * sum_f prod_j det(G_{sigma(f,j),f(j)}(z_j)) /
/// det(G_{sigma(f,j)}), where slot j = |sigma(f,j)| uses zs[j-1].
inline Rational squarefree_coefficient(const Fan& fan, const InnerProduct& ip,
                                       const Cone& sigma,
                                       const std::vector<const ZValue*>& zs) {
  std::map<Cone, std::pair<RatMatrix, Rational>> grams;
  auto gram_of = [&](const Cone& pi) -> const std::pair<RatMatrix, Rational>& {
    auto it = grams.find(pi);
    if (it == grams.end()) {
      RatMatrix g = gram_unchecked(fan, ip, pi);
      Rational d = det(g);
      it = grams.emplace(pi, std::make_pair(std::move(g), std::move(d))).first;
    }
    return it->second;
  };
  const Rational sum = labeling_sum(sigma, [&](const Cone& pi, RayIndex last) {
    const auto& [g, d] = gram_of(pi);
    const ZValue& z = *zs.at(pi.dim() - 1);
    const RatVector zp = z.restrict_to(pi);
    return det(g.with_column(position(pi, last), zp)) / d;
  });
  if (sum.is_zero()) return sum;
  return gram_of(sigma).second * sum;
}

}  // namespace detail

/// Normalized volume of P_{sigma,*}(z) by the closed-form Gram determinant
/// sum over labelings.
inline Rational cone_volume(const Fan& fan, const InnerProduct& ip,
                            const ZValue& z, const Cone& sigma) {
  detail::require_pseudo_cubical(fan, ip, z, sigma);
  std::vector<const ZValue*> zs(sigma.dim(), &z);
  return detail::squarefree_coefficient(fan, ip, sigma, zs);
}

/// Weighted sum of the maximal-cone volumes.
inline Rational complex_volume(const Fan& fan, const WeightFunction& weights,
                               const InnerProduct& ip, const ZValue& z) {
  require_compatible(fan, ip);
  require_compatible(fan, z);
  weights.require_total(fan);
  detail::require_pseudo_cubical(fan, ip, z);
  Rational total;
  for (const Cone& sigma : fan.max_cones()) {
    std::vector<const ZValue*> zs(sigma.dim(), &z);
    total += weights.at(fan, sigma) *
             detail::squarefree_coefficient(fan, ip, sigma, zs);
  }
  return total;
}

/// Independent volume: for each labeling, the matrix of w-coefficients of
/// the simplex vertices in the generator basis (found by `solve`), summed as
/// det(G_sigma) * |det T_f|.
inline Rational volume_oracle_triangulation(const Fan& fan,
                                            const InnerProduct& ip,
                                            const ZValue& z,
                                            const Cone& sigma) {
  detail::require_pseudo_cubical(fan, ip, z, sigma);
  detail::WCache cache(fan, ip, z);
  const std::size_t k = sigma.dim();
  Rational total;
  for (const auto& f : labelings(sigma)) {
    RatMatrix t(k, k);
    Cone prefix;
    for (std::size_t j = 0; j < k; ++j) {
      prefix = prefix.with(f[j]);
      const WVector& w = cache.at(prefix);
      for (std::size_t i = 0; i < prefix.dim(); ++i) {
        t(j, detail::position(sigma, prefix.rays[i])) = w.coeffs[i];
      }
    }
    total += abs(det(t));
  }
  return det(detail::gram_unchecked(fan, ip, sigma)) * total;
}

/// Whether P_{sigma,*}(z) also satisfies v * u_rho <= z_rho for the rays
/// outside sigma, reported per maximal cone. Diagnostic only.
struct ContainmentReport {
  std::vector<std::pair<Cone, bool>> per_cone;
  bool all() const {
    return std::all_of(per_cone.begin(), per_cone.end(),
                       [](const auto& p) { return p.second; });
  }
};

inline ContainmentReport external_containment(const Fan& fan,
                                              const InnerProduct& ip,
                                              const ZValue& z) {
  detail::require_pseudo_cubical(fan, ip, z);
  ContainmentReport report;
  detail::WCache cache(fan, ip, z);
  for (const Cone& sigma : fan.max_cones()) {
    bool ok = true;
    for (const Cone& tau : all_subcones(sigma)) {
      const auto& w = cache.at(tau).point;
      for (RayIndex rho = 0; rho < fan.num_rays() && ok; ++rho) {
        if (sigma.contains(rho)) continue;
        if (ip(w, fan.generator(rho)) > z[rho]) ok = false;
      }
    }
    report.per_cone.emplace_back(sigma, ok);
  }
  return report;
}

/// For maximal cones a, b meeting in tau: the vertices of each polytope
/// lying in span(tau) must be exactly {w_pi : pi a face of tau}.
inline bool shared_face_vertices_agree(const Fan& fan, const InnerProduct& ip,
                                       const ZValue& z, const Cone& a,
                                       const Cone& b) {
  Cone tau;
  std::set_intersection(a.rays.begin(), a.rays.end(), b.rays.begin(),
                        b.rays.end(), std::back_inserter(tau.rays));
  detail::WCache cache(fan, ip, z);
  std::set<RatVector> expected;
  for (const Cone& pi : all_subcones(tau)) expected.insert(cache.at(pi).point);
  const auto span_gens = fan.generators_of(tau);
  const std::size_t base = rank(span_gens);
  auto in_span = [&](const RatVector& v) {
    auto g = span_gens;
    g.push_back(v);
    return rank(g) == base;
  };
  for (const Cone* sigma : {&a, &b}) {
    std::set<RatVector> got;
    for (const auto& v : polytope_vertices(fan, ip, z, *sigma)) {
      if (in_span(v)) got.insert(v);
    }
    if (got != expected) return false;
  }
  return true;
}

}  // namespace normcx
