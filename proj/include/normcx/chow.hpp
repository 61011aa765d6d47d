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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "normcx/error.hpp"
#include "normcx/fan.hpp"
#include "normcx/linalg.hpp"
#include "normcx/montecarlo.hpp"
#include "normcx/multipoly.hpp"
#include "normcx/normal.hpp"
#include "normcx/rational.hpp"

namespace normcx {

/// D(z_1) ... D(z_k) written as sum_sigma coeff(sigma) X_sigma over the
/// k-cones. Cones with zero coefficient are not stored.
struct SquareFreeExpansion {
  std::size_t grade = 0;
  std::map<Cone, Rational> coeffs;

  Rational coeff(const Cone& c) const {
    auto it = coeffs.find(c);
    return it == coeffs.end() ? Rational(0) : it->second;
  }
};

/// Expands the product of the divisors D(z_j) into square-free monomials;
/// z_j enters at step j of every labeling.
inline SquareFreeExpansion squarefree_expand(const Fan& fan,
                                             const InnerProduct& ip,
                                             const std::vector<ZValue>& zs) {
  require_compatible(fan, ip);
  for (const auto& z : zs) require_compatible(fan, z);
  const std::size_t k = zs.size();
  if (k > fan.dim()) {
    throw Error(ErrorKind::kGradeTooHigh,
                "product of " + std::to_string(k) +
                    " divisors exceeds fan dimension " +
                    std::to_string(fan.dim()));
  }
  SquareFreeExpansion out{k, {}};
  std::vector<const ZValue*> slots;
  for (const auto& z : zs) slots.push_back(&z);
  for (const Cone& sigma : fan.faces(k)) {
    Rational c = detail::squarefree_coefficient(fan, ip, sigma, slots);
    if (!c.is_zero()) out.coeffs.emplace(sigma, std::move(c));
  }
  return out;
}

inline void require_balanced(const Fan& fan, const WeightFunction& weights) {
  const auto report = check_balancing(fan, weights);
  if (!report.balanced()) {
    throw Error(ErrorKind::kNotBalanced,
                "fan is not balanced at {" +
                    fan.key(report.failures.front().tau) + "}");
  }
}

/// deg(X_sigma) = weight(sigma) on top-dimensional cones, extended linearly.
inline Rational degree(const Fan& fan, const WeightFunction& weights,
                       const SquareFreeExpansion& exp) {
  if (exp.grade != fan.dim()) {
    throw Error(ErrorKind::kWrongGrade,
                "degree needs grade " + std::to_string(fan.dim()) + ", got " +
                    std::to_string(exp.grade));
  }
  require_balanced(fan, weights);
  Rational total;
  for (const auto& [sigma, c] : exp.coeffs) total += weights.at(fan, sigma) * c;
  return total;
}

/// deg(D(z)^d) through the Gram determinant formula under `ip`.
inline Rational volume_polynomial_eval(const Fan& fan,
                                       const WeightFunction& weights,
                                       const InnerProduct& ip,
                                       const ZValue& z) {
  require_compatible(fan, ip);
  require_compatible(fan, z);
  require_balanced(fan, weights);
  Rational total;
  for (const Cone& sigma : fan.max_cones()) {
    std::vector<const ZValue*> zs(sigma.dim(), &z);
    total += weights.at(fan, sigma) *
             detail::squarefree_coefficient(fan, ip, sigma, zs);
  }
  return total;
}

namespace detail {

/// Labeling sum for one cone with every Cramer factor kept as a linear
/// form in the ray variables.
inline MultiPoly symbolic_cone_sum(const Fan& fan, const InnerProduct& ip,
                                   const Cone& sigma) {
  std::map<Cone, MultiPoly> memo;
  std::function<MultiPoly(const Cone&)> rec = [&](const Cone& pi) {
    if (pi.dim() == 0) return MultiPoly::constant(1);
    auto it = memo.find(pi);
    if (it != memo.end()) return it->second;
    const RatMatrix g = gram_unchecked(fan, ip, pi);
    const Rational d = det(g);
    MultiPoly s;
    for (std::size_t p = 0; p < pi.dim(); ++p) {
      const RatVector cof = column_cofactors(g, p);
      MultiPoly form;
      for (std::size_t mu = 0; mu < pi.dim(); ++mu) {
        form.add_term({fan.ray_id(pi.rays[mu])}, cof[mu] / d);
      }
      if (form.is_zero()) continue;
      s += rec(pi.without(pi.rays[p])) * form;
    }
    memo.emplace(pi, s);
    return s;
  };
  return det(gram_unchecked(fan, ip, sigma)) * rec(sigma);
}

}  // namespace detail

/// The volume polynomial as an explicit polynomial in the ray variables.
inline MultiPoly volume_polynomial_symbolic(const Fan& fan,
                                            const WeightFunction& weights,
                                            const InnerProduct& ip) {
  require_compatible(fan, ip);
  require_balanced(fan, weights);
  MultiPoly total;
  for (const Cone& sigma : fan.max_cones()) {
    total += weights.at(fan, sigma) * detail::symbolic_cone_sum(fan, ip, sigma);
  }
  return total;
}

/// The divisor of a linear relation: z_rho = <v, u_rho>, with v a
/// coordinate vector of the dual space.
inline ZValue linear_relation_divisor(const Fan& fan, const RatVector& v) {
  if (v.size() != fan.ambient_dim()) {
    throw Error(ErrorKind::kBadDimension, "relation vector has wrong length");
  }
  RatVector z(fan.num_rays());
  for (RayIndex r = 0; r < fan.num_rays(); ++r) z[r] = dot(v, fan.generator(r));
  return ZValue(std::move(z));
}

struct VerificationReport {
  /// deg(D(z)^d) from the square-free expansion under the dot product.
  Rational chow_degree;
  /// The same degree through the Gram determinant formula under `ip`.
  Rational volume_polynomial;
  /// Weighted normal complex volume under `ip`.
  Rational normal_volume;
  /// Weighted sum of the explicit-simplex volumes under `ip`.
  Rational triangulation_volume;
  std::optional<MonteCarloEstimate> montecarlo;

  bool exact_match() const {
    return chow_degree == volume_polynomial && chow_degree == normal_volume &&
           chow_degree == triangulation_volume;
  }
  bool montecarlo_agrees() const {
    return !montecarlo || montecarlo->agrees_with(normal_volume);
  }
  bool ok() const { return exact_match() && montecarlo_agrees(); }
};

struct MonteCarloOptions {
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

/// Computes deg(D(z)^d) on the Chow side and the normal complex volume on
/// the polytope side independently and compares them exactly.
inline VerificationReport verify_main_theorem(
    const Fan& fan, const WeightFunction& weights, const InnerProduct& ip,
    const ZValue& z, std::optional<MonteCarloOptions> mc = std::nullopt) {
  require_compatible(fan, ip);
  require_compatible(fan, z);
  require_balanced(fan, weights);
  detail::require_pseudo_cubical(fan, ip, z);

  VerificationReport report;
  const InnerProduct reference = InnerProduct::dot(fan.ambient_dim());
  report.chow_degree = degree(
      fan, weights,
      squarefree_expand(fan, reference, std::vector<ZValue>(fan.dim(), z)));
  report.volume_polynomial = volume_polynomial_eval(fan, weights, ip, z);
  report.normal_volume = complex_volume(fan, weights, ip, z);
  for (const Cone& sigma : fan.max_cones()) {
    report.triangulation_volume +=
        weights.at(fan, sigma) * volume_oracle_triangulation(fan, ip, z, sigma);
  }
  if (mc && mc->samples > 0) {
    MonteCarloEstimate total;
    double var = 0;
    std::uint64_t seed = mc->seed;
    for (const Cone& sigma : fan.max_cones()) {
      const auto e =
          volume_oracle_montecarlo(fan, ip, z, sigma, mc->samples, seed++);
      const double w = weights.at(fan, sigma).to_double();
      total.estimate += w * e.estimate;
      var += w * w * e.std_error * e.std_error;
      total.samples += e.samples;
      total.hits += e.hits;
    }
    total.std_error = std::sqrt(var);
    report.montecarlo = total;
  }
  return report;
}

}  // namespace normcx
