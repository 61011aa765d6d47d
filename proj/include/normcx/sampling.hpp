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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>

#include "normcx/error.hpp"
#include "normcx/fan.hpp"
#include "normcx/linalg.hpp"
#include "normcx/montecarlo.hpp"
#include "normcx/normal.hpp"
#include "normcx/rational.hpp"

namespace normcx {

/// A^T A + s I with A uniform over {-1, 0, 1}^{n x n}: positive definite for
/// every s > 0.
inline InnerProduct random_inner_product(std::size_t n, SplitMix64& rng,
                                         const Rational& s = 1) {
  RatMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      a(i, j) = static_cast<long>(rng.below(3)) - 1;
    }
  }
  RatMatrix m = a.transpose() * a;
  for (std::size_t i = 0; i < n; ++i) m(i, i) += s;
  return InnerProduct(std::move(m));
}

/// Random inner product for which z stays cubical. Each failed attempt
/// doubles s and resamples A; large s approaches the dot product, so this
/// terminates whenever z is cubical for the dot product.
inline InnerProduct random_cubical_inner_product(const Fan& fan,
                                                 const ZValue& z,
                                                 SplitMix64& rng,
                                                 std::size_t max_attempts = 32) {
  Rational s = 1;
  for (std::size_t i = 0; i < max_attempts; ++i) {
    InnerProduct ip = random_inner_product(fan.ambient_dim(), rng, s);
    if (is_cubical(fan, ip, z).verdict == Cubicality::kCubical) return ip;
    s *= 2;
  }
  throw Error(ErrorKind::kCertificationFailed,
              "no random inner product keeps z cubical");
}

/// Random rational in [lo, hi] with denominator `den`.
inline Rational random_rational(SplitMix64& rng, long lo, long hi,
                                long den = 16) {
  const auto span = static_cast<std::uint64_t>((hi - lo) * den + 1);
  return Rational(BigInt(lo * den + static_cast<long>(rng.below(span))),
                  BigInt(den));
}

/// Rejection sample from the cubical cone near `base`: base scaled by a
/// random factor plus a random perturbation, kept when cubical. The
/// perturbation halves every 8 rejections, so a cubical base always yields
/// a sample.
inline std::optional<ZValue> sample_cubical_z(const CubicalCone& cone,
                                              const ZValue& base,
                                              SplitMix64& rng,
                                              std::size_t max_tries = 200) {
  Rational amplitude(1, 8);
  for (std::size_t t = 0; t < max_tries; ++t) {
    if (t > 0 && t % 8 == 0) amplitude /= 2;
    const Rational scale = random_rational(rng, 1, 4, 8);
    RatVector v = base.values();
    for (auto& x : v) {
      x = scale * (x + random_rational(rng, -1, 1, 64) * amplitude);
    }
    ZValue z(std::move(v));
    if (cone.classify(z).verdict == Cubicality::kCubical) return z;
  }
  return std::nullopt;
}

/// Moves from cubical z along d to the first point of the closed cone's
/// boundary: the result is pseudo-cubical with at least one tight form.
/// Returns nothing when d never leaves the cone.
inline std::optional<ZValue> shoot_to_boundary(const CubicalCone& cone,
                                               const ZValue& z,
                                               const RatVector& d) {
  std::optional<Rational> best;
  for (const auto& ineq : cone.inequalities) {
    const Rational rate = dot(ineq.form, d);
    if (rate.sign() >= 0) continue;
    const Rational t = ineq.evaluate(z) / (-rate);
    if (!best || t < *best) best = t;
  }
  if (!best) return std::nullopt;
  return ZValue(z.values() + *best * d);
}

}  // namespace normcx
