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
#include <limits>
#include <vector>

#include "normcx/fan.hpp"
#include "normcx/linalg.hpp"
#include "normcx/normal.hpp"
#include "normcx/rational.hpp"

namespace normcx {

/// SplitMix64 (Steele, Lea, Flood). Small, fast and fully reproducible.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return next() % n; }

 private:
  std::uint64_t state_;
};

struct MonteCarloEstimate {
  double estimate = 0;
  double std_error = 0;
  std::size_t samples = 0;
  std::size_t hits = 0;

  /// |estimate - exact| within k standard errors, plus a relative float
  /// epsilon so that exact zero-variance cases compare equal.
  bool agrees_with(const Rational& exact, double k = 4) const {
    const double x = exact.to_double();
    return std::abs(estimate - x) <= k * std_error + 1e-9 * std::abs(x);
  }
};

namespace detail {

/// Float factor R (upper triangular) with G = R^T R, from the exact
/// LDL^T decomposition of G.
inline std::vector<std::vector<double>> cholesky_upper(const RatMatrix& g) {
  const std::size_t k = g.rows();
  RatMatrix l = RatMatrix::identity(k);
  RatVector d(k);
  for (std::size_t j = 0; j < k; ++j) {
    Rational s = g(j, j);
    for (std::size_t p = 0; p < j; ++p) s -= l(j, p) * l(j, p) * d[p];
    d[j] = s;
    for (std::size_t i = j + 1; i < k; ++i) {
      Rational t = g(i, j);
      for (std::size_t p = 0; p < j; ++p) t -= l(i, p) * l(j, p) * d[p];
      l(i, j) = t / d[j];
    }
  }
  std::vector<std::vector<double>> r(k, std::vector<double>(k, 0.0));
  for (std::size_t j = 0; j < k; ++j) {
    const double root = std::sqrt(d[j].to_double());
    for (std::size_t i = j; i < k; ++i) r[j][i] = l(i, j).to_double() * root;
  }
  return r;
}

}  // namespace detail

/// Rejection-sampling estimate of the normalized volume of P_{sigma,*}(z).
/// Points are drawn from the bounding box of the polytope in orthonormal
/// coordinates y = R c of span(sigma), where c are generator coefficients.
inline MonteCarloEstimate volume_oracle_montecarlo(const Fan& fan,
                                                   const InnerProduct& ip,
                                                   const ZValue& z,
                                                   const Cone& sigma,
                                                   std::size_t samples,
                                                   std::uint64_t seed) {
  detail::require_pseudo_cubical(fan, ip, z, sigma);
  const std::size_t k = sigma.dim();
  MonteCarloEstimate out;
  out.samples = samples;
  if (k == 0) {
    out.estimate = 1;
    return out;
  }
  const RatMatrix g = detail::gram_unchecked(fan, ip, sigma);
  const auto r = detail::cholesky_upper(g);

  // Vertices in y-coordinates give the bounding box.
  std::vector<double> lo(k, std::numeric_limits<double>::infinity());
  std::vector<double> hi(k, -std::numeric_limits<double>::infinity());
  detail::WCache cache(fan, ip, z);
  for (const Cone& tau : all_subcones(sigma)) {
    const WVector& w = cache.at(tau);
    std::vector<double> c(k, 0.0);
    for (std::size_t i = 0; i < tau.dim(); ++i) {
      c[detail::position(sigma, tau.rays[i])] = w.coeffs[i].to_double();
    }
    for (std::size_t a = 0; a < k; ++a) {
      double y = 0;
      for (std::size_t b = a; b < k; ++b) y += r[a][b] * c[b];
      lo[a] = std::min(lo[a], y);
      hi[a] = std::max(hi[a], y);
    }
  }
  double box = 1;
  for (std::size_t a = 0; a < k; ++a) box *= hi[a] - lo[a];
  if (box <= 0 || samples == 0) return out;

  std::vector<std::vector<double>> gf(k, std::vector<double>(k));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) gf[a][b] = g(a, b).to_double();
  }
  std::vector<double> zf(k);
  for (std::size_t a = 0; a < k; ++a) zf[a] = z[sigma.rays[a]].to_double();

  SplitMix64 rng(seed);
  std::vector<double> y(k), c(k);
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t a = 0; a < k; ++a) {
      y[a] = lo[a] + (hi[a] - lo[a]) * rng.uniform();
    }
    bool inside = true;
    for (std::size_t a = k; a-- > 0;) {
      double t = y[a];
      for (std::size_t b = a + 1; b < k; ++b) t -= r[a][b] * c[b];
      c[a] = t / r[a][a];
      if (c[a] < 0) {
        inside = false;
        break;
      }
    }
    for (std::size_t a = 0; a < k && inside; ++a) {
      double p = 0;
      for (std::size_t b = 0; b < k; ++b) p += gf[a][b] * c[b];
      if (p > zf[a]) inside = false;
    }
    if (inside) ++out.hits;
  }

  double factorial = 1;
  for (std::size_t i = 2; i <= k; ++i) factorial *= static_cast<double>(i);
  const double scale = factorial * std::sqrt(det(g).to_double()) * box;
  const double p = static_cast<double>(out.hits) / static_cast<double>(samples);
  out.estimate = scale * p;
  // Laplace-smoothed rate for the error: the plug-in p(1 - p) is zero
  // whenever every sample lands on one side.
  const double ps = (static_cast<double>(out.hits) + 1) / (static_cast<double>(samples) + 2);
  out.std_error =
      scale * std::sqrt(ps * (1 - ps) / static_cast<double>(samples));
  return out;
}

}  // namespace normcx
