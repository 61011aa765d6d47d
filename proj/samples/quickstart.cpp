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

// Builds the Bergman fan of a small matroid, finds a cubical value and
// checks that the Chow degree equals the normal complex volume.

#include <iostream>

#include "normcx/normcx.hpp"

int main() {
  using namespace normcx;

  // The first quadrant under two inner products.
  const Fan quadrant(2, {{"1", {1, 0}}, {"2", {0, 1}}}, {{"1", "2"}});
  const ZValue z({2, 2});
  const Cone sigma = quadrant.max_cones().front();
  std::cout << "dot volume:  "
            << cone_volume(quadrant, InnerProduct::dot(2), z, sigma) << "\n";
  std::cout << "star volume: "
            << cone_volume(quadrant, InnerProduct(RatMatrix{{4, 1}, {1, 2}}), z, sigma)
            << "\n";

  // Rank 3 matroid on {0,1,2,3} with the single dependent line {1,2,3}.
  const Matroid m = Matroid::from_flat_lists(
      {"0", "1", "2", "3"},
      {{}, {"0"}, {"1"}, {"2"}, {"3"}, {"0", "1"}, {"0", "2"}, {"0", "3"},
       {"1", "2", "3"}, {"0", "1", "2", "3"}});
  const auto cert = construct_cubical_z(m, maximal_building_set(m));
  const Fan& fan = cert.bergman.fan;
  const auto weights = WeightFunction::constant(fan);
  const auto report =
      verify_main_theorem(fan, weights, InnerProduct::dot(3), cert.z);
  std::cout << "Chow degree:   " << report.chow_degree << "\n"
            << "normal volume: " << report.normal_volume << "\n"
            << "equal:         " << std::boolalpha << report.exact_match()
            << "\n";
  std::cout << "volume polynomial: "
            << volume_polynomial_symbolic(fan, weights, InnerProduct::dot(3)).str()
            << "\n";
  return report.exact_match() ? 0 : 1;
}
