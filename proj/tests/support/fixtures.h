/* Copyright 2026 The terra-active Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef TERRA_TESTS_SUPPORT_FIXTURES_H_
#define TERRA_TESTS_SUPPORT_FIXTURES_H_

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "terra/grid.h"
#include "terra/mapping.h"

namespace terra::testing {

// Random map snapshot: about `explored_fraction` of the cells explored with
// uncertainty in [0, 1], log-odds in [-3, 3] and train counts in [0, 3].
inline MultiLayerMap random_snapshot(std::uint64_t seed, int rows, int cols, int k,
                                     double explored_fraction = 0.5) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> count(0, 3);
  const std::size_t n = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  std::vector<std::vector<double>> semantic(k, std::vector<double>(n, 0.0));
  std::vector<double> u(n, 0.0);
  std::vector<std::int32_t> u_count(n, 0), t_count(n, 0);
  std::vector<std::uint8_t> explored(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    t_count[i] = count(rng);
    if (unit(rng) < explored_fraction) {
      explored[i] = 1;
      u[i] = unit(rng);
      u_count[i] = 1 + count(rng);
      for (int c = 0; c < k; ++c) semantic[c][i] = 6.0 * unit(rng) - 3.0;
    }
  }
  return MultiLayerMap::from_layers({rows, cols, 1.0}, std::move(semantic), std::move(u),
                                    std::move(u_count), std::move(t_count),
                                    std::move(explored));
}

// Raster filled row-major from a flat initializer.
template <typename T>
Raster<T> raster_from(int rows, int cols, const std::vector<T>& values) {
  Raster<T> r(rows, cols);
  for (std::size_t i = 0; i < values.size(); ++i) r[i] = values[i];
  return r;
}

}  // namespace terra::testing

#endif  // TERRA_TESTS_SUPPORT_FIXTURES_H_
