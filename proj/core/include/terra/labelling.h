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

#ifndef TERRA_LABELLING_H_
#define TERRA_LABELLING_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "terra/grid.h"

namespace terra {

struct LabellingConfig {
  int alpha = 4;             // pixels drawn per image
  double beta_percent = 5.0; // size of the candidate pool, percent of pixels
  int impurity_radius = 3;
  std::uint64_t rng_seed = 0;

  friend bool operator==(const LabellingConfig&, const LabellingConfig&) = default;
};

// ceil(beta/100 * n), robust to round-off in the product (5% of 400 is 20).
std::size_t pool_size(double beta_percent, std::size_t n);

// Number of distinct classes in the (2r+1)^2 window around each pixel, window
// clipped at the patch border. Throws std::invalid_argument for r < 1 or
// negative labels.
Raster<int> region_impurity(const LabelRaster& labels, int radius);

// Candidate pool for human queries: the pool_size(beta, f*f) pixels of highest
// impurity, ties by row-major index, widened in rank order to at least alpha.
// Returned in rank order.
std::vector<Cell> human_pool(const Raster<int>& impurity, const LabellingConfig& config);

// alpha pixels drawn uniformly without replacement from human_pool, using
// config.rng_seed. Sorted row-major. Throws std::invalid_argument when
// alpha exceeds the number of pixels.
std::vector<Cell> select_human_pixels(const LabelRaster& predicted_labels,
                                      const LabellingConfig& config);

// Candidate pool for pseudo labels: the pool_size(beta, n_valid) valid pixels
// of lowest uncertainty, ties by row-major index. Returned in rank order.
std::vector<Cell> pseudo_pool(const Raster<double>& uncertainty,
                              const MaskRaster& valid,
                              const LabellingConfig& config);

// min(alpha, |pool|) pixels drawn without replacement from pseudo_pool.
// Sorted row-major; empty when nothing is valid.
std::vector<Cell> select_pseudo_pixels(const Raster<double>& uncertainty,
                                       const MaskRaster& valid,
                                       const LabellingConfig& config);

}  // namespace terra

#endif  // TERRA_LABELLING_H_
