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

#include "terra/labelling.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "terra/rng.h"

namespace terra {
namespace {

void validate(const LabellingConfig& config) {
  if (config.alpha < 1) throw std::invalid_argument("alpha must be >= 1");
  if (!(config.beta_percent > 0.0 && config.beta_percent <= 100.0)) {
    throw std::invalid_argument("beta_percent must be in (0, 100]");
  }
}

// Partial Fisher-Yates: `count` distinct elements of `pool`.
std::vector<Cell> draw(std::vector<Cell> pool, std::size_t count,
                       std::uint64_t seed) {
  Rng rng(seed);
  count = std::min(count, pool.size());
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(count);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace

std::size_t pool_size(double beta_percent, std::size_t n) {
  const double exact = beta_percent / 100.0 * static_cast<double>(n);
  const double size = std::ceil(exact - 1e-9 * std::max(1.0, exact));
  return std::min(n, static_cast<std::size_t>(std::max(0.0, size)));
}

Raster<int> region_impurity(const LabelRaster& labels, int radius) {
  if (radius < 1) throw std::invalid_argument("impurity radius must be >= 1");
  const int rows = labels.rows();
  const int cols = labels.cols();
  for (int label : labels.values()) {
    if (label < 0) throw std::invalid_argument("negative class id in label patch");
  }
  Raster<int> impurity(rows, cols, 0);
  std::vector<int> seen;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      seen.clear();
      for (int rr = std::max(0, r - radius); rr <= std::min(rows - 1, r + radius);
           ++rr) {
        for (int cc = std::max(0, c - radius);
             cc <= std::min(cols - 1, c + radius); ++cc) {
          const int label = labels(rr, cc);
          if (std::find(seen.begin(), seen.end(), label) == seen.end()) {
            seen.push_back(label);
          }
        }
      }
      impurity(r, c) = static_cast<int>(seen.size());
    }
  }
  return impurity;
}

std::vector<Cell> human_pool(const Raster<int>& impurity,
                             const LabellingConfig& config) {
  validate(config);
  const std::size_t n = impurity.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return impurity[a] > impurity[b];
  });
  const std::size_t size = std::max(pool_size(config.beta_percent, n),
                                    std::min(n, static_cast<std::size_t>(config.alpha)));
  std::vector<Cell> pool;
  pool.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    pool.push_back({static_cast<int>(order[i] / impurity.cols()),
                    static_cast<int>(order[i] % impurity.cols())});
  }
  return pool;
}

std::vector<Cell> select_human_pixels(const LabelRaster& predicted_labels,
                                      const LabellingConfig& config) {
  validate(config);
  if (static_cast<std::size_t>(config.alpha) > predicted_labels.size()) {
    throw std::invalid_argument("alpha " + std::to_string(config.alpha) +
                                " exceeds image size " +
                                std::to_string(predicted_labels.size()));
  }
  const Raster<int> impurity =
      region_impurity(predicted_labels, config.impurity_radius);
  return draw(human_pool(impurity, config), static_cast<std::size_t>(config.alpha),
              config.rng_seed);
}

std::vector<Cell> pseudo_pool(const Raster<double>& uncertainty,
                              const MaskRaster& valid,
                              const LabellingConfig& config) {
  validate(config);
  if (uncertainty.rows() != valid.rows() || uncertainty.cols() != valid.cols()) {
    throw std::invalid_argument("uncertainty and mask sizes differ");
  }
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < uncertainty.size(); ++i) {
    if (valid[i]) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return uncertainty[a] < uncertainty[b];
  });
  order.resize(pool_size(config.beta_percent, order.size()));
  std::vector<Cell> pool;
  pool.reserve(order.size());
  for (std::size_t i : order) {
    pool.push_back({static_cast<int>(i / uncertainty.cols()),
                    static_cast<int>(i % uncertainty.cols())});
  }
  return pool;
}

std::vector<Cell> select_pseudo_pixels(const Raster<double>& uncertainty,
                                       const MaskRaster& valid,
                                       const LabellingConfig& config) {
  return draw(pseudo_pool(uncertainty, valid, config),
              static_cast<std::size_t>(config.alpha), config.rng_seed);
}

}  // namespace terra
