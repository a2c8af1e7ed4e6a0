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

#include "terra/mapping.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace terra {

double logit(double p) { return std::log(p / (1.0 - p)); }

double sigmoid(double l) {
  if (l >= 0.0) return 1.0 / (1.0 + std::exp(-l));
  const double e = std::exp(l);
  return e / (1.0 + e);
}

MultiLayerMap::MultiLayerMap(GridGeometry geometry, int num_classes)
    : geometry_(geometry),
      num_classes_(num_classes),
      prior_log_odds_(logit(1.0 / num_classes)),
      semantic_(static_cast<std::size_t>(num_classes) * geometry.num_cells(), 0.0),
      uncertainty_mean_(geometry.rows, geometry.cols, 0.0),
      uncertainty_count_(geometry.rows, geometry.cols, 0),
      train_counts_(geometry.rows, geometry.cols, 0),
      explored_(geometry.rows, geometry.cols, 0) {
  if (num_classes < 2) throw std::invalid_argument("num_classes must be >= 2");
  if (geometry.rows < 1 || geometry.cols < 1) {
    throw std::invalid_argument("map geometry must be non-empty");
  }
}

MultiLayerMap MultiLayerMap::from_layers(GridGeometry geometry,
                                         std::vector<std::vector<double>> semantic,
                                         std::vector<double> uncertainty_mean,
                                         std::vector<std::int32_t> uncertainty_count,
                                         std::vector<std::int32_t> train_counts,
                                         std::vector<std::uint8_t> explored) {
  MultiLayerMap map(geometry, static_cast<int>(semantic.size()));
  const std::size_t n = geometry.num_cells();
  if (uncertainty_mean.size() != n || uncertainty_count.size() != n ||
      train_counts.size() != n || explored.size() != n) {
    throw std::invalid_argument("layer sizes differ from map geometry");
  }
  for (std::size_t k = 0; k < semantic.size(); ++k) {
    if (semantic[k].size() != n) throw std::invalid_argument("semantic layer size");
    std::copy(semantic[k].begin(), semantic[k].end(),
              map.semantic_.begin() + static_cast<std::ptrdiff_t>(k * n));
  }
  std::copy(uncertainty_mean.begin(), uncertainty_mean.end(),
            map.uncertainty_mean_.values().begin());
  std::copy(uncertainty_count.begin(), uncertainty_count.end(),
            map.uncertainty_count_.values().begin());
  std::copy(train_counts.begin(), train_counts.end(), map.train_counts_.values().begin());
  std::copy(explored.begin(), explored.end(), map.explored_.values().begin());
  return map;
}

void MultiLayerMap::check_cell(Cell c) const {
  if (!geometry_.contains(c)) {
    throw std::out_of_range("cell (" + std::to_string(c.row) + ", " +
                            std::to_string(c.col) + ") outside map");
  }
}

void MultiLayerMap::update_semantic(std::span<const Cell> cells,
                                    std::span<const double> probs) {
  const std::size_t K = static_cast<std::size_t>(num_classes_);
  if (probs.size() != cells.size() * K) {
    throw std::invalid_argument("probability patch misaligned with cells");
  }
  // Stored log-odds are relative to the uniform prior, so a fresh layer is 0.
  for (std::size_t i = 0; i < cells.size(); ++i) {
    check_cell(cells[i]);
    const std::size_t idx = geometry_.index(cells[i]);
    for (std::size_t k = 0; k < K; ++k) {
      const double p =
          std::clamp(probs[i * K + k], kProbabilityClamp, 1.0 - kProbabilityClamp);
      double& l = semantic_[k * geometry_.num_cells() + idx];
      l = std::clamp(l + logit(p) - prior_log_odds_, -kLogOddsClamp,
                     kLogOddsClamp);
    }
    explored_[idx] = 1;
  }
}

void MultiLayerMap::update_uncertainty(std::span<const Cell> cells,
                                       std::span<const double> uncertainty) {
  if (uncertainty.size() != cells.size()) {
    throw std::invalid_argument("uncertainty patch misaligned with cells");
  }
  for (double u : uncertainty) {
    if (!(u >= 0.0 && u <= 1.0)) {
      throw std::invalid_argument("uncertainty " + std::to_string(u) +
                                  " outside [0, 1]");
    }
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    check_cell(cells[i]);
    const std::size_t idx = geometry_.index(cells[i]);
    const int n = ++uncertainty_count_[idx];
    uncertainty_mean_[idx] += (uncertainty[i] - uncertainty_mean_[idx]) / n;
  }
}

void MultiLayerMap::increment_counts(std::span<const Cell> cells) {
  for (const Cell& c : cells) {
    check_cell(c);
    ++train_counts_[geometry_.index(c)];
  }
}

void MultiLayerMap::set_train_counts(CountRaster counts) {
  if (counts.rows() != geometry_.rows || counts.cols() != geometry_.cols) {
    throw std::invalid_argument("count raster size differs from map");
  }
  train_counts_ = std::move(counts);
}

MlSemantics ml_semantics(const MultiLayerMap& map) {
  const GridGeometry& g = map.geometry();
  MlSemantics out{LabelRaster(g.rows, g.cols, -1), Raster<double>(g.rows, g.cols, 0.0),
                  MaskRaster(g.rows, g.cols, 0)};
  for (int r = 0; r < g.rows; ++r) {
    for (int c = 0; c < g.cols; ++c) {
      const Cell cell{r, c};
      if (!map.explored(cell)) continue;
      int best = 0;
      double best_l = map.log_odds(0, cell);
      for (int k = 1; k < map.num_classes(); ++k) {
        const double l = map.log_odds(k, cell);
        if (l > best_l) {
          best_l = l;
          best = k;
        }
      }
      // Layers hold log-odds relative to the prior; convert back before
      // reporting an absolute probability.
      out.labels(r, c) = best;
      out.probability(r, c) = sigmoid(best_l + logit(1.0 / map.num_classes()));
      out.valid(r, c) = 1;
    }
  }
  return out;
}

PseudoPatch render_pseudo_patch(const MultiLayerMap& map, Pose pose,
                                int side_cells) {
  const Footprint fp = footprint_at(map.geometry(), pose, side_cells);
  PseudoPatch patch{fp, LabelRaster(side_cells, side_cells, -1),
                    Raster<double>(side_cells, side_cells, 0.0),
                    MaskRaster(side_cells, side_cells, 0)};
  for (int i = 0; i < side_cells; ++i) {
    for (int j = 0; j < side_cells; ++j) {
      const Cell cell = fp.cell_at(i, j);
      if (!map.explored(cell)) continue;
      int best = 0;
      double best_l = map.log_odds(0, cell);
      for (int k = 1; k < map.num_classes(); ++k) {
        if (map.log_odds(k, cell) > best_l) {
          best_l = map.log_odds(k, cell);
          best = k;
        }
      }
      patch.labels(i, j) = best;
      patch.uncertainty(i, j) = map.uncertainty(cell);
      patch.valid(i, j) = 1;
    }
  }
  return patch;
}

void integrate_observation(MultiLayerMap& map, const RawImage& image,
                           const Prediction& prediction) {
  const std::vector<Cell> cells = footprint_cells(image.footprint());
  map.update_semantic(cells, prediction.probs);
  map.update_uncertainty(cells, prediction.uncertainty);
}

MultiLayerMap recompute(std::span<const StoredObservation> observations,
                        const SurrogateModel& model, const GridGeometry& geometry,
                        int num_classes, const CountRaster& train_counts) {
  MultiLayerMap map(geometry, num_classes);
  if (!train_counts.empty()) map.set_train_counts(train_counts);
  for (const auto& obs : observations) {
    integrate_observation(map, *obs.image, model.predict(obs.image->feature_patch));
  }
  return map;
}

}  // namespace terra
