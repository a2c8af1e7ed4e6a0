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

#ifndef TERRA_MAPPING_H_
#define TERRA_MAPPING_H_

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "terra/grid.h"
#include "terra/learner.h"
#include "terra/world.h"

namespace terra {

inline constexpr double kProbabilityClamp = 1e-4;
inline constexpr double kLogOddsClamp = 50.0;

// Probabilistic multi-layer terrain map:
//  - one independent log-odds occupancy layer per class (semantics),
//  - running mean of observed model uncertainty per cell,
//  - number of human-labelled footprints covering each cell,
//  - explored mask (cell received at least one semantic update).
double logit(double p);
double sigmoid(double l);

class MultiLayerMap {
 public:
  MultiLayerMap() = default;
  MultiLayerMap(GridGeometry geometry, int num_classes);

  // Reassembles a map from raw layers (e.g. a saved snapshot).
  static MultiLayerMap from_layers(GridGeometry geometry,
                                   std::vector<std::vector<double>> semantic,
                                   std::vector<double> uncertainty_mean,
                                   std::vector<std::int32_t> uncertainty_count,
                                   std::vector<std::int32_t> train_counts,
                                   std::vector<std::uint8_t> explored);

  const GridGeometry& geometry() const { return geometry_; }
  int num_classes() const { return num_classes_; }

  double log_odds(int k, Cell c) const {
    return semantic_[layer_offset(k) + geometry_.index(c)];
  }
  std::span<const double> layer(int k) const {
    return {semantic_.data() + layer_offset(k), geometry_.num_cells()};
  }
  // Posterior occupancy probability of class k at c.
  double probability(int k, Cell c) const {
    return sigmoid(log_odds(k, c) + prior_log_odds_);
  }
  double uncertainty(Cell c) const { return uncertainty_mean_[geometry_.index(c)]; }
  int uncertainty_count(Cell c) const {
    return uncertainty_count_[geometry_.index(c)];
  }
  int train_count(Cell c) const { return train_counts_[geometry_.index(c)]; }
  bool explored(Cell c) const { return explored_[geometry_.index(c)] != 0; }

  const Raster<double>& uncertainty_layer() const { return uncertainty_mean_; }
  const CountRaster& uncertainty_counts() const { return uncertainty_count_; }
  const CountRaster& train_counts() const { return train_counts_; }
  const MaskRaster& explored_mask() const { return explored_; }

  // Recursive per-class occupancy update. `probs` holds one K-simplex per cell,
  // aligned with `cells`. Probabilities are clamped to
  // [kProbabilityClamp, 1 - kProbabilityClamp], log-odds to +-kLogOddsClamp.
  void update_semantic(std::span<const Cell> cells, std::span<const double> probs);

  // Running-mean update of the uncertainty layer; values must lie in [0, 1].
  void update_uncertainty(std::span<const Cell> cells,
                          std::span<const double> uncertainty);

  // +1 on every cell of a human-labelled footprint.
  void increment_counts(std::span<const Cell> cells);

  // Replaces the count layer (used when recomputing after retraining).
  void set_train_counts(CountRaster counts);

  friend bool operator==(const MultiLayerMap&, const MultiLayerMap&) = default;

 private:
  std::size_t layer_offset(int k) const {
    return static_cast<std::size_t>(k) * geometry_.num_cells();
  }
  void check_cell(Cell c) const;

  GridGeometry geometry_;
  int num_classes_ = 0;
  double prior_log_odds_ = 0.0;
  std::vector<double> semantic_;
  Raster<double> uncertainty_mean_;
  CountRaster uncertainty_count_;
  CountRaster train_counts_;
  MaskRaster explored_;
};

// Maximum-likelihood class per cell; lowest class id wins ties.
struct MlSemantics {
  LabelRaster labels;         // -1 on unexplored cells
  Raster<double> probability; // sigmoid of the winning layer, 0 if unexplored
  MaskRaster valid;
};
MlSemantics ml_semantics(const MultiLayerMap& map);

// Maximum-likelihood labels and mapped uncertainty inside the footprint of
// `pose`, with validity following the explored mask.
struct PseudoPatch {
  Footprint footprint;
  LabelRaster labels;
  Raster<double> uncertainty;
  MaskRaster valid;
};
PseudoPatch render_pseudo_patch(const MultiLayerMap& map, Pose pose,
                                int side_cells);

struct StoredObservation {
  Pose pose;
  std::shared_ptr<const RawImage> image;
  int mission_index = 0;

  Footprint footprint() const { return image->footprint(); }
};

// Predict on one stored image and fuse it into the map.
void integrate_observation(MultiLayerMap& map, const RawImage& image,
                           const Prediction& prediction);

// Fresh map rebuilt by replaying `observations` in order through `model`;
// the count layer is taken from `train_counts` (empty raster = all zeros).
MultiLayerMap recompute(std::span<const StoredObservation> observations,
                        const SurrogateModel& model, const GridGeometry& geometry,
                        int num_classes, const CountRaster& train_counts = {});

}  // namespace terra

#endif  // TERRA_MAPPING_H_
