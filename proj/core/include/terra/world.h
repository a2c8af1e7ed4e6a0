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

#ifndef TERRA_WORLD_H_
#define TERRA_WORLD_H_

#include <cstdint>
#include <vector>

#include "terra/grid.h"

namespace terra {

// Parameters of the synthetic terrain generator.
struct WorldParams {
  int width_cells = 128;
  int height_cells = 128;
  int num_classes = 4;
  int blob_scale = 48;  // mean spacing of class seeds, in cells
  int feature_dim = 8;
  double class_separation = 3.0;  // pairwise distance between class means
  double noise_sigma = 1.0;       // per-dimension feature noise
  double cell_size = 1.0;         // meters per cell

  friend bool operator==(const WorldParams&, const WorldParams&) = default;
};

// Ground-truth terrain: a class raster plus per-cell feature vectors.
// Immutable once constructed.
class SemanticGridWorld {
 public:
  // Validates the invariants: labels in [0, K), matching raster sizes,
  // cell_size > 0, K >= 2 and feature dim >= 1.
  SemanticGridWorld(double cell_size, int num_classes, LabelRaster labels,
                    FeatureRaster features,
                    std::vector<std::vector<double>> class_means);

  const GridGeometry& geometry() const { return geometry_; }
  int width_cells() const { return geometry_.cols; }
  int height_cells() const { return geometry_.rows; }
  double cell_size() const { return geometry_.cell_size; }
  int num_classes() const { return num_classes_; }
  int feature_dim() const { return features_.dim(); }
  const LabelRaster& labels() const { return labels_; }
  const FeatureRaster& features() const { return features_; }
  const std::vector<std::vector<double>>& class_means() const {
    return class_means_;
  }

 private:
  GridGeometry geometry_;
  int num_classes_;
  LabelRaster labels_;
  FeatureRaster features_;
  std::vector<std::vector<double>> class_means_;
};

// Captured image: ground truth and features of the footprint region.
struct RawImage {
  Cell origin_cell;
  int side_cells = 0;
  LabelRaster gt_patch;
  FeatureRaster feature_patch;

  Footprint footprint() const { return {origin_cell, side_cells}; }
};

// Voronoi-blob terrain: roughly (W*H)/blob_scale^2 seeded class seeds, each
// cell takes the class of its nearest seed. Features are the class mean plus
// isotropic Gaussian noise.
SemanticGridWorld generate_world(std::uint64_t seed, const WorldParams& params);

SemanticGridWorld generate_world(std::uint64_t seed, int width_cells,
                                 int height_cells, int num_classes,
                                 int blob_scale);

// Builds a world around an existing label raster, synthesizing features with
// the class-mean/noise model of `params` (its size and class fields are
// ignored).
SemanticGridWorld world_from_labels(std::uint64_t seed, LabelRaster labels,
                                    int num_classes, const WorldParams& params);

// Class means at pairwise distance `separation`: scaled orthogonal axes when
// dim >= K, otherwise seeded random directions rescaled so the closest pair is
// exactly `separation` apart.
std::vector<std::vector<double>> make_class_means(std::uint64_t seed,
                                                  int num_classes, int dim,
                                                  double separation);

// Valid pose region: x in [floor(f/2), W - f/2] * cell_size, y likewise.
// Footprints of poses inside it never leave the world.
Pose clamp_pose(const GridGeometry& geometry, int side_cells, Pose pose);

// Footprint of side `side_cells` whose center cell contains the clamped pose.
// Origin is center - side/2 (integer floor). Throws std::invalid_argument if
// the footprint cannot fit into the world.
Footprint footprint_at(const GridGeometry& geometry, Pose pose, int side_cells);

// Cells inside the footprint, row-major.
std::vector<Cell> visible_cells(Pose pose, int side_cells,
                                const GridGeometry& geometry);
std::vector<Cell> footprint_cells(const Footprint& footprint);

RawImage capture(const SemanticGridWorld& world, Pose pose, int side_cells);

// World-frame pose at the center of a cell.
Pose cell_center(const GridGeometry& geometry, Cell c);

}  // namespace terra

#endif  // TERRA_WORLD_H_
