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

#include "terra/world.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

#include "terra/rng.h"

namespace terra {

SemanticGridWorld::SemanticGridWorld(
    double cell_size, int num_classes, LabelRaster labels,
    FeatureRaster features, std::vector<std::vector<double>> class_means)
    : geometry_{labels.rows(), labels.cols(), cell_size},
      num_classes_(num_classes),
      labels_(std::move(labels)),
      features_(std::move(features)),
      class_means_(std::move(class_means)) {
  if (!(cell_size > 0.0)) throw std::invalid_argument("cell_size must be > 0");
  if (num_classes_ < 2) throw std::invalid_argument("num_classes must be >= 2");
  if (features_.dim() < 1) throw std::invalid_argument("feature dim must be >= 1");
  if (features_.rows() != labels_.rows() || features_.cols() != labels_.cols()) {
    throw std::invalid_argument("feature raster size differs from label raster");
  }
  for (int label : labels_.values()) {
    if (label < 0 || label >= num_classes_) {
      throw std::invalid_argument("label " + std::to_string(label) +
                                  " outside [0, " + std::to_string(num_classes_) +
                                  ")");
    }
  }
}

std::vector<std::vector<double>> make_class_means(std::uint64_t seed,
                                                  int num_classes, int dim,
                                                  double separation) {
  std::vector<std::vector<double>> means(num_classes,
                                         std::vector<double>(dim, 0.0));
  if (dim >= num_classes) {
    const double scale = separation / std::sqrt(2.0);
    for (int k = 0; k < num_classes; ++k) means[k][k] = scale;
    return means;
  }
  Rng rng(derive_seed(seed, "world.class_means"));
  std::normal_distribution<double> normal;
  for (auto& m : means) {
    double norm = 0.0;
    do {
      norm = 0.0;
      for (double& v : m) {
        v = normal(rng);
        norm += v * v;
      }
    } while (norm < 1e-12);
    for (double& v : m) v /= std::sqrt(norm);
  }
  double closest = std::numeric_limits<double>::infinity();
  for (int a = 0; a < num_classes; ++a) {
    for (int b = a + 1; b < num_classes; ++b) {
      double d2 = 0.0;
      for (int j = 0; j < dim; ++j) {
        d2 += (means[a][j] - means[b][j]) * (means[a][j] - means[b][j]);
      }
      closest = std::min(closest, std::sqrt(d2));
    }
  }
  if (closest < 1e-9) {
    throw std::invalid_argument("cannot place distinct class means in dim " +
                                std::to_string(dim));
  }
  for (auto& m : means) {
    for (double& v : m) v *= separation / closest;
  }
  return means;
}

namespace {

void validate(const WorldParams& p) {
  if (p.width_cells < 16 || p.height_cells < 16) {
    throw std::invalid_argument("world dimensions must be >= 16 cells");
  }
  if (p.num_classes < 2) throw std::invalid_argument("num_classes must be >= 2");
  if (p.blob_scale < 1) throw std::invalid_argument("blob_scale must be >= 1");
  if (p.feature_dim < 1) throw std::invalid_argument("feature_dim must be >= 1");
  if (!(p.cell_size > 0.0)) throw std::invalid_argument("cell_size must be > 0");
  if (!(p.noise_sigma >= 0.0)) {
    throw std::invalid_argument("noise_sigma must be >= 0");
  }
  if (!(p.class_separation > 0.0)) {
    throw std::invalid_argument("class_separation must be > 0");
  }
}

FeatureRaster synthesize_features(std::uint64_t seed, const LabelRaster& labels,
                                  const std::vector<std::vector<double>>& means,
                                  double sigma) {
  const int dim = static_cast<int>(means.front().size());
  FeatureRaster features(labels.rows(), labels.cols(), dim);
  Rng rng(derive_seed(seed, "world.features"));
  std::normal_distribution<double> normal;
  for (int r = 0; r < labels.rows(); ++r) {
    for (int c = 0; c < labels.cols(); ++c) {
      const auto& mu = means[labels(r, c)];
      auto f = features.at(r, c);
      for (int j = 0; j < dim; ++j) {
        // Draw even when sigma == 0 so the stream layout does not depend on it.
        const double eps = normal(rng);
        f[j] = mu[j] + sigma * eps;
      }
    }
  }
  return features;
}

}  // namespace

SemanticGridWorld generate_world(std::uint64_t seed, const WorldParams& params) {
  validate(params);
  const int rows = params.height_cells;
  const int cols = params.width_cells;
  const int K = params.num_classes;

  const double area = static_cast<double>(rows) * cols;
  const int num_seeds = std::max(
      K, static_cast<int>(std::lround(area / (static_cast<double>(params.blob_scale) *
                                               params.blob_scale))));

  Rng rng(derive_seed(seed, "world.labels"));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> pick_class(0, K - 1);
  struct Seed {
    double row, col;
    int label;
  };
  std::vector<Seed> seeds;
  seeds.reserve(num_seeds);
  for (int i = 0; i < num_seeds; ++i) {
    Seed s{unit(rng) * rows, unit(rng) * cols, 0};
    // The first K seeds cover every class once.
    s.label = i < K ? i : pick_class(rng);
    seeds.push_back(s);
  }

  LabelRaster labels(rows, cols, 0);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      double best = std::numeric_limits<double>::infinity();
      int label = 0;
      for (const auto& s : seeds) {
        const double dr = r + 0.5 - s.row;
        const double dc = c + 0.5 - s.col;
        const double d2 = dr * dr + dc * dc;
        if (d2 < best) {
          best = d2;
          label = s.label;
        }
      }
      labels(r, c) = label;
    }
  }

  auto means = make_class_means(seed, K, params.feature_dim,
                                params.class_separation);
  auto features = synthesize_features(seed, labels, means, params.noise_sigma);
  return SemanticGridWorld(params.cell_size, K, std::move(labels),
                           std::move(features), std::move(means));
}

SemanticGridWorld generate_world(std::uint64_t seed, int width_cells,
                                 int height_cells, int num_classes,
                                 int blob_scale) {
  WorldParams p;
  p.width_cells = width_cells;
  p.height_cells = height_cells;
  p.num_classes = num_classes;
  p.blob_scale = blob_scale;
  return generate_world(seed, p);
}

SemanticGridWorld world_from_labels(std::uint64_t seed, LabelRaster labels,
                                    int num_classes, const WorldParams& params) {
  if (num_classes < 2) throw std::invalid_argument("num_classes must be >= 2");
  if (params.feature_dim < 1) {
    throw std::invalid_argument("feature_dim must be >= 1");
  }
  auto means = make_class_means(seed, num_classes, params.feature_dim,
                                params.class_separation);
  for (int label : labels.values()) {
    if (label < 0 || label >= num_classes) {
      throw std::invalid_argument("label " + std::to_string(label) +
                                  " outside [0, " + std::to_string(num_classes) +
                                  ")");
    }
  }
  auto features = synthesize_features(seed, labels, means, params.noise_sigma);
  return SemanticGridWorld(params.cell_size, num_classes, std::move(labels),
                           std::move(features), std::move(means));
}

Pose clamp_pose(const GridGeometry& geometry, int side_cells, Pose pose) {
  const int half = side_cells / 2;
  const double cs = geometry.cell_size;
  const double x_lo = half * cs;
  const double x_hi = (geometry.cols - side_cells / 2.0) * cs;
  const double y_lo = half * cs;
  const double y_hi = (geometry.rows - side_cells / 2.0) * cs;
  return {std::clamp(pose.x, x_lo, std::max(x_lo, x_hi)),
          std::clamp(pose.y, y_lo, std::max(y_lo, y_hi))};
}

Footprint footprint_at(const GridGeometry& geometry, Pose pose, int side_cells) {
  if (side_cells < 1) throw std::invalid_argument("footprint side must be >= 1");
  if (side_cells > geometry.rows || side_cells > geometry.cols) {
    throw std::invalid_argument("footprint side " + std::to_string(side_cells) +
                                " exceeds world dimensions");
  }
  const Pose p = clamp_pose(geometry, side_cells, pose);
  const int half = side_cells / 2;
  // Footprint centers of even sides sit on cell borders; absorb round-off.
  const int center_col =
      static_cast<int>(std::floor(p.x / geometry.cell_size + 1e-9));
  const int center_row =
      static_cast<int>(std::floor(p.y / geometry.cell_size + 1e-9));
  const int origin_col =
      std::clamp(center_col - half, 0, geometry.cols - side_cells);
  const int origin_row =
      std::clamp(center_row - half, 0, geometry.rows - side_cells);
  return {{origin_row, origin_col}, side_cells};
}

std::vector<Cell> footprint_cells(const Footprint& fp) {
  std::vector<Cell> cells;
  cells.reserve(fp.num_cells());
  for (int i = 0; i < fp.side; ++i) {
    for (int j = 0; j < fp.side; ++j) cells.push_back(fp.cell_at(i, j));
  }
  return cells;
}

std::vector<Cell> visible_cells(Pose pose, int side_cells,
                                const GridGeometry& geometry) {
  return footprint_cells(footprint_at(geometry, pose, side_cells));
}

RawImage capture(const SemanticGridWorld& world, Pose pose, int side_cells) {
  const Footprint fp = footprint_at(world.geometry(), pose, side_cells);
  RawImage image;
  image.origin_cell = fp.origin;
  image.side_cells = side_cells;
  image.gt_patch = LabelRaster(side_cells, side_cells);
  image.feature_patch = FeatureRaster(side_cells, side_cells, world.feature_dim());
  for (int i = 0; i < side_cells; ++i) {
    for (int j = 0; j < side_cells; ++j) {
      const Cell c = fp.cell_at(i, j);
      image.gt_patch(i, j) = world.labels()(c.row, c.col);
      auto src = world.features().at(c.row, c.col);
      std::copy(src.begin(), src.end(), image.feature_patch.at(i, j).begin());
    }
  }
  return image;
}

Pose cell_center(const GridGeometry& geometry, Cell c) {
  return {(c.col + 0.5) * geometry.cell_size, (c.row + 0.5) * geometry.cell_size};
}

}  // namespace terra
