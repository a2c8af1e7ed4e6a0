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

#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <stdexcept>

#include "terra/world.h"

namespace terra {
namespace {

WorldParams small_params() {
  WorldParams p;
  p.width_cells = 32;
  p.height_cells = 24;
  p.num_classes = 3;
  p.blob_scale = 8;
  p.feature_dim = 4;
  return p;
}

TEST(GenerateWorld, SameSeedGivesIdenticalWorld) {
  const auto a = generate_world(42, small_params());
  const auto b = generate_world(42, small_params());
  EXPECT_EQ(a.labels(), b.labels());
  EXPECT_EQ(a.features(), b.features());
  EXPECT_EQ(a.class_means(), b.class_means());
}

TEST(GenerateWorld, DifferentSeedsDiffer) {
  const auto a = generate_world(1, small_params());
  const auto b = generate_world(2, small_params());
  EXPECT_NE(a.features(), b.features());
}

TEST(GenerateWorld, ZeroNoiseFeaturesEqualClassMeans) {
  WorldParams p = small_params();
  p.noise_sigma = 0.0;
  const auto w = generate_world(5, p);
  for (int r = 0; r < w.height_cells(); ++r) {
    for (int c = 0; c < w.width_cells(); ++c) {
      const auto f = w.features().at(r, c);
      const auto& mu = w.class_means()[w.labels()(r, c)];
      for (int j = 0; j < w.feature_dim(); ++j) ASSERT_EQ(f[j], mu[j]);
    }
  }
}

// Regression fixture recorded from the generator (libstdc++ distributions).
TEST(GenerateWorld, HistogramRegressionSeed1) {
  const auto w = generate_world(1, 64, 64, 4, 8);
  std::array<int, 4> hist{};
  for (int v : w.labels().values()) ++hist[v];
  const std::array<int, 4> expected{1168, 731, 802, 1395};
  EXPECT_EQ(hist, expected);
  for (int h : hist) EXPECT_GE(h, 64 * 64 / 100);
}

TEST(GenerateWorld, LabelsFormSmoothRegions) {
  const auto w = generate_world(3, 64, 64, 4, 8);
  int same = 0, total = 0;
  for (int r = 0; r < 64; ++r) {
    for (int c = 0; c + 1 < 64; ++c) {
      ++total;
      same += w.labels()(r, c) == w.labels()(r, c + 1);
    }
  }
  EXPECT_GT(static_cast<double>(same) / total, 0.8);
}

TEST(GenerateWorld, RejectsInvalidArguments) {
  EXPECT_THROW(generate_world(1, 15, 32, 4, 8), std::invalid_argument);
  EXPECT_THROW(generate_world(1, 32, 15, 4, 8), std::invalid_argument);
  EXPECT_THROW(generate_world(1, 32, 32, 1, 8), std::invalid_argument);
  EXPECT_THROW(generate_world(1, 32, 32, 4, 0), std::invalid_argument);
}

double distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
  return std::sqrt(s);
}

TEST(MakeClassMeans, OrthogonalLayoutHasExactPairwiseDistance) {
  const auto means = make_class_means(9, 4, 8, 3.5);
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) EXPECT_NEAR(distance(means[a], means[b]), 3.5, 1e-12);
  }
}

TEST(MakeClassMeans, LowDimensionalLayoutHasSeparationAsClosestPair) {
  const auto means = make_class_means(9, 5, 2, 2.0);
  double closest = 1e300;
  for (int a = 0; a < 5; ++a) {
    for (int b = a + 1; b < 5; ++b) closest = std::min(closest, distance(means[a], means[b]));
  }
  EXPECT_NEAR(closest, 2.0, 1e-9);
}

TEST(WorldFromLabels, KeepsLabelsAndSynthesizesFeatures) {
  LabelRaster labels(16, 16, 0);
  for (int r = 0; r < 16; ++r) {
    for (int c = 8; c < 16; ++c) labels(r, c) = 1;
  }
  WorldParams p;
  p.feature_dim = 3;
  const auto w = world_from_labels(4, labels, 2, p);
  EXPECT_EQ(w.labels(), labels);
  EXPECT_EQ(w.feature_dim(), 3);
  EXPECT_EQ(w.num_classes(), 2);
  EXPECT_THROW(world_from_labels(4, labels, 1, p), std::invalid_argument);
}

TEST(Capture, CenterPoseWithWorldSizedFootprintReturnsEverything) {
  const auto w = generate_world(2, 32, 32, 3, 8);
  const RawImage img = capture(w, {16.0, 16.0}, 32);
  EXPECT_EQ(img.origin_cell, (Cell{0, 0}));
  EXPECT_EQ(img.gt_patch, w.labels());
  EXPECT_EQ(img.feature_patch, w.features());
}

TEST(Capture, OriginIsCenterMinusHalfSide) {
  const auto w = generate_world(2, 64, 64, 4, 8);
  EXPECT_EQ(capture(w, {10.0, 10.0}, 2).origin_cell, (Cell{9, 9}));
  EXPECT_EQ(capture(w, {10.5, 10.5}, 2).origin_cell, (Cell{9, 9}));
  EXPECT_EQ(capture(w, {10.5, 10.5}, 3).origin_cell, (Cell{9, 9}));
}

TEST(Capture, OversizedFootprintThrows) {
  const auto w = generate_world(2, 32, 32, 3, 8);
  EXPECT_THROW(capture(w, {16.0, 16.0}, 33), std::invalid_argument);
}

TEST(Capture, PatchIsExactCopyForEveryPose) {
  WorldParams p = small_params();
  const auto w = generate_world(11, p);
  for (int f : {1, 2, 5, 8}) {
    for (int r = 0; r < w.height_cells(); ++r) {
      for (int c = 0; c < w.width_cells(); ++c) {
        const RawImage img = capture(w, cell_center(w.geometry(), {r, c}), f);
        const auto cells = visible_cells(cell_center(w.geometry(), {r, c}), f, w.geometry());
        ASSERT_EQ(cells.size(), static_cast<std::size_t>(f * f));
        std::size_t k = 0;
        for (int i = 0; i < f; ++i) {
          for (int j = 0; j < f; ++j, ++k) {
            const Cell src{img.origin_cell.row + i, img.origin_cell.col + j};
            ASSERT_EQ(cells[k], src);
            ASSERT_EQ(img.gt_patch(i, j), w.labels()(src.row, src.col));
            const auto a = img.feature_patch.at(i, j);
            const auto b = w.features().at(src.row, src.col);
            ASSERT_TRUE(std::equal(a.begin(), a.end(), b.begin()));
          }
        }
      }
    }
  }
}

TEST(VisibleCells, InteriorPoseSeesSideSquared) {
  const GridGeometry g{128, 128, 1.0};
  EXPECT_EQ(visible_cells({64.0, 64.0}, 20, g).size(), 400u);
}

TEST(VisibleCells, PosesOneFootprintApartAreDisjoint) {
  const GridGeometry g{128, 128, 1.0};
  const auto a = visible_cells({30.0, 30.0}, 20, g);
  const auto b = visible_cells({50.0, 50.0}, 20, g);
  std::set<Cell> sa(a.begin(), a.end());
  for (const Cell& c : b) EXPECT_EQ(sa.count(c), 0u);
}

TEST(VisibleCells, CornerPosesAreClampedFlushWithBounds) {
  const GridGeometry g{64, 48, 1.0};
  const int f = 20;
  const auto lo = footprint_at(g, {-5.0, -5.0}, f);
  EXPECT_EQ(lo.origin, (Cell{0, 0}));
  const auto hi = footprint_at(g, {500.0, 500.0}, f);
  EXPECT_EQ(hi.origin, (Cell{64 - f, 48 - f}));
  EXPECT_EQ(visible_cells({500.0, 500.0}, f, g).size(), 400u);
}

TEST(ClampPose, ValidRegionKeepsFootprintsInside) {
  const GridGeometry g{40, 40, 0.5};
  for (int f : {1, 4, 7, 40}) {
    const Pose lo = clamp_pose(g, f, {-100.0, -100.0});
    const Pose hi = clamp_pose(g, f, {100.0, 100.0});
    EXPECT_DOUBLE_EQ(lo.x, (f / 2) * 0.5);
    EXPECT_DOUBLE_EQ(hi.x, (40 - f / 2.0) * 0.5);
    for (const Pose p : {lo, hi}) {
      const Footprint fp = footprint_at(g, p, f);
      EXPECT_GE(fp.origin.row, 0);
      EXPECT_LE(fp.origin.row + f, 40);
      EXPECT_GE(fp.origin.col, 0);
      EXPECT_LE(fp.origin.col + f, 40);
    }
  }
}

TEST(SemanticGridWorld, ConstructorValidatesInvariants) {
  LabelRaster labels(2, 2, 0);
  FeatureRaster features(2, 2, 1);
  const std::vector<std::vector<double>> means{{0.0}, {1.0}};
  EXPECT_NO_THROW(SemanticGridWorld(1.0, 2, labels, features, means));
  EXPECT_THROW(SemanticGridWorld(0.0, 2, labels, features, means), std::invalid_argument);
  EXPECT_THROW(SemanticGridWorld(1.0, 1, labels, features, {{0.0}}), std::invalid_argument);
  labels(0, 0) = 2;
  EXPECT_THROW(SemanticGridWorld(1.0, 2, labels, features, means), std::invalid_argument);
  labels(0, 0) = 0;
  EXPECT_THROW(SemanticGridWorld(1.0, 2, labels, FeatureRaster(2, 3, 1), means),
               std::invalid_argument);
}

}  // namespace
}  // namespace terra
