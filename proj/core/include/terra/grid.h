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

#ifndef TERRA_GRID_H_
#define TERRA_GRID_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace terra {

// Integer cell index. Rows grow along +y, columns along +x.
struct Cell {
  int row = 0;
  int col = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

// Planar robot pose at fixed altitude, in meters.
struct Pose {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Pose&, const Pose&) = default;
};

// Spatial extent of a world or map.
struct GridGeometry {
  int rows = 0;
  int cols = 0;
  double cell_size = 1.0;

  bool contains(Cell c) const {
    return c.row >= 0 && c.row < rows && c.col >= 0 && c.col < cols;
  }
  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(cols) +
           static_cast<std::size_t>(c.col);
  }
  std::size_t num_cells() const {
    return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  }
  double width_m() const { return cols * cell_size; }
  double height_m() const { return rows * cell_size; }

  friend bool operator==(const GridGeometry&, const GridGeometry&) = default;
};

// Axis-aligned square camera footprint in cell coordinates: covers
// [origin.row, origin.row + side) x [origin.col, origin.col + side).
struct Footprint {
  Cell origin;
  int side = 0;

  bool contains(Cell c) const {
    return c.row >= origin.row && c.row < origin.row + side &&
           c.col >= origin.col && c.col < origin.col + side;
  }
  std::size_t num_cells() const {
    return static_cast<std::size_t>(side) * static_cast<std::size_t>(side);
  }
  Cell cell_at(int i, int j) const { return {origin.row + i, origin.col + j}; }

  friend bool operator==(const Footprint&, const Footprint&) = default;
};

// Dense row-major 2D raster.
template <typename T>
class Raster {
 public:
  Raster() = default;
  Raster(int rows, int cols, T fill = T{})
      : rows_(rows),
        cols_(cols),
        data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols),
              fill) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("negative raster size");
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(int r, int c) { return data_[offset(r, c)]; }
  const T& operator()(int r, int c) const { return data_[offset(r, c)]; }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  std::size_t offset(int r, int c) const {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(c);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

using LabelRaster = Raster<int>;
using CountRaster = Raster<std::int32_t>;
using MaskRaster = Raster<std::uint8_t>;

// Raster of fixed-length feature vectors, stored row-major then by dimension.
class FeatureRaster {
 public:
  FeatureRaster() = default;
  FeatureRaster(int rows, int cols, int dim)
      : rows_(rows),
        cols_(cols),
        dim_(dim),
        data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) *
                  static_cast<std::size_t>(dim),
              0.0) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int dim() const { return dim_; }
  std::size_t num_pixels() const {
    return static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_);
  }

  std::span<double> at(int r, int c) {
    return {data_.data() + offset(r, c), static_cast<std::size_t>(dim_)};
  }
  std::span<const double> at(int r, int c) const {
    return {data_.data() + offset(r, c), static_cast<std::size_t>(dim_)};
  }
  std::span<const double> values() const { return data_; }

  friend bool operator==(const FeatureRaster&, const FeatureRaster&) = default;

 private:
  std::size_t offset(int r, int c) const {
    return (static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
            static_cast<std::size_t>(c)) *
           static_cast<std::size_t>(dim_);
  }

  int rows_ = 0;
  int cols_ = 0;
  int dim_ = 0;
  std::vector<double> data_;
};

}  // namespace terra

#endif  // TERRA_GRID_H_
