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

#ifndef TERRA_RASTER_IO_H_
#define TERRA_RASTER_IO_H_

#include <filesystem>
#include <stdexcept>
#include <string>

#include "terra/grid.h"
#include "terra/mapping.h"

namespace terra {

// Malformed raster files; the message carries the position of the problem.
class RasterFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reads a class raster from PGM (P2/P5, 8 or 16 bit) or a CSV grid of
// integers. With num_classes > 0 every label must be < num_classes (for PGM
// also maxval); throws std::invalid_argument otherwise.
LabelRaster load_label_raster(const std::filesystem::path& path, int num_classes = 0);

// Max label + 1.
int infer_num_classes(const LabelRaster& labels);

void write_label_csv(const std::filesystem::path& path, const LabelRaster& labels);
// maxval = num_classes - 1; binary P5 unless `ascii`.
void write_label_pgm(const std::filesystem::path& path, const LabelRaster& labels,
                     int num_classes, bool ascii = false);

void write_csv(const std::filesystem::path& path, const Raster<double>& raster);
void write_csv(const std::filesystem::path& path, const CountRaster& raster);
// 0/255 binary PGM.
void write_mask_pgm(const std::filesystem::path& path, const MaskRaster& mask);

// Binary snapshot of a map (all layers).
void save_map(const std::filesystem::path& path, const MultiLayerMap& map);
MultiLayerMap load_map(const std::filesystem::path& path);

// Debug dump: semantic_<k>.csv (log-odds), uncertainty.csv,
// uncertainty_count.csv, train_counts.csv, ml_labels.csv and explored.pgm.
void dump_map(const std::filesystem::path& dir, const MultiLayerMap& map);

}  // namespace terra

#endif  // TERRA_RASTER_IO_H_
