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

#include "terra/raster_io.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string_view>
#include <vector>

namespace terra {
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_out(const fs::path& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

// Whitespace/comment-aware token reader for PGM headers and P2 bodies.
class PgmReader {
 public:
  PgmReader(std::string_view data, const fs::path& path) : data_(data), path_(path) {}

  long next_int(const char* what) {
    skip();
    const std::size_t start = pos_;
    while (pos_ < data_.size() && !std::isspace(static_cast<unsigned char>(data_[pos_])) &&
           data_[pos_] != '#') {
      ++pos_;
    }
    long value = 0;
    const auto token = data_.substr(start, pos_ - start);
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size() ||
        value < 0) {
      throw RasterFormatError(path_.string() + ": bad " + what + " '" +
                              std::string(token) + "' at byte " + std::to_string(start));
    }
    return value;
  }

  // Single whitespace byte after maxval, then raw samples.
  std::size_t binary_start() const { return pos_ + 1; }

 private:
  void skip() {
    while (pos_ < data_.size()) {
      if (data_[pos_] == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(data_[pos_]))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view data_;
  fs::path path_;
  std::size_t pos_ = 2;
};

LabelRaster parse_pgm(const std::string& data, const fs::path& path, int num_classes) {
  const bool binary = data[1] == '5';
  PgmReader reader(data, path);
  const long width = reader.next_int("width");
  const long height = reader.next_int("height");
  const long maxval = reader.next_int("maxval");
  if (width < 1 || height < 1) throw RasterFormatError(path.string() + ": empty image");
  if (maxval < 1 || maxval > 65535) {
    throw RasterFormatError(path.string() + ": maxval out of range");
  }
  if (num_classes > 0 && maxval > num_classes - 1) {
    throw std::invalid_argument(path.string() + ": maxval " + std::to_string(maxval) +
                                " exceeds declared classes " +
                                std::to_string(num_classes));
  }
  LabelRaster labels(static_cast<int>(height), static_cast<int>(width));
  if (binary) {
    const std::size_t bytes_per = maxval > 255 ? 2 : 1;
    const std::size_t start = reader.binary_start();
    const std::size_t need = static_cast<std::size_t>(width * height) * bytes_per;
    if (data.size() < start + need) {
      throw RasterFormatError(path.string() + ": truncated P5 data (need " +
                              std::to_string(need) + " bytes)");
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const auto* p = reinterpret_cast<const unsigned char*>(data.data() + start +
                                                              i * bytes_per);
      labels[i] = bytes_per == 2 ? (p[0] << 8) | p[1] : p[0];
    }
  } else {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      labels[i] = static_cast<int>(reader.next_int("sample"));
    }
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] > maxval) {
      throw RasterFormatError(path.string() + ": sample exceeds maxval at pixel " +
                              std::to_string(i));
    }
  }
  return labels;
}

LabelRaster parse_csv(const std::string& data, const fs::path& path) {
  std::vector<std::vector<int>> rows;
  std::istringstream in(data);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<int> row;
    std::size_t start = 0;
    int col = 0;
    while (true) {
      const std::size_t end = line.find(',', start);
      std::string token = line.substr(start, end == std::string::npos ? std::string::npos
                                                                      : end - start);
      token.erase(0, token.find_first_not_of(" \t"));
      token.erase(token.find_last_not_of(" \t") + 1);
      int value = 0;
      auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
      if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
        throw RasterFormatError(path.string() + ": row " + std::to_string(line_no) +
                                ", col " + std::to_string(col + 1) +
                                ": not an integer '" + token + "'");
      }
      if (value < 0) {
        throw RasterFormatError(path.string() + ": row " + std::to_string(line_no) +
                                ", col " + std::to_string(col + 1) + ": negative label");
      }
      row.push_back(value);
      ++col;
      if (end == std::string::npos) break;
      start = end + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw RasterFormatError(path.string() + ": row " + std::to_string(line_no) +
                              " has " + std::to_string(row.size()) + " values, expected " +
                              std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw RasterFormatError(path.string() + ": empty CSV raster");
  LabelRaster labels(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
  for (int r = 0; r < labels.rows(); ++r) {
    for (int c = 0; c < labels.cols(); ++c) labels(r, c) = rows[r][c];
  }
  return labels;
}

}  // namespace

int infer_num_classes(const LabelRaster& labels) {
  int max_label = 0;
  for (int v : labels.values()) max_label = std::max(max_label, v);
  return max_label + 1;
}

LabelRaster load_label_raster(const fs::path& path, int num_classes) {
  const std::string data = read_file(path);
  LabelRaster labels;
  if (data.size() >= 2 && data[0] == 'P' && (data[1] == '2' || data[1] == '5')) {
    labels = parse_pgm(data, path, num_classes);
  } else {
    labels = parse_csv(data, path);
  }
  if (num_classes > 0) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] >= num_classes) {
        throw std::invalid_argument(
            path.string() + ": label " + std::to_string(labels[i]) + " at (" +
            std::to_string(i / labels.cols()) + ", " + std::to_string(i % labels.cols()) +
            ") >= declared classes " + std::to_string(num_classes));
      }
    }
  }
  return labels;
}

void write_label_csv(const fs::path& path, const LabelRaster& labels) {
  auto out = open_out(path);
  for (int r = 0; r < labels.rows(); ++r) {
    for (int c = 0; c < labels.cols(); ++c) {
      if (c) out << ',';
      out << labels(r, c);
    }
    out << '\n';
  }
}

void write_label_pgm(const fs::path& path, const LabelRaster& labels, int num_classes,
                     bool ascii) {
  const int maxval = std::max(1, num_classes - 1);
  auto out = open_out(path, !ascii);
  out << (ascii ? "P2\n" : "P5\n") << labels.cols() << ' ' << labels.rows() << '\n'
      << maxval << '\n';
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int v = labels[i];
    if (v < 0 || v > maxval) throw std::invalid_argument("label outside PGM range");
    if (ascii) {
      out << v << (((i + 1) % static_cast<std::size_t>(labels.cols()) == 0) ? '\n' : ' ');
    } else if (maxval > 255) {
      out.put(static_cast<char>((v >> 8) & 0xff));
      out.put(static_cast<char>(v & 0xff));
    } else {
      out.put(static_cast<char>(v));
    }
  }
}

namespace {

template <typename T>
void write_csv_impl(const fs::path& path, const Raster<T>& raster) {
  auto out = open_out(path);
  out << std::setprecision(10);
  for (int r = 0; r < raster.rows(); ++r) {
    for (int c = 0; c < raster.cols(); ++c) {
      if (c) out << ',';
      out << raster(r, c);
    }
    out << '\n';
  }
}

constexpr char kMapMagic[8] = {'T', 'E', 'R', 'R', 'A', 'M', 'P', '1'};

template <typename T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw RasterFormatError("truncated map snapshot");
  return v;
}

}  // namespace

void write_csv(const fs::path& path, const Raster<double>& raster) {
  write_csv_impl(path, raster);
}
void write_csv(const fs::path& path, const CountRaster& raster) {
  write_csv_impl(path, raster);
}

void write_mask_pgm(const fs::path& path, const MaskRaster& mask) {
  auto out = open_out(path, true);
  out << "P5\n" << mask.cols() << ' ' << mask.rows() << "\n255\n";
  for (std::size_t i = 0; i < mask.size(); ++i) {
    out.put(static_cast<char>(mask[i] ? 255 : 0));
  }
}

// Layout: magic, rows, cols, K (int32), cell_size (f64), K log-odds layers,
// then per cell: uncertainty mean (f64), uncertainty count, train count
// (int32), explored (u8).
void save_map(const fs::path& path, const MultiLayerMap& map) {
  auto out = open_out(path, true);
  const GridGeometry& g = map.geometry();
  out.write(kMapMagic, sizeof(kMapMagic));
  put<std::int32_t>(out, g.rows);
  put<std::int32_t>(out, g.cols);
  put<std::int32_t>(out, map.num_classes());
  put<double>(out, g.cell_size);
  for (int k = 0; k < map.num_classes(); ++k) {
    for (double v : map.layer(k)) put<double>(out, v);
  }
  for (std::size_t i = 0; i < g.num_cells(); ++i) {
    put<double>(out, map.uncertainty_layer()[i]);
    put<std::int32_t>(out, map.uncertainty_counts()[i]);
    put<std::int32_t>(out, map.train_counts()[i]);
    put<std::uint8_t>(out, map.explored_mask()[i]);
  }
}

MultiLayerMap load_map(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMapMagic, sizeof(magic)) != 0) {
    throw RasterFormatError(path.string() + ": not a map snapshot");
  }
  GridGeometry g;
  g.rows = get<std::int32_t>(in);
  g.cols = get<std::int32_t>(in);
  const int K = get<std::int32_t>(in);
  g.cell_size = get<double>(in);
  if (g.rows < 1 || g.cols < 1 || K < 2 || g.num_cells() > (1u << 28)) {
    throw RasterFormatError(path.string() + ": bad map header");
  }
  std::vector<std::vector<double>> layers(K, std::vector<double>(g.num_cells()));
  for (auto& layer : layers) {
    for (double& v : layer) v = get<double>(in);
  }
  std::vector<double> mean(g.num_cells());
  std::vector<std::int32_t> ucount(g.num_cells()), tcount(g.num_cells());
  std::vector<std::uint8_t> explored(g.num_cells());
  for (std::size_t i = 0; i < g.num_cells(); ++i) {
    mean[i] = get<double>(in);
    ucount[i] = get<std::int32_t>(in);
    tcount[i] = get<std::int32_t>(in);
    explored[i] = get<std::uint8_t>(in);
  }
  return MultiLayerMap::from_layers(g, std::move(layers), std::move(mean),
                                    std::move(ucount), std::move(tcount),
                                    std::move(explored));
}

void dump_map(const fs::path& dir, const MultiLayerMap& map) {
  fs::create_directories(dir);
  const GridGeometry& g = map.geometry();
  for (int k = 0; k < map.num_classes(); ++k) {
    Raster<double> layer(g.rows, g.cols);
    std::copy(map.layer(k).begin(), map.layer(k).end(), layer.values().begin());
    write_csv(dir / ("semantic_" + std::to_string(k) + ".csv"), layer);
  }
  write_csv(dir / "uncertainty.csv", map.uncertainty_layer());
  write_csv(dir / "uncertainty_count.csv", map.uncertainty_counts());
  write_csv(dir / "train_counts.csv", map.train_counts());
  write_label_csv(dir / "ml_labels.csv", ml_semantics(map).labels);
  write_mask_pgm(dir / "explored.pgm", map.explored_mask());
}

}  // namespace terra
