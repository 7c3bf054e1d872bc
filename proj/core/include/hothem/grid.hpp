// Copyright 2026 The Hot Hem Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hothem::raster {

inline constexpr double kDefaultNodata = -9999.0;

struct LonLat {
  double lon = 0.0;
  double lat = 0.0;
};

struct Cell {
  int col = 0;
  int row = 0;
  bool operator==(const Cell&) const = default;
};

// Placement of a north-up grid in geographic degrees. The origin is the
// lower-left corner of the lower-left cell; row 0 is the northernmost row.
struct GridGeometry {
  int width = 0;
  int height = 0;
  double origin_lon = 0.0;
  double origin_lat = 0.0;
  double cell_size = 0.0;

  bool operator==(const GridGeometry&) const = default;
  std::size_t cell_count() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  bool in_bounds(int col, int row) const {
    return col >= 0 && row >= 0 && col < width && row < height;
  }
  LonLat cell_center(int col, int row) const;
  // Containing cell; extent is half-open on the east and north edges.
  std::optional<Cell> cell_at(double lon, double lat) const;
  double east() const { return origin_lon + width * cell_size; }
  double north() const { return origin_lat + height * cell_size; }
};

// Single-band raster. Every stored value is finite or exactly the nodata
// sentinel.
class Grid {
 public:
  Grid() = default;
  // All cells set to nodata.
  explicit Grid(const GridGeometry& geometry, double nodata = kDefaultNodata);
  Grid(const GridGeometry& geometry, std::vector<double> values,
       double nodata = kDefaultNodata);

  const GridGeometry& geometry() const { return geometry_; }
  int width() const { return geometry_.width; }
  int height() const { return geometry_.height; }
  double cell_size() const { return geometry_.cell_size; }
  double nodata() const { return nodata_; }
  std::size_t size() const { return values_.size(); }

  std::size_t index(int col, int row) const {
    return static_cast<std::size_t>(row) * geometry_.width + col;
  }
  double at(int col, int row) const { return values_[index(col, row)]; }
  double operator[](std::size_t i) const { return values_[i]; }
  // Non-finite values are stored as nodata.
  void set(int col, int row, double v);
  void set(std::size_t i, double v);
  void set_nodata(int col, int row) { values_[index(col, row)] = nodata_; }

  bool is_nodata(double v) const { return v == nodata_; }
  bool valid(int col, int row) const { return !is_nodata(at(col, row)); }
  bool valid(std::size_t i) const { return !is_nodata(values_[i]); }

  std::span<const double> values() const { return values_; }

  // Smallest and largest valid value; empty when every cell is nodata.
  std::optional<std::pair<double, double>> valid_range() const;

 private:
  GridGeometry geometry_;
  double nodata_ = kDefaultNodata;
  std::vector<double> values_;
};

// Ordered set of co-registered layers.
class GridStack {
 public:
  GridStack() = default;

  // Throws ConfigError when the geometry differs from existing layers.
  void add(std::string name, Grid grid);

  std::size_t size() const { return layers_.size(); }
  bool empty() const { return layers_.empty(); }
  const Grid& operator[](std::size_t i) const { return layers_[i]; }
  const std::vector<Grid>& layers() const { return layers_; }
  const std::vector<std::string>& names() const { return names_; }
  const GridGeometry& geometry() const;

 private:
  std::vector<Grid> layers_;
  std::vector<std::string> names_;
};

// ESRI ASCII grid. Values are written at 6 significant digits, so a file
// read and re-written reproduces itself byte for byte.
Grid read_ascii_grid(std::istream& in);
Grid read_ascii_grid(const std::filesystem::path& path);
void write_ascii_grid(const Grid& grid, std::ostream& out);
void write_ascii_grid(const Grid& grid, const std::filesystem::path& path);

}  // namespace hothem::raster
