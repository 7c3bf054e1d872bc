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

#include "hothem/grid.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "hothem/error.hpp"
#include "hothem/util.hpp"

namespace hothem::raster {

LonLat GridGeometry::cell_center(int col, int row) const {
  return {origin_lon + (col + 0.5) * cell_size,
          origin_lat + (height - row - 0.5) * cell_size};
}

std::optional<Cell> GridGeometry::cell_at(double lon, double lat) const {
  if (!std::isfinite(lon) || !std::isfinite(lat)) return std::nullopt;
  const double fx = (lon - origin_lon) / cell_size;
  const double fy = (lat - origin_lat) / cell_size;
  if (fx < 0.0 || fy < 0.0 || fx >= width || fy >= height) return std::nullopt;
  const int col = std::min(static_cast<int>(std::floor(fx)), width - 1);
  const int row_from_south = std::min(static_cast<int>(std::floor(fy)), height - 1);
  return Cell{col, height - 1 - row_from_south};
}

namespace {

void validate_geometry(const GridGeometry& g) {
  if (g.width < 1 || g.height < 1) {
    throw ConfigError("grid dimensions must be at least 1x1");
  }
  if (!(g.cell_size > 0.0) || !std::isfinite(g.cell_size)) {
    throw ConfigError("grid cell size must be positive");
  }
  if (!std::isfinite(g.origin_lon) || !std::isfinite(g.origin_lat)) {
    throw ConfigError("grid origin must be finite");
  }
}

}  // namespace

Grid::Grid(const GridGeometry& geometry, double nodata)
    : geometry_(geometry), nodata_(nodata) {
  validate_geometry(geometry_);
  if (!std::isfinite(nodata_)) throw ConfigError("nodata sentinel must be finite");
  values_.assign(geometry_.cell_count(), nodata_);
}

Grid::Grid(const GridGeometry& geometry, std::vector<double> values, double nodata)
    : geometry_(geometry), nodata_(nodata), values_(std::move(values)) {
  validate_geometry(geometry_);
  if (!std::isfinite(nodata_)) throw ConfigError("nodata sentinel must be finite");
  if (values_.size() != geometry_.cell_count()) {
    throw ConfigError("grid value count " + std::to_string(values_.size()) +
                      " does not match " + std::to_string(geometry_.width) + "x" +
                      std::to_string(geometry_.height));
  }
  for (double& v : values_) {
    if (!std::isfinite(v)) v = nodata_;
  }
}

void Grid::set(int col, int row, double v) { set(index(col, row), v); }

void Grid::set(std::size_t i, double v) { values_[i] = std::isfinite(v) ? v : nodata_; }

std::optional<std::pair<double, double>> Grid::valid_range() const {
  std::optional<std::pair<double, double>> r;
  for (double v : values_) {
    if (is_nodata(v)) continue;
    if (!r) {
      r.emplace(v, v);
    } else {
      r->first = std::min(r->first, v);
      r->second = std::max(r->second, v);
    }
  }
  return r;
}

void GridStack::add(std::string name, Grid grid) {
  if (!layers_.empty() && !(grid.geometry() == layers_.front().geometry())) {
    throw ConfigError("layer '" + name + "' geometry differs from stack geometry");
  }
  names_.push_back(std::move(name));
  layers_.push_back(std::move(grid));
}

const GridGeometry& GridStack::geometry() const {
  if (layers_.empty()) throw ConfigError("empty grid stack has no geometry");
  return layers_.front().geometry();
}

Grid read_ascii_grid(std::istream& in) {
  GridGeometry geom;
  double nodata = kDefaultNodata;
  bool center_registered = false;
  int seen = 0;
  std::string key;
  // Header lines are "KEY value"; the first token that is numeric starts data.
  std::streampos data_start = in.tellg();
  while (in >> key) {
    std::string upper = key;
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (util::parse_double(key)) break;
    std::string value;
    if (!(in >> value)) throw DataError("ASCII grid header truncated at " + key);
    const auto num = util::parse_double(value);
    if (!num) throw DataError("ASCII grid header value for " + key + " is not numeric");
    if (upper == "NCOLS") {
      geom.width = static_cast<int>(*num);
    } else if (upper == "NROWS") {
      geom.height = static_cast<int>(*num);
    } else if (upper == "XLLCORNER") {
      geom.origin_lon = *num;
    } else if (upper == "YLLCORNER") {
      geom.origin_lat = *num;
    } else if (upper == "XLLCENTER") {
      geom.origin_lon = *num;
      center_registered = true;
    } else if (upper == "YLLCENTER") {
      geom.origin_lat = *num;
      center_registered = true;
    } else if (upper == "CELLSIZE") {
      geom.cell_size = *num;
    } else if (upper == "NODATA_VALUE") {
      nodata = *num;
    } else {
      throw DataError("unknown ASCII grid header key " + key);
    }
    ++seen;
    data_start = in.tellg();
  }
  if (seen < 5) throw DataError("ASCII grid header incomplete");
  if (center_registered) {
    geom.origin_lon -= geom.cell_size / 2.0;
    geom.origin_lat -= geom.cell_size / 2.0;
  }
  in.clear();
  in.seekg(data_start);
  if (geom.width < 1 || geom.height < 1 || !(geom.cell_size > 0.0)) {
    throw DataError("ASCII grid header has invalid dimensions or cell size");
  }
  std::vector<double> values;
  values.reserve(geom.cell_count());
  std::string tok;
  while (values.size() < geom.cell_count() && in >> tok) {
    const auto v = util::parse_double(tok);
    if (!v) throw DataError("ASCII grid value '" + tok + "' is not numeric");
    values.push_back(*v);
  }
  if (values.size() != geom.cell_count()) {
    throw DataError("ASCII grid truncated: expected " + std::to_string(geom.cell_count()) +
                    " values, found " + std::to_string(values.size()));
  }
  if (in >> tok) throw DataError("ASCII grid has trailing values");
  return Grid(geom, std::move(values), nodata);
}

Grid read_ascii_grid(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open grid " + path.string());
  try {
    return read_ascii_grid(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_ascii_grid(const Grid& grid, std::ostream& out) {
  const auto& g = grid.geometry();
  out << "ncols " << g.width << "\n"
      << "nrows " << g.height << "\n"
      << "xllcorner " << util::format_exact(g.origin_lon) << "\n"
      << "yllcorner " << util::format_exact(g.origin_lat) << "\n"
      << "cellsize " << util::format_exact(g.cell_size) << "\n"
      << "NODATA_value " << util::format_sig(grid.nodata(), 6) << "\n";
  for (int row = 0; row < g.height; ++row) {
    for (int col = 0; col < g.width; ++col) {
      if (col) out << ' ';
      out << util::format_sig(grid.at(col, row), 6);
    }
    out << '\n';
  }
}

void write_ascii_grid(const Grid& grid, const std::filesystem::path& path) {
  std::ostringstream ss;
  write_ascii_grid(grid, ss);
  util::write_file(path, ss.str());
}

}  // namespace hothem::raster
