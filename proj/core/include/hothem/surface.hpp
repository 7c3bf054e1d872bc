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

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hothem/features.hpp"
#include "hothem/gbt.hpp"
#include "hothem/grid.hpp"

namespace hothem::surface {

struct WardPolygon {
  std::string name;
  std::vector<raster::LonLat> ring;  // closed: front() == back()
};

// CSV "ward,lon,lat"; consecutive rows with the same name form one ring,
// listed in file order. Rings are closed automatically and need at least
// three distinct vertices.
std::vector<WardPolygon> read_wards(std::istream& in);
std::vector<WardPolygon> read_wards(const std::filesystem::path& path);
void write_wards(std::span<const WardPolygon> wards, const std::filesystem::path& path);

// Even-odd test with boundary points counted as inside. Overlaps resolve to
// the first ward in list order.
std::optional<std::string> point_in_ward(double lon, double lat,
                                         std::span<const WardPolygon> wards);

enum class Source { Full, Deployment };
const char* source_name(Source s);

enum class HeatCategory { Cool = 0, Mild, Warm, Hot, VeryHot };
const char* heat_category_name(HeatCategory c);

struct NodePrediction {
  std::string node_id;
  double lon = 0.0;
  double lat = 0.0;
  double lst = 0.0;
  Source source = Source::Deployment;
  std::optional<HeatCategory> category;
};

// Full model for nodes inside a ward that also have a full-schema row,
// deployment model for every other node. Output follows node order.
std::vector<NodePrediction> patchwork_predict(std::span<const features::FeatureRow> nodes,
                                              std::span<const features::FeatureRow> full_rows,
                                              const gbt::GBTModel& full_model,
                                              const gbt::GBTModel& deploy_model,
                                              std::span<const WardPolygon> wards);

struct NodeStats {
  double min = 0.0;
  double mean = 0.0;
  double max = 0.0;
  double std = 0.0;  // population
  std::size_t n = 0;
  std::size_t full = 0;
  std::size_t deployment = 0;
};

NodeStats summarize(std::span<const NodePrediction> preds);

struct HeatBins {
  std::array<double, 4> edges{};  // upper edges of Cool..Hot
  bool degenerate = false;        // edges not strictly increasing
  std::vector<HeatCategory> categories;
};

// Quintile edges from the empirical distribution; a value equal to an edge
// goes to the lower bin. Needs at least five predictions.
HeatBins categorize_heat(std::span<const NodePrediction> preds);
void apply_categories(std::vector<NodePrediction>& preds, const HeatBins& bins);

struct Extent {
  double west = 0.0;
  double south = 0.0;
  double east = 0.0;
  double north = 0.0;
};

struct SurfaceSpec {
  double cell_size = 0.0001;
  std::optional<Extent> extent;  // default: node bounding box plus padding
  int pad_cells = 10;
  double blur_sigma = 4.0;
  double idw_power = 2.0;
  int idw_k = 8;

  void validate() const;
};

raster::GridGeometry surface_geometry(std::span<const NodePrediction> preds,
                                      const SurfaceSpec& spec);

// Cell means of the node predictions, then inverse-distance fill of empty
// cells from the idw_k nearest node-bearing cells (distance in cell units),
// then a gaussian blur.
raster::Grid build_surface(std::span<const NodePrediction> preds, const SurfaceSpec& spec);

// The first two stages of build_surface, without the blur.
raster::Grid interpolate_surface(std::span<const NodePrediction> preds, const SurfaceSpec& spec);

// CSV: node_id,lon,lat,lst,source,category
void write_predictions(std::span<const NodePrediction> preds, std::ostream& out);
void write_predictions(std::span<const NodePrediction> preds, const std::filesystem::path& path);
std::vector<NodePrediction> read_predictions(std::istream& in);
std::vector<NodePrediction> read_predictions(const std::filesystem::path& path);

}  // namespace hothem::surface
