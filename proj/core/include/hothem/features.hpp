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
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hothem/grid.hpp"
#include "hothem/streetscape.hpp"

namespace hothem::features {

inline constexpr std::array<std::string_view, 2> kLandsatFeatures{"ndvi", "emissivity"};
inline constexpr std::array<std::string_view, 6> kPalsarFeatures{
    "palsar_hh_db",          "palsar_hv_db",           "palsar_hv_hh_ratio",
    "palsar_glcm_contrast",  "palsar_glcm_homogeneity", "palsar_glcm_energy"};
inline constexpr std::array<std::string_view, 2> kDsmFeatures{"elevation_m", "sky_view_factor"};
inline constexpr std::array<std::string_view, 1> kLandcoverFeatures{"landcover_class"};
inline constexpr std::array<std::string_view, 7> kGsvFeatures{
    "pct_vegetation", "pct_sky",   "pct_building",       "pct_pavement_road",
    "pct_water",      "pct_vehicle_clutter", "pct_other"};

inline constexpr std::string_view kTargetLayer = "lst";
inline constexpr std::string_view kNoWard = "none";

// Ordered feature names. Column order is the contract between the table
// writer, the trainer and saved models.
class FeatureSchema {
 public:
  explicit FeatureSchema(std::vector<std::string> names);

  // Raster-only: Landsat + PALSAR + DSM + land cover, 11 names.
  static const FeatureSchema& deployment();
  // Deployment followed by the 7 streetscape percentages, 18 names.
  static const FeatureSchema& full();

  const std::vector<std::string>& names() const { return names_; }
  std::size_t size() const { return names_.size(); }
  const std::string& operator[](std::size_t i) const { return names_[i]; }
  std::optional<std::size_t> index_of(std::string_view name) const;

  bool operator==(const FeatureSchema&) const = default;

 private:
  std::vector<std::string> names_;
};

struct FeatureRow {
  std::string point_id;
  double lon = 0.0;
  double lat = 0.0;
  std::string ward{kNoWard};
  std::vector<double> values;  // NaN marks a missing raster sample
  std::optional<double> target_lst;
};

struct PointRecord {
  std::string id;
  double lon = 0.0;
  double lat = 0.0;
  std::string ward{kNoWard};
};

using LayerSet = std::map<std::string, raster::Grid, std::less<>>;

// Samples every deployment layer at each point (nearest for
// landcover_class, bilinear otherwise) plus the "lst" target layer.
// palsar_hv_hh_ratio is derived as hv_db - hh_db when no such layer is
// given. Points whose target sample is nodata come back without a target.
// Output order equals input order.
std::vector<FeatureRow> extract_point_features(std::span<const PointRecord> points,
                                               const LayerSet& layers);

struct GsvRecord {
  std::string point_id;
  streetscape::StreetscapeFeatures features;
};

// Values in kGsvFeatures order.
std::array<double, 7> gsv_values(const streetscape::StreetscapeFeatures& f);

// Appends the streetscape values to each deployment row with a matching
// point id; rows without a record are dropped. Duplicate ids in either
// input are an error.
std::vector<FeatureRow> join_gsv(std::span<const FeatureRow> rows,
                                 std::span<const GsvRecord> gsv);

// CSV: point_id,lon,lat,ward,<schema names...>,target_lst. Reals are written
// at 9 significant digits; missing values are empty fields.
void write_table(std::span<const FeatureRow> rows, const FeatureSchema& schema,
                 std::ostream& out);
void write_table(std::span<const FeatureRow> rows, const FeatureSchema& schema,
                 const std::filesystem::path& path);
std::vector<FeatureRow> read_table(std::istream& in, const FeatureSchema& schema);
std::vector<FeatureRow> read_table(const std::filesystem::path& path,
                                   const FeatureSchema& schema);

// point_id followed by the seven pct_* columns.
void write_gsv_table(std::span<const GsvRecord> records, const std::filesystem::path& path);
std::vector<GsvRecord> read_gsv_table(const std::filesystem::path& path);

// Rows carrying a target value, in input order.
std::vector<FeatureRow> with_target(std::span<const FeatureRow> rows);

}  // namespace hothem::features
