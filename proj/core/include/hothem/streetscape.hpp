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
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace hothem::streetscape {

inline constexpr int kRawClassCount = 65;
inline constexpr int kSuperclassCount = 7;

enum class Superclass : std::uint8_t {
  Other = 0,
  Vegetation = 1,
  Sky = 2,
  Building = 3,
  PavementRoad = 4,
  Water = 5,
  VehicleClutter = 6,
};

std::string_view superclass_name(Superclass s);

// Per-pixel class ids, row-major.
struct LabelMap {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> labels;

  std::size_t pixel_count() const { return labels.size(); }
};

// Lookup from the 65 segmentation classes to the 7 superclasses.
class SuperclassMap {
 public:
  // Throws ConfigError unless every entry is in [0, 6] and every
  // superclass is reachable.
  explicit SuperclassMap(const std::array<std::uint8_t, kRawClassCount>& table);

  std::uint8_t operator[](int raw_class) const { return table_[raw_class]; }
  const std::array<std::uint8_t, kRawClassCount>& table() const { return table_; }
  // Number of raw classes assigned to each superclass.
  std::array<int, kSuperclassCount> class_counts() const;

 private:
  std::array<std::uint8_t, kRawClassCount> table_;
};

// The bundled Mapillary Vistas assignment (identical to
// data/superclass_table.txt).
const SuperclassMap& mapillary_superclass_map();
// Mapillary Vistas class name for a raw id; used to annotate the table file.
std::string_view mapillary_class_name(int raw_class);

// Text format: "# comment" lines and "class_id,superclass_id" lines; all 65
// ids must appear exactly once.
SuperclassMap read_superclass_table(std::istream& in);
SuperclassMap read_superclass_table(const std::filesystem::path& path);
std::string format_superclass_table(const SuperclassMap& map);

// Throws DataError naming the first pixel whose label has no table entry.
LabelMap remap(const LabelMap& labels, const SuperclassMap& map);

struct StreetscapeFeatures {
  double pct_other = 0.0;
  double pct_vegetation = 0.0;
  double pct_sky = 0.0;
  double pct_building = 0.0;
  double pct_pavement_road = 0.0;
  double pct_water = 0.0;
  double pct_vehicle_clutter = 0.0;

  double sum() const;
};

// Fraction of pixels in each superclass; input values must be in [0, 6].
StreetscapeFeatures class_percentages(const LabelMap& superlabels);

// Binary PGM (P5), maxval <= 255.
LabelMap read_pgm(const std::filesystem::path& path);
LabelMap read_pgm(std::istream& in);
void write_pgm(const LabelMap& labels, const std::filesystem::path& path);

}  // namespace hothem::streetscape
