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

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "hothem/error.hpp"
#include "hothem/streetscape.hpp"
#include "test_support.hpp"

namespace hothem::streetscape {
namespace {

TEST(SuperclassTable, CountsPerSuperclass) {
  const auto counts = mapillary_superclass_map().class_counts();
  EXPECT_EQ(counts, (std::array<int, 7>{26, 1, 1, 7, 12, 2, 16}));
}

TEST(SuperclassTable, KnownAssignments) {
  const auto& m = mapillary_superclass_map();
  EXPECT_EQ(m[13], static_cast<int>(Superclass::PavementRoad));  // Road
  EXPECT_EQ(m[15], static_cast<int>(Superclass::PavementRoad));  // Sidewalk
  EXPECT_EQ(m[17], static_cast<int>(Superclass::Building));
  EXPECT_EQ(m[6], static_cast<int>(Superclass::Building));  // Wall
  EXPECT_EQ(m[27], static_cast<int>(Superclass::Sky));
  EXPECT_EQ(m[30], static_cast<int>(Superclass::Vegetation));
  EXPECT_EQ(m[31], static_cast<int>(Superclass::Water));
  EXPECT_EQ(m[45], static_cast<int>(Superclass::VehicleClutter));  // Pole
  EXPECT_EQ(m[55], static_cast<int>(Superclass::VehicleClutter));  // Car
  EXPECT_EQ(mapillary_class_name(55), "Car");
  EXPECT_TRUE(mapillary_class_name(65).empty());
}

TEST(SuperclassTable, ShippedDataFileMatchesBuiltIn) {
  const auto m = read_superclass_table(std::filesystem::path(HOTHEM_SOURCE_DIR) / "core/data/superclass_table.txt");
  EXPECT_EQ(m.table(), mapillary_superclass_map().table());
}

TEST(SuperclassTable, FormatParsesBack) {
  std::istringstream in(format_superclass_table(mapillary_superclass_map()));
  EXPECT_EQ(read_superclass_table(in).table(), mapillary_superclass_map().table());
}

TEST(SuperclassTable, RejectsMissingDuplicateAndUnreachable) {
  std::string text;
  for (int i = 0; i < kRawClassCount - 1; ++i) text += std::to_string(i) + "," + std::to_string(i % 7) + "\n";
  std::istringstream missing(text);
  EXPECT_THROW(read_superclass_table(missing), DataError);
  std::istringstream dup(text + "3,1\n");
  EXPECT_THROW(read_superclass_table(dup), DataError);
  std::array<std::uint8_t, kRawClassCount> table{};
  EXPECT_THROW(SuperclassMap{table}, ConfigError);
}

TEST(ClassPercentages, VegetationFraction) {
  LabelMap m{640, 640, std::vector<std::uint8_t>(409600, static_cast<std::uint8_t>(Superclass::Building))};
  for (int i = 0; i < 40960; ++i) m.labels[i] = static_cast<std::uint8_t>(Superclass::Vegetation);
  const auto f = class_percentages(m);
  EXPECT_DOUBLE_EQ(f.pct_vegetation, 0.1);
  EXPECT_DOUBLE_EQ(f.pct_building, 0.9);
}

TEST(ClassPercentages, SumToOneAndInvariantUnderPermutation) {
  util::Rng rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    LabelMap raw{31, 17, {}};
    raw.labels.resize(31 * 17);
    for (auto& v : raw.labels) v = static_cast<std::uint8_t>(rng.below(kRawClassCount));
    const auto a = class_percentages(remap(raw, mapillary_superclass_map()));
    EXPECT_NEAR(a.sum(), 1.0, 1e-12);
    for (double x : {a.pct_other, a.pct_vegetation, a.pct_sky, a.pct_building, a.pct_pavement_road,
                     a.pct_water, a.pct_vehicle_clutter}) {
      EXPECT_GE(x, 0.0);
      EXPECT_LE(x, 1.0);
    }
    rng.shuffle(raw.labels);
    const auto b = class_percentages(remap(raw, mapillary_superclass_map()));
    EXPECT_EQ(a.pct_vegetation, b.pct_vegetation);
    EXPECT_EQ(a.pct_vehicle_clutter, b.pct_vehicle_clutter);
    EXPECT_EQ(a.pct_other, b.pct_other);
  }
}

TEST(Remap, UnknownRawClassIsDataError) {
  EXPECT_THROW(remap(LabelMap{1, 1, {70}}, mapillary_superclass_map()), DataError);
  EXPECT_THROW(class_percentages(LabelMap{1, 1, {9}}), DataError);
  EXPECT_THROW(class_percentages(LabelMap{0, 0, {}}), DataError);
}

TEST(Pgm, RoundTrip) {
  testing::TempDir dir("pgm");
  util::Rng rng(1);
  LabelMap m{13, 7, {}};
  m.labels.resize(91);
  for (auto& v : m.labels) v = static_cast<std::uint8_t>(rng.below(65));
  write_pgm(m, dir.path() / "a.pgm");
  const LabelMap back = read_pgm(dir.path() / "a.pgm");
  EXPECT_EQ(back.width, 13);
  EXPECT_EQ(back.height, 7);
  EXPECT_EQ(back.labels, m.labels);
}

TEST(Pgm, HeaderCommentsAndTruncation) {
  std::istringstream ok(std::string("P5 # c\n2 1\n# x\n255\n") + std::string("\x01\x02", 2));
  EXPECT_EQ(read_pgm(ok).labels, (std::vector<std::uint8_t>{1, 2}));
  std::istringstream bad(std::string("P5\n2 2\n255\n\x01", 13));
  EXPECT_THROW(read_pgm(bad), DataError);
  std::istringstream p2("P2\n1 1\n255\n0\n");
  EXPECT_THROW(read_pgm(p2), DataError);
}

}  // namespace
}  // namespace hothem::streetscape
