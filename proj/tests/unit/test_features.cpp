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
#include "hothem/features.hpp"
#include "test_support.hpp"

namespace hothem::features {
namespace {

TEST(FeatureSchema, DeploymentAndFullShapes) {
  EXPECT_EQ(FeatureSchema::deployment().size(), 11u);
  EXPECT_EQ(FeatureSchema::full().size(), 18u);
  for (std::size_t i = 0; i < 11; ++i) EXPECT_EQ(FeatureSchema::full()[i], FeatureSchema::deployment()[i]);
  EXPECT_EQ(FeatureSchema::full()[11], "pct_vegetation");
  EXPECT_FALSE(FeatureSchema::deployment().index_of("pct_sky"));
  EXPECT_THROW(FeatureSchema({"a", "a"}), ConfigError);
}

LayerSet flat_layers(const raster::GridGeometry& g) {
  LayerSet layers;
  double v = 1.0;
  for (const auto& name : FeatureSchema::deployment().names()) {
    if (name == "palsar_hv_hh_ratio") continue;
    layers.emplace(name, raster::Grid(g, std::vector<double>(g.cell_count(), v)));
    v += 1.0;
  }
  layers.emplace(std::string(kTargetLayer), raster::Grid(g, std::vector<double>(g.cell_count(), 35.0)));
  return layers;
}

TEST(ExtractPointFeatures, SamplesEveryLayerAndDerivesRatio) {
  const raster::GridGeometry g{10, 10, 106.7, 10.7, 0.001};
  const auto layers = flat_layers(g);
  const std::vector<PointRecord> pts{{"a", 106.705, 10.705, "X"}, {"out", 100.0, 10.0, ""}};
  const auto rows = extract_point_features(pts, layers);
  ASSERT_EQ(rows.size(), 2u);
  const auto& s = FeatureSchema::deployment();
  EXPECT_EQ(rows[0].ward, "X");
  EXPECT_DOUBLE_EQ(*rows[0].target_lst, 35.0);
  const double hh = rows[0].values[*s.index_of("palsar_hh_db")];
  const double hv = rows[0].values[*s.index_of("palsar_hv_db")];
  EXPECT_DOUBLE_EQ(rows[0].values[*s.index_of("palsar_hv_hh_ratio")], hv - hh);
  for (double v : rows[0].values) EXPECT_TRUE(std::isfinite(v));
  EXPECT_EQ(rows[1].ward, std::string(kNoWard));
  EXPECT_FALSE(rows[1].target_lst);
  for (double v : rows[1].values) EXPECT_TRUE(std::isnan(v));
  EXPECT_EQ(with_target(rows).size(), 1u);
}

TEST(ExtractPointFeatures, MissingLayerIsConfigError) {
  const raster::GridGeometry g{4, 4, 0.0, 0.0, 1.0};
  auto layers = flat_layers(g);
  layers.erase("sky_view_factor");
  const std::vector<PointRecord> pts{{"a", 1.5, 1.5, ""}};
  try {
    extract_point_features(pts, layers);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("sky_view_factor"), std::string::npos);
  }
}

FeatureRow deploy_row(const std::string& id, double base) {
  FeatureRow r;
  r.point_id = id;
  for (int i = 0; i < 11; ++i) r.values.push_back(base + i);
  r.target_lst = base;
  return r;
}

TEST(JoinGsv, InnerJoinAppendsSevenColumns) {
  const std::vector<FeatureRow> rows{deploy_row("a", 1), deploy_row("b", 2), deploy_row("c", 3)};
  streetscape::StreetscapeFeatures f;
  f.pct_vegetation = 0.25;
  f.pct_other = 0.75;
  const std::vector<GsvRecord> gsv{{"c", f}, {"a", f}, {"zz", f}};
  const auto joined = join_gsv(rows, gsv);
  ASSERT_EQ(joined.size(), 2u);
  EXPECT_EQ(joined[0].point_id, "a");
  EXPECT_EQ(joined[1].point_id, "c");
  EXPECT_EQ(joined[0].values.size(), 18u);
  EXPECT_DOUBLE_EQ(joined[0].values[*FeatureSchema::full().index_of("pct_vegetation")], 0.25);
  EXPECT_DOUBLE_EQ(joined[0].values[*FeatureSchema::full().index_of("pct_other")], 0.75);
  for (std::size_t i = 0; i < 11; ++i) EXPECT_EQ(joined[1].values[i], rows[2].values[i]);
}

TEST(JoinGsv, DuplicatesAndWrongWidthRejected) {
  streetscape::StreetscapeFeatures f;
  const std::vector<FeatureRow> rows{deploy_row("a", 1)};
  EXPECT_THROW(join_gsv(rows, std::vector<GsvRecord>{{"a", f}, {"a", f}}), DataError);
  auto bad = rows;
  bad[0].values.pop_back();
  EXPECT_THROW(join_gsv(bad, std::vector<GsvRecord>{{"a", f}}), SchemaError);
}

TEST(FeatureTable, RoundTripKeepsMissingValues) {
  util::Rng rng(3);
  std::vector<FeatureRow> rows;
  for (int i = 0; i < 20; ++i) {
    auto r = deploy_row("p" + std::to_string(i), rng.uniform(20, 40));
    r.lon = rng.uniform(106, 107);
    r.lat = rng.uniform(10, 11);
    r.ward = i % 2 ? "Da Kao" : std::string(kNoWard);
    if (i % 5 == 0) r.values[3] = std::nan("");
    if (i % 7 == 0) r.target_lst.reset();
    rows.push_back(r);
  }
  std::ostringstream a;
  write_table(rows, FeatureSchema::deployment(), a);
  std::istringstream in(a.str());
  const auto back = read_table(in, FeatureSchema::deployment());
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(back[i].point_id, rows[i].point_id);
    EXPECT_EQ(back[i].ward, rows[i].ward);
    EXPECT_NEAR(back[i].lon, rows[i].lon, 1e-6);
    ASSERT_EQ(back[i].target_lst.has_value(), rows[i].target_lst.has_value());
    if (rows[i].target_lst) EXPECT_NEAR(*back[i].target_lst, *rows[i].target_lst, 1e-7);
    for (std::size_t k = 0; k < 11; ++k) {
      if (std::isnan(rows[i].values[k])) {
        EXPECT_TRUE(std::isnan(back[i].values[k]));
      } else {
        EXPECT_NEAR(back[i].values[k], rows[i].values[k], 1e-7);
      }
    }
  }
  std::ostringstream b;
  write_table(back, FeatureSchema::deployment(), b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(FeatureTable, HeaderMismatchIsSchemaError) {
  std::ostringstream a;
  const std::vector<FeatureRow> rows{deploy_row("a", 1)};
  write_table(rows, FeatureSchema::deployment(), a);
  std::istringstream in(a.str());
  EXPECT_THROW(read_table(in, FeatureSchema::full()), SchemaError);
  std::ostringstream sink;
  EXPECT_THROW(write_table(rows, FeatureSchema::full(), sink), SchemaError);
}

}  // namespace
}  // namespace hothem::features
