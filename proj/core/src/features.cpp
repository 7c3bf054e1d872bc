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

#include "hothem/features.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "hothem/error.hpp"
#include "hothem/raster_ops.hpp"
#include "hothem/util.hpp"

namespace hothem::features {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <std::size_t N>
void append(std::vector<std::string>& out, const std::array<std::string_view, N>& names) {
  for (auto n : names) out.emplace_back(n);
}

std::vector<std::string> deployment_names() {
  std::vector<std::string> n;
  append(n, kLandsatFeatures);
  append(n, kPalsarFeatures);
  append(n, kDsmFeatures);
  append(n, kLandcoverFeatures);
  return n;
}

std::vector<std::string> full_names() {
  auto n = deployment_names();
  append(n, kGsvFeatures);
  return n;
}

std::string format_value(double v) {
  return std::isnan(v) ? std::string() : util::format_sig(v, 9);
}

}  // namespace

FeatureSchema::FeatureSchema(std::vector<std::string> names) : names_(std::move(names)) {
  std::unordered_set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty()) throw ConfigError("feature schema contains an empty name");
    if (!seen.insert(n).second) throw ConfigError("feature schema repeats '" + n + "'");
  }
}

const FeatureSchema& FeatureSchema::deployment() {
  static const FeatureSchema schema(deployment_names());
  return schema;
}

const FeatureSchema& FeatureSchema::full() {
  static const FeatureSchema schema(full_names());
  return schema;
}

std::optional<std::size_t> FeatureSchema::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

std::vector<FeatureRow> extract_point_features(std::span<const PointRecord> points,
                                               const LayerSet& layers) {
  const auto& schema = FeatureSchema::deployment();
  const bool derive_ratio = !layers.contains("palsar_hv_hh_ratio");
  std::vector<std::string> missing;
  for (const auto& name : schema.names()) {
    if (name == "palsar_hv_hh_ratio" && derive_ratio) continue;
    if (!layers.contains(name)) missing.push_back(name);
  }
  if (!layers.contains(kTargetLayer)) missing.emplace_back(kTargetLayer);
  if (!missing.empty()) {
    std::string msg = "missing raster layers:";
    for (const auto& m : missing) msg += " " + m;
    throw ConfigError(msg);
  }

  // Resolve layer pointers once, in schema order.
  std::vector<const raster::Grid*> grids(schema.size(), nullptr);
  for (std::size_t f = 0; f < schema.size(); ++f) {
    auto it = layers.find(schema[f]);
    if (it != layers.end()) grids[f] = &it->second;
  }
  const raster::Grid& target = layers.find(kTargetLayer)->second;
  const std::size_t ratio_idx = *schema.index_of("palsar_hv_hh_ratio");
  const std::size_t hh_idx = *schema.index_of("palsar_hh_db");
  const std::size_t hv_idx = *schema.index_of("palsar_hv_db");
  const std::size_t lc_idx = *schema.index_of("landcover_class");

  std::vector<FeatureRow> rows(points.size());
  util::parallel_for(points.size(), [&](std::size_t p) {
    const auto& pt = points[p];
    FeatureRow row;
    row.point_id = pt.id;
    row.lon = pt.lon;
    row.lat = pt.lat;
    row.ward = pt.ward.empty() ? std::string(kNoWard) : pt.ward;
    row.values.assign(schema.size(), kNaN);
    for (std::size_t f = 0; f < schema.size(); ++f) {
      if (!grids[f]) continue;
      const auto method =
          f == lc_idx ? raster::SampleMethod::Nearest : raster::SampleMethod::Bilinear;
      row.values[f] = raster::sample(*grids[f], pt.lon, pt.lat, method).value_or(kNaN);
    }
    if (derive_ratio) row.values[ratio_idx] = row.values[hv_idx] - row.values[hh_idx];
    const auto t = raster::sample(target, pt.lon, pt.lat, raster::SampleMethod::Bilinear);
    if (t) row.target_lst = *t;
    rows[p] = std::move(row);
  });
  return rows;
}

std::array<double, 7> gsv_values(const streetscape::StreetscapeFeatures& f) {
  return {f.pct_vegetation, f.pct_sky,   f.pct_building,       f.pct_pavement_road,
          f.pct_water,      f.pct_vehicle_clutter, f.pct_other};
}

std::vector<FeatureRow> join_gsv(std::span<const FeatureRow> rows,
                                 std::span<const GsvRecord> gsv) {
  std::unordered_map<std::string, const GsvRecord*> by_id;
  for (const auto& rec : gsv) {
    if (!by_id.emplace(rec.point_id, &rec).second) {
      throw DataError("duplicate point_id '" + rec.point_id + "' in streetscape records");
    }
  }
  std::unordered_set<std::string> row_ids;
  for (const auto& row : rows) {
    if (!row_ids.insert(row.point_id).second) {
      throw DataError("duplicate point_id '" + row.point_id + "' in feature rows");
    }
  }
  const auto& deploy = FeatureSchema::deployment();
  std::vector<FeatureRow> out;
  for (const auto& row : rows) {
    auto it = by_id.find(row.point_id);
    if (it == by_id.end()) continue;
    if (row.values.size() != deploy.size()) {
      throw SchemaError("row '" + row.point_id + "' does not follow the deployment schema");
    }
    FeatureRow joined = row;
    for (double v : gsv_values(it->second->features)) joined.values.push_back(v);
    out.push_back(std::move(joined));
  }
  return out;
}

void write_table(std::span<const FeatureRow> rows, const FeatureSchema& schema,
                 std::ostream& out) {
  out << "point_id,lon,lat,ward";
  for (const auto& n : schema.names()) out << ',' << n;
  out << ",target_lst\n";
  for (const auto& row : rows) {
    if (row.values.size() != schema.size()) {
      throw SchemaError("row '" + row.point_id + "' has " + std::to_string(row.values.size()) +
                        " values, schema has " + std::to_string(schema.size()));
    }
    out << util::csv_escape(row.point_id) << ',' << util::format_sig(row.lon, 9) << ','
        << util::format_sig(row.lat, 9) << ',' << util::csv_escape(row.ward);
    for (double v : row.values) out << ',' << format_value(v);
    out << ',' << (row.target_lst ? util::format_sig(*row.target_lst, 9) : std::string())
        << '\n';
  }
}

void write_table(std::span<const FeatureRow> rows, const FeatureSchema& schema,
                 const std::filesystem::path& path) {
  std::ostringstream ss;
  write_table(rows, schema, ss);
  util::write_file(path, ss.str());
}

std::vector<FeatureRow> read_table(std::istream& in, const FeatureSchema& schema) {
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("feature table is empty (no header)");
  std::vector<std::string> expected{"point_id", "lon", "lat", "ward"};
  expected.insert(expected.end(), schema.names().begin(), schema.names().end());
  expected.emplace_back("target_lst");
  const auto header = util::parse_csv_line(line);
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const std::string got = i < header.size() ? std::string(util::trim(header[i])) : "<end>";
    if (got != expected[i]) {
      throw SchemaError("feature table column " + std::to_string(i + 1) + ": expected '" +
                        expected[i] + "', found '" + got + "'");
    }
  }
  if (header.size() > expected.size()) {
    throw SchemaError("feature table has unexpected extra column '" +
                      header[expected.size()] + "'");
  }

  std::vector<FeatureRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (util::trim(line).empty()) continue;
    const auto fields = util::parse_csv_line(line);
    if (fields.size() != expected.size()) {
      throw DataError("feature table line " + std::to_string(line_no) + ": expected " +
                      std::to_string(expected.size()) + " fields, found " +
                      std::to_string(fields.size()));
    }
    auto number = [&](const std::string& s, const char* what) {
      const auto v = util::parse_double(s);
      if (!v) {
        throw DataError("feature table line " + std::to_string(line_no) + ": bad " + what +
                        " '" + s + "'");
      }
      return *v;
    };
    FeatureRow row;
    row.point_id = fields[0];
    row.lon = number(fields[1], "lon");
    row.lat = number(fields[2], "lat");
    row.ward = fields[3].empty() ? std::string(kNoWard) : fields[3];
    row.values.reserve(schema.size());
    for (std::size_t f = 0; f < schema.size(); ++f) {
      const auto& s = fields[4 + f];
      row.values.push_back(util::trim(s).empty() ? kNaN : number(s, "value"));
    }
    const auto& t = fields.back();
    if (!util::trim(t).empty()) row.target_lst = number(t, "target_lst");
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<FeatureRow> read_table(const std::filesystem::path& path,
                                   const FeatureSchema& schema) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open feature table " + path.string());
  try {
    return read_table(in, schema);
  } catch (const SchemaError& e) {
    throw SchemaError(path.string() + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_gsv_table(std::span<const GsvRecord> records, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "point_id";
  for (auto n : kGsvFeatures) out << ',' << n;
  out << '\n';
  for (const auto& rec : records) {
    out << util::csv_escape(rec.point_id);
    for (double v : gsv_values(rec.features)) out << ',' << util::format_sig(v, 9);
    out << '\n';
  }
  util::write_file(path, out.str());
}

std::vector<GsvRecord> read_gsv_table(const std::filesystem::path& path) {
  std::istringstream in(util::read_file(path));
  std::string line;
  if (!std::getline(in, line)) throw SchemaError(path.string() + ": empty streetscape table");
  const auto header = util::parse_csv_line(line);
  if (header.size() != 1 + kGsvFeatures.size() || header[0] != "point_id") {
    throw SchemaError(path.string() + ": unexpected streetscape table header");
  }
  for (std::size_t i = 0; i < kGsvFeatures.size(); ++i) {
    if (header[i + 1] != kGsvFeatures[i]) {
      throw SchemaError(path.string() + ": expected column '" + std::string(kGsvFeatures[i]) +
                        "', found '" + header[i + 1] + "'");
    }
  }
  std::vector<GsvRecord> out;
  while (std::getline(in, line)) {
    if (util::trim(line).empty()) continue;
    const auto f = util::parse_csv_line(line);
    if (f.size() != header.size()) throw DataError(path.string() + ": bad field count");
    std::array<double, 7> v{};
    for (std::size_t i = 0; i < 7; ++i) {
      const auto d = util::parse_double(f[i + 1]);
      if (!d) throw DataError(path.string() + ": bad value '" + f[i + 1] + "'");
      v[i] = *d;
    }
    GsvRecord rec;
    rec.point_id = f[0];
    rec.features.pct_vegetation = v[0];
    rec.features.pct_sky = v[1];
    rec.features.pct_building = v[2];
    rec.features.pct_pavement_road = v[3];
    rec.features.pct_water = v[4];
    rec.features.pct_vehicle_clutter = v[5];
    rec.features.pct_other = v[6];
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<FeatureRow> with_target(std::span<const FeatureRow> rows) {
  std::vector<FeatureRow> out;
  for (const auto& r : rows) {
    if (r.target_lst) out.push_back(r);
  }
  return out;
}

}  // namespace hothem::features
