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

#include "hothem/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "hothem/error.hpp"
#include "hothem/grid.hpp"
#include "hothem/streetscape.hpp"
#include "hothem/util.hpp"

namespace hothem::pipeline {

namespace fs = std::filesystem;
using features::FeatureRow;
using features::FeatureSchema;

bool operator==(const PipelineConfig& a, const PipelineConfig& b) {
  auto train = [](const gbt::TrainConfig& t) {
    return std::tie(t.n_estimators, t.max_depth, t.learning_rate, t.subsample, t.colsample_bytree,
                    t.min_child_weight, t.reg_alpha, t.reg_lambda, t.early_stopping_rounds, t.seed);
  };
  auto surf = [](const surface::SurfaceSpec& s) {
    return std::tie(s.cell_size, s.pad_cells, s.blur_sigma, s.idw_power, s.idw_k);
  };
  auto extent_eq = [](const std::optional<surface::Extent>& x, const std::optional<surface::Extent>& y) {
    if (x.has_value() != y.has_value()) return false;
    if (!x) return true;
    return x->west == y->west && x->south == y->south && x->east == y->east && x->north == y->north;
  };
  return a.inputs == b.inputs && a.rescale == b.rescale && a.glcm_window == b.glcm_window &&
         a.glcm_levels == b.glcm_levels && a.svf.radius_m == b.svf.radius_m &&
         a.svf.azimuths == b.svf.azimuths && a.svf.meters_per_degree == b.svf.meters_per_degree &&
         train(a.train) == train(b.train) && a.holdout_ward == b.holdout_ward &&
         surf(a.surface) == surf(b.surface) && extent_eq(a.surface.extent, b.surface.extent) &&
         a.routing.lambda_cool == b.routing.lambda_cool &&
         a.routing.lambda_hot == b.routing.lambda_hot && a.edge_lst_source == b.edge_lst_source &&
         a.output_dir == b.output_dir;
}

namespace {

fs::path resolve(const fs::path& base, std::string_view value) {
  fs::path p{std::string(util::trim(value))};
  if (p.empty()) return p;
  if (p.is_relative()) p = base / p;
  return p.lexically_normal();
}

std::vector<fs::path> resolve_list(const fs::path& base, std::string_view value) {
  std::vector<fs::path> out;
  for (const auto& item : util::split(value, ',')) {
    if (!util::trim(item).empty()) out.push_back(resolve(base, item));
  }
  return out;
}

double to_real(const std::string& key, std::string_view v) {
  const auto d = util::parse_double(v);
  if (!d || !std::isfinite(*d)) throw ConfigError("config key '" + key + "': not a number: " + std::string(v));
  return *d;
}

long long to_int(const std::string& key, std::string_view v) {
  const auto d = util::parse_int(v);
  if (!d) throw ConfigError("config key '" + key + "': not an integer: " + std::string(v));
  return *d;
}

using Setter = std::function<void(PipelineConfig&, const std::string& key, const std::string& value,
                                  const fs::path& base)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto path_key = [&](const std::string& k, fs::path InputPaths::*member) {
      t["inputs." + k] = [member](PipelineConfig& c, const std::string&, const std::string& v,
                                  const fs::path& base) { c.inputs.*member = resolve(base, v); };
    };
    auto list_key = [&](const std::string& k, std::vector<fs::path> InputPaths::*member) {
      t["inputs." + k] = [member](PipelineConfig& c, const std::string&, const std::string& v,
                                  const fs::path& base) { c.inputs.*member = resolve_list(base, v); };
    };
    auto real_key = [&](const std::string& k, std::function<double&(PipelineConfig&)> field) {
      t[k] = [field](PipelineConfig& c, const std::string& key, const std::string& v,
                     const fs::path&) { field(c) = to_real(key, v); };
    };
    auto int_key = [&](const std::string& k, std::function<int&(PipelineConfig&)> field) {
      t[k] = [field](PipelineConfig& c, const std::string& key, const std::string& v,
                     const fs::path&) { field(c) = static_cast<int>(to_int(key, v)); };
    };
    list_key("lst_scenes", &InputPaths::lst_scenes);
    list_key("qa_scenes", &InputPaths::qa_scenes);
    list_key("red_scenes", &InputPaths::red_scenes);
    list_key("nir_scenes", &InputPaths::nir_scenes);
    list_key("emissivity_scenes", &InputPaths::emissivity_scenes);
    path_key("palsar_hh", &InputPaths::palsar_hh);
    path_key("palsar_hv", &InputPaths::palsar_hv);
    path_key("dsm", &InputPaths::dsm);
    path_key("landcover", &InputPaths::landcover);
    path_key("superclass_table", &InputPaths::superclass_table);
    path_key("gsv_index", &InputPaths::gsv_index);
    path_key("nodes", &InputPaths::nodes);
    path_key("edges", &InputPaths::edges);
    path_key("wards", &InputPaths::wards);

    real_key("rescale.lst_scale", [](PipelineConfig& c) -> double& { return c.rescale.lst_scale; });
    real_key("rescale.lst_offset", [](PipelineConfig& c) -> double& { return c.rescale.lst_offset; });
    real_key("rescale.reflectance_scale",
             [](PipelineConfig& c) -> double& { return c.rescale.reflectance_scale; });
    real_key("rescale.reflectance_offset",
             [](PipelineConfig& c) -> double& { return c.rescale.reflectance_offset; });
    real_key("rescale.emissivity_scale",
             [](PipelineConfig& c) -> double& { return c.rescale.emissivity_scale; });
    real_key("rescale.emissivity_offset",
             [](PipelineConfig& c) -> double& { return c.rescale.emissivity_offset; });
    real_key("rescale.palsar_calibration_db",
             [](PipelineConfig& c) -> double& { return c.rescale.palsar_calibration_db; });

    int_key("glcm.window", [](PipelineConfig& c) -> int& { return c.glcm_window; });
    int_key("glcm.levels", [](PipelineConfig& c) -> int& { return c.glcm_levels; });
    real_key("svf.radius_m", [](PipelineConfig& c) -> double& { return c.svf.radius_m; });
    int_key("svf.azimuths", [](PipelineConfig& c) -> int& { return c.svf.azimuths; });
    real_key("svf.meters_per_degree",
             [](PipelineConfig& c) -> double& { return c.svf.meters_per_degree; });

    int_key("train.n_estimators", [](PipelineConfig& c) -> int& { return c.train.n_estimators; });
    int_key("train.max_depth", [](PipelineConfig& c) -> int& { return c.train.max_depth; });
    real_key("train.learning_rate", [](PipelineConfig& c) -> double& { return c.train.learning_rate; });
    real_key("train.subsample", [](PipelineConfig& c) -> double& { return c.train.subsample; });
    real_key("train.colsample_bytree",
             [](PipelineConfig& c) -> double& { return c.train.colsample_bytree; });
    real_key("train.min_child_weight",
             [](PipelineConfig& c) -> double& { return c.train.min_child_weight; });
    real_key("train.reg_alpha", [](PipelineConfig& c) -> double& { return c.train.reg_alpha; });
    real_key("train.reg_lambda", [](PipelineConfig& c) -> double& { return c.train.reg_lambda; });
    int_key("train.early_stopping_rounds",
            [](PipelineConfig& c) -> int& { return c.train.early_stopping_rounds; });
    t["train.seed"] = [](PipelineConfig& c, const std::string& key, const std::string& v,
                         const fs::path&) {
      const auto s = util::parse_int(v);
      if (!s || *s < 0) throw ConfigError("config key '" + key + "': bad seed " + v);
      c.train.seed = static_cast<std::uint64_t>(*s);
    };
    t["train.holdout_ward"] = [](PipelineConfig& c, const std::string&, const std::string& v,
                                 const fs::path&) { c.holdout_ward = std::string(util::trim(v)); };

    real_key("surface.cell_size", [](PipelineConfig& c) -> double& { return c.surface.cell_size; });
    real_key("surface.blur_sigma", [](PipelineConfig& c) -> double& { return c.surface.blur_sigma; });
    real_key("surface.idw_power", [](PipelineConfig& c) -> double& { return c.surface.idw_power; });
    int_key("surface.idw_k", [](PipelineConfig& c) -> int& { return c.surface.idw_k; });
    int_key("surface.pad_cells", [](PipelineConfig& c) -> int& { return c.surface.pad_cells; });
    t["surface.extent"] = [](PipelineConfig& c, const std::string& key, const std::string& v,
                             const fs::path&) {
      if (util::trim(v).empty()) {
        c.surface.extent.reset();
        return;
      }
      const auto parts = util::split(v, ',');
      if (parts.size() != 4) throw ConfigError("config key '" + key + "': expected west,south,east,north");
      c.surface.extent = surface::Extent{to_real(key, parts[0]), to_real(key, parts[1]),
                                         to_real(key, parts[2]), to_real(key, parts[3])};
    };

    real_key("routing.lambda_cool", [](PipelineConfig& c) -> double& { return c.routing.lambda_cool; });
    real_key("routing.lambda_hot", [](PipelineConfig& c) -> double& { return c.routing.lambda_hot; });
    t["routing.edge_lst_source"] = [](PipelineConfig& c, const std::string& key,
                                      const std::string& v, const fs::path&) {
      const auto s = util::trim(v);
      if (s == "nodes") {
        c.edge_lst_source = EdgeLstSource::Nodes;
      } else if (s == "surface") {
        c.edge_lst_source = EdgeLstSource::Surface;
      } else {
        throw ConfigError("config key '" + key + "': expected nodes or surface");
      }
    };
    t["output.dir"] = [](PipelineConfig& c, const std::string&, const std::string& v,
                         const fs::path& base) { c.output_dir = resolve(base, v); };
    return t;
  }();
  return table;
}

void require_file(const fs::path& p, const char* key) {
  if (p.empty()) throw ConfigError(std::string("config: inputs.") + key + " is not set");
  if (!fs::exists(p)) throw ConfigError(std::string("config: inputs.") + key + " does not exist: " + p.string());
}

void require_files(const std::vector<fs::path>& ps, const char* key) {
  if (ps.empty()) throw ConfigError(std::string("config: inputs.") + key + " is empty");
  for (const auto& p : ps) require_file(p, key);
}

}  // namespace

void PipelineConfig::validate() const {
  require_files(inputs.lst_scenes, "lst_scenes");
  require_files(inputs.red_scenes, "red_scenes");
  require_files(inputs.nir_scenes, "nir_scenes");
  require_files(inputs.emissivity_scenes, "emissivity_scenes");
  for (const auto& p : inputs.qa_scenes) require_file(p, "qa_scenes");
  if (!inputs.qa_scenes.empty() && inputs.qa_scenes.size() != inputs.lst_scenes.size()) {
    throw ConfigError("config: qa_scenes must pair one-to-one with lst_scenes");
  }
  require_file(inputs.palsar_hh, "palsar_hh");
  require_file(inputs.palsar_hv, "palsar_hv");
  require_file(inputs.dsm, "dsm");
  require_file(inputs.landcover, "landcover");
  if (!inputs.superclass_table.empty()) require_file(inputs.superclass_table, "superclass_table");
  require_file(inputs.gsv_index, "gsv_index");
  require_file(inputs.nodes, "nodes");
  require_file(inputs.edges, "edges");
  require_file(inputs.wards, "wards");
  if (glcm_window < 3 || glcm_window % 2 == 0) throw ConfigError("config: glcm.window must be odd and >= 3");
  if (glcm_levels < 2) throw ConfigError("config: glcm.levels must be >= 2");
  if (!(svf.radius_m > 0.0) || svf.azimuths < 1 || !(svf.meters_per_degree > 0.0)) {
    throw ConfigError("config: svf parameters must be positive");
  }
  train.validate();
  surface.validate();
  routing.validate();
  if (output_dir.empty()) throw ConfigError("config: output.dir is not set");
}

PipelineConfig parse_config(std::istream& in, const fs::path& base_dir) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  PipelineConfig c;
  const auto& table = setters();
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ConfigError("config: key '" + section + "' outside a section");
    }
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      const auto it = table.find(full);
      if (it == table.end()) throw ConfigError("config: unknown key '" + full + "'");
      it->second(c, full, value.data(), base_dir);
    }
  }
  return c;
}

PipelineConfig load_config(const fs::path& path) {
  std::istringstream in;
  try {
    in.str(util::read_file(path));
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  auto base = fs::absolute(path).parent_path();
  return parse_config(in, base);
}

std::string format_config(const PipelineConfig& c) {
  std::ostringstream out;
  auto list = [](const std::vector<fs::path>& ps) {
    std::string s;
    for (const auto& p : ps) s += (s.empty() ? "" : ",") + fs::absolute(p).lexically_normal().string();
    return s;
  };
  auto path = [](const fs::path& p) {
    return p.empty() ? std::string() : fs::absolute(p).lexically_normal().string();
  };
  auto r = [](double v) { return util::format_exact(v); };
  const auto& i = c.inputs;
  out << "[inputs]\n"
      << "lst_scenes = " << list(i.lst_scenes) << '\n'
      << "qa_scenes = " << list(i.qa_scenes) << '\n'
      << "red_scenes = " << list(i.red_scenes) << '\n'
      << "nir_scenes = " << list(i.nir_scenes) << '\n'
      << "emissivity_scenes = " << list(i.emissivity_scenes) << '\n'
      << "palsar_hh = " << path(i.palsar_hh) << '\n'
      << "palsar_hv = " << path(i.palsar_hv) << '\n'
      << "dsm = " << path(i.dsm) << '\n'
      << "landcover = " << path(i.landcover) << '\n'
      << "superclass_table = " << path(i.superclass_table) << '\n'
      << "gsv_index = " << path(i.gsv_index) << '\n'
      << "nodes = " << path(i.nodes) << '\n'
      << "edges = " << path(i.edges) << '\n'
      << "wards = " << path(i.wards) << "\n\n";
  out << "[rescale]\n"
      << "lst_scale = " << r(c.rescale.lst_scale) << '\n'
      << "lst_offset = " << r(c.rescale.lst_offset) << '\n'
      << "reflectance_scale = " << r(c.rescale.reflectance_scale) << '\n'
      << "reflectance_offset = " << r(c.rescale.reflectance_offset) << '\n'
      << "emissivity_scale = " << r(c.rescale.emissivity_scale) << '\n'
      << "emissivity_offset = " << r(c.rescale.emissivity_offset) << '\n'
      << "palsar_calibration_db = " << r(c.rescale.palsar_calibration_db) << "\n\n";
  out << "[glcm]\nwindow = " << c.glcm_window << "\nlevels = " << c.glcm_levels << "\n\n";
  out << "[svf]\nradius_m = " << r(c.svf.radius_m) << "\nazimuths = " << c.svf.azimuths
      << "\nmeters_per_degree = " << r(c.svf.meters_per_degree) << "\n\n";
  const auto& t = c.train;
  out << "[train]\n"
      << "n_estimators = " << t.n_estimators << '\n'
      << "max_depth = " << t.max_depth << '\n'
      << "learning_rate = " << r(t.learning_rate) << '\n'
      << "subsample = " << r(t.subsample) << '\n'
      << "colsample_bytree = " << r(t.colsample_bytree) << '\n'
      << "min_child_weight = " << r(t.min_child_weight) << '\n'
      << "reg_alpha = " << r(t.reg_alpha) << '\n'
      << "reg_lambda = " << r(t.reg_lambda) << '\n'
      << "early_stopping_rounds = " << t.early_stopping_rounds << '\n'
      << "seed = " << t.seed << '\n'
      << "holdout_ward = " << c.holdout_ward << "\n\n";
  const auto& s = c.surface;
  out << "[surface]\n"
      << "cell_size = " << r(s.cell_size) << '\n'
      << "blur_sigma = " << r(s.blur_sigma) << '\n'
      << "idw_power = " << r(s.idw_power) << '\n'
      << "idw_k = " << s.idw_k << '\n'
      << "pad_cells = " << s.pad_cells << '\n'
      << "extent = ";
  if (s.extent) {
    out << r(s.extent->west) << ',' << r(s.extent->south) << ',' << r(s.extent->east) << ','
        << r(s.extent->north);
  }
  out << "\n\n[routing]\n"
      << "lambda_cool = " << r(c.routing.lambda_cool) << '\n'
      << "lambda_hot = " << r(c.routing.lambda_hot) << '\n'
      << "edge_lst_source = " << (c.edge_lst_source == EdgeLstSource::Nodes ? "nodes" : "surface")
      << "\n\n[output]\ndir = " << path(c.output_dir) << '\n';
  return out.str();
}

OutputPaths outputs(const PipelineConfig& config) { return {config.output_dir}; }

namespace {

raster::GridStack read_stack(const std::vector<fs::path>& paths) {
  raster::GridStack stack;
  for (const auto& p : paths) stack.add(p.filename().string(), raster::read_ascii_grid(p));
  return stack;
}

raster::Grid masked_composite(const raster::GridStack& scenes, const raster::GridStack& qa,
                              raster::CompositeStat stat) {
  if (!qa.empty() && qa.size() == scenes.size()) return raster::composite(scenes, qa, stat);
  return raster::composite(scenes, stat);
}

}  // namespace

features::LayerSet build_layers(const PipelineConfig& config) {
  const auto& in = config.inputs;
  const auto& rs = config.rescale;
  const auto qa = read_stack(in.qa_scenes);
  features::LayerSet layers;

  const auto lst_dn = masked_composite(read_stack(in.lst_scenes), qa, raster::CompositeStat::Max);
  layers.emplace(std::string(features::kTargetLayer),
                 raster::kelvin_to_celsius(raster::linear_rescale(lst_dn, rs.lst_scale, rs.lst_offset)));

  const auto red = raster::linear_rescale(
      masked_composite(read_stack(in.red_scenes), qa, raster::CompositeStat::Mean),
      rs.reflectance_scale, rs.reflectance_offset);
  const auto nir = raster::linear_rescale(
      masked_composite(read_stack(in.nir_scenes), qa, raster::CompositeStat::Mean),
      rs.reflectance_scale, rs.reflectance_offset);
  layers.emplace("ndvi", raster::ndvi(red, nir));
  layers.emplace("emissivity",
                 raster::linear_rescale(
                     masked_composite(read_stack(in.emissivity_scenes), qa, raster::CompositeStat::Mean),
                     rs.emissivity_scale, rs.emissivity_offset));

  const auto hh = raster::sar_dn_to_db(raster::read_ascii_grid(in.palsar_hh), rs.palsar_calibration_db);
  const auto hv = raster::sar_dn_to_db(raster::read_ascii_grid(in.palsar_hv), rs.palsar_calibration_db);
  raster::GlcmParams glcm;
  glcm.window = config.glcm_window;
  glcm.levels = config.glcm_levels;
  auto textures = raster::glcm_features(hh, glcm);
  layers.emplace("palsar_hv_hh_ratio", raster::difference(hv, hh));
  layers.emplace("palsar_hh_db", hh);
  layers.emplace("palsar_hv_db", hv);
  layers.emplace("palsar_glcm_contrast", std::move(textures.contrast));
  layers.emplace("palsar_glcm_homogeneity", std::move(textures.homogeneity));
  layers.emplace("palsar_glcm_energy", std::move(textures.energy));

  auto dsm = raster::read_ascii_grid(in.dsm);
  layers.emplace("sky_view_factor", raster::sky_view_factor(dsm, config.svf));
  layers.emplace("elevation_m", std::move(dsm));
  layers.emplace("landcover_class", raster::read_ascii_grid(in.landcover));

  for (const auto& [name, grid] : layers) {
    raster::write_ascii_grid(grid, outputs(config).layers() / (name + ".asc"));
  }
  return layers;
}

namespace {

struct GsvIndexEntry {
  std::string point_id;
  double lon;
  double lat;
  fs::path label_path;
};

std::vector<GsvIndexEntry> read_gsv_index(const fs::path& path) {
  std::istringstream in(util::read_file(path));
  std::string line;
  if (!std::getline(in, line) || util::trim(line) != "point_id,lon,lat,label_path") {
    throw SchemaError(path.string() + ": expected header point_id,lon,lat,label_path");
  }
  std::vector<GsvIndexEntry> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (util::trim(line).empty()) continue;
    const auto f = util::parse_csv_line(util::trim(line));
    const auto lon = f.size() == 4 ? util::parse_double(f[1]) : std::nullopt;
    const auto lat = f.size() == 4 ? util::parse_double(f[2]) : std::nullopt;
    if (!lon || !lat) throw DataError(path.string() + " line " + std::to_string(line_no) + ": malformed row");
    out.push_back({f[0], *lon, *lat, resolve(path.parent_path(), f[3])});
  }
  return out;
}

std::string ward_of(double lon, double lat, const std::vector<surface::WardPolygon>& wards) {
  auto w = surface::point_in_ward(lon, lat, wards);
  return w ? *w : std::string(features::kNoWard);
}

}  // namespace

FeatureStageResult run_features(const PipelineConfig& config) {
  FeatureStageResult result;
  const auto out = outputs(config);
  const auto layers = build_layers(config);
  const auto wards = surface::read_wards(config.inputs.wards);
  const auto superclasses = config.inputs.superclass_table.empty()
                                ? streetscape::mapillary_superclass_map()
                                : streetscape::read_superclass_table(config.inputs.superclass_table);

  const auto index = read_gsv_index(config.inputs.gsv_index);
  std::vector<std::optional<streetscape::StreetscapeFeatures>> decoded(index.size());
  std::vector<std::string> errors(index.size());
  util::parallel_for(index.size(), [&](std::size_t i) {
    try {
      const auto labels = streetscape::read_pgm(index[i].label_path);
      decoded[i] = streetscape::class_percentages(streetscape::remap(labels, superclasses));
    } catch (const DataError& e) {
      errors[i] = e.what();
    }
  }, 4);

  std::vector<features::GsvRecord> records;
  std::vector<features::PointRecord> gsv_points;
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (!decoded[i]) {
      ++result.gsv_missing;
      result.warnings.push_back("skipping GSV point " + index[i].point_id + ": " + errors[i]);
      continue;
    }
    records.push_back({index[i].point_id, *decoded[i]});
    gsv_points.push_back({index[i].point_id, index[i].lon, index[i].lat,
                          ward_of(index[i].lon, index[i].lat, wards)});
  }
  result.gsv_points = records.size();
  features::write_gsv_table(records, out.gsv_features());

  auto train_rows = features::with_target(features::extract_point_features(gsv_points, layers));
  if (train_rows.size() < gsv_points.size()) {
    result.warnings.push_back(std::to_string(gsv_points.size() - train_rows.size()) +
                              " GSV point(s) have no LST value and were dropped");
  }
  const auto train_full = features::join_gsv(train_rows, records);
  result.training_rows = train_rows.size();
  features::write_table(train_rows, FeatureSchema::deployment(), out.train_deploy());
  features::write_table(train_full, FeatureSchema::full(), out.train_full());

  const auto graph = routing::read_graph(config.inputs.nodes, config.inputs.edges);
  std::vector<features::PointRecord> node_points;
  for (const auto& n : graph.nodes()) {
    node_points.push_back({std::to_string(n.id), n.lon, n.lat, ward_of(n.lon, n.lat, wards)});
  }
  const auto node_rows = features::extract_point_features(node_points, layers);
  const auto node_full = features::join_gsv(node_rows, records);
  result.nodes = node_rows.size();
  result.nodes_with_gsv = node_full.size();
  features::write_table(node_rows, FeatureSchema::deployment(), out.node_features());
  features::write_table(node_full, FeatureSchema::full(), out.node_full());
  return result;
}

namespace {

struct SplitRows {
  std::vector<FeatureRow> train;
  std::vector<FeatureRow> holdout;
};

SplitRows split_holdout(std::vector<FeatureRow> rows, const std::string& holdout_ward) {
  SplitRows s;
  for (auto& r : rows) (r.ward == holdout_ward ? s.holdout : s.train).push_back(std::move(r));
  return s;
}

eval::Metrics fit_metrics(const gbt::GBTModel& model, const std::vector<FeatureRow>& rows) {
  return eval::holdout_eval(model, rows);
}

}  // namespace

TrainStageResult run_train(const PipelineConfig& config) {
  const auto out = outputs(config);
  const auto full = split_holdout(features::read_table(out.train_full(), FeatureSchema::full()),
                                  config.holdout_ward);
  const auto deploy = split_holdout(
      features::read_table(out.train_deploy(), FeatureSchema::deployment()), config.holdout_ward);

  const auto full_model =
      gbt::train_with_early_stopping(full.train, FeatureSchema::full(), config.train, config.train.seed);
  const auto deploy_model = gbt::train_with_early_stopping(deploy.train, FeatureSchema::deployment(),
                                                           config.train, config.train.seed);
  gbt::save_model(full_model, out.full_model());
  gbt::save_model(deploy_model, out.deploy_model());

  std::ostringstream imp;
  imp << "model,feature,gain_share\n";
  for (const auto& [name, model] : {std::pair{"full", &full_model}, std::pair{"deployment", &deploy_model}}) {
    const auto fi = gbt::feature_importance(*model);
    for (const auto& [feature, w] : fi.weights) {
      imp << name << ',' << feature << ',' << util::format_sig(w, 9) << '\n';
    }
  }
  util::write_file(out.importance(), imp.str());

  TrainStageResult r;
  r.full_train = fit_metrics(full_model, full.train);
  r.deploy_train = fit_metrics(deploy_model, deploy.train);
  r.full_trees = full_model.best_iteration();
  r.deploy_trees = deploy_model.best_iteration();
  return r;
}

eval::EvaluationReport run_evaluate(const PipelineConfig& config) {
  const auto out = outputs(config);
  const auto full = split_holdout(features::read_table(out.train_full(), FeatureSchema::full()),
                                  config.holdout_ward);
  const auto deploy = split_holdout(
      features::read_table(out.train_deploy(), FeatureSchema::deployment()), config.holdout_ward);
  if (full.holdout.empty() || deploy.holdout.empty()) {
    throw DataError("no rows in holdout ward '" + config.holdout_ward + "'");
  }
  const auto full_model = gbt::load_model(out.full_model());
  const auto deploy_model = gbt::load_model(out.deploy_model());

  eval::EvaluationReport report;
  report.holdout_ward = config.holdout_ward;
  report.full_cv = eval::spatial_cv(full.train, FeatureSchema::full(), config.train);
  report.deploy_cv = eval::spatial_cv(deploy.train, FeatureSchema::deployment(), config.train);
  report.full = eval::scores(fit_metrics(full_model, full.train), report.full_cv,
                             eval::holdout_eval(full_model, full.holdout));
  report.deploy = eval::scores(fit_metrics(deploy_model, deploy.train), report.deploy_cv,
                               eval::holdout_eval(deploy_model, deploy.holdout));
  report.comparison = eval::comparison_report(report.full, report.deploy);
  report.full_train_rows = full.train.size();
  report.deploy_train_rows = deploy.train.size();
  report.holdout_rows = full.holdout.size();
  util::write_file(out.evaluation_text(), eval::format_report_text(report));
  util::write_file(out.evaluation_csv(), eval::format_report_csv(report));
  return report;
}

std::string format_node_summary(const PredictStageResult& r) {
  std::ostringstream out;
  const auto& s = r.stats;
  out << "Node predictions: " << s.n << " (full model " << s.full << ", deployment model "
      << s.deployment << ")\n";
  out << "Minimum   Mean      Maximum   Standard Deviation\n";
  auto c = [](double v) {
    std::string t = util::format_fixed(v, 2) + " C";
    t.resize(10, ' ');
    return t;
  };
  out << c(s.min) << c(s.mean) << c(s.max) << util::format_fixed(s.std, 2) << " C\n";
  out << "Heat category upper edges (quintiles):";
  for (double e : r.bins.edges) out << ' ' << util::format_fixed(e, 2);
  out << (r.bins.degenerate ? " (degenerate)" : "") << '\n';
  std::array<std::size_t, 5> counts{};
  for (auto cat : r.bins.categories) ++counts[static_cast<int>(cat)];
  for (int k = 0; k < 5; ++k) {
    out << "  " << surface::heat_category_name(static_cast<surface::HeatCategory>(k)) << ": "
        << counts[k] << '\n';
  }
  return out.str();
}

PredictStageResult run_predict_nodes(const PipelineConfig& config) {
  const auto out = outputs(config);
  const auto nodes = features::read_table(out.node_features(), FeatureSchema::deployment());
  const auto full_rows = features::read_table(out.node_full(), FeatureSchema::full());
  const auto full_model = gbt::load_model(out.full_model());
  const auto deploy_model = gbt::load_model(out.deploy_model());
  const auto wards = surface::read_wards(config.inputs.wards);
  auto preds = surface::patchwork_predict(nodes, full_rows, full_model, deploy_model, wards);
  PredictStageResult r;
  r.stats = surface::summarize(preds);
  r.bins = surface::categorize_heat(preds);
  surface::apply_categories(preds, r.bins);
  surface::write_predictions(preds, out.predictions());
  util::write_file(out.summary(), format_node_summary(r));
  return r;
}

raster::Grid run_surface(const PipelineConfig& config) {
  const auto out = outputs(config);
  const auto preds = surface::read_predictions(out.predictions());
  auto grid = surface::build_surface(preds, config.surface);
  raster::write_ascii_grid(grid, out.surface());
  return grid;
}

routing::Graph load_routing_graph(const PipelineConfig& config) {
  const auto out = outputs(config);
  auto graph = routing::read_graph(config.inputs.nodes, config.inputs.edges);
  if (config.edge_lst_source == EdgeLstSource::Nodes) {
    graph = routing::edge_lst_from_nodes(graph, surface::read_predictions(out.predictions()));
  } else {
    graph = routing::edge_lst_from_surface(graph, raster::read_ascii_grid(out.surface()));
  }
  return routing::assign_costs(graph, config.routing);
}

}  // namespace hothem::pipeline
