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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hothem/evaluation.hpp"
#include "hothem/features.hpp"
#include "hothem/gbt.hpp"
#include "hothem/raster_ops.hpp"
#include "hothem/routing.hpp"
#include "hothem/surface.hpp"

namespace hothem::pipeline {

struct InputPaths {
  // Landsat scenes; QA bands pair with the LST scenes by position and are
  // also applied to red/nir/emissivity scenes when their counts match.
  std::vector<std::filesystem::path> lst_scenes;
  std::vector<std::filesystem::path> qa_scenes;
  std::vector<std::filesystem::path> red_scenes;
  std::vector<std::filesystem::path> nir_scenes;
  std::vector<std::filesystem::path> emissivity_scenes;
  std::filesystem::path palsar_hh;
  std::filesystem::path palsar_hv;
  std::filesystem::path dsm;
  std::filesystem::path landcover;
  std::filesystem::path superclass_table;  // empty: built-in table
  std::filesystem::path gsv_index;         // point_id,lon,lat,label_path
  std::filesystem::path nodes;
  std::filesystem::path edges;
  std::filesystem::path wards;

  bool operator==(const InputPaths&) const = default;
};

struct RescaleParams {
  double lst_scale = 0.00341802;
  double lst_offset = 149.0;
  double reflectance_scale = 0.0000275;
  double reflectance_offset = -0.2;
  double emissivity_scale = 0.0001;
  double emissivity_offset = 0.0;
  double palsar_calibration_db = raster::kPalsarCalibrationDb;

  bool operator==(const RescaleParams&) const = default;
};

enum class EdgeLstSource { Nodes, Surface };

struct PipelineConfig {
  InputPaths inputs;
  RescaleParams rescale;
  int glcm_window = 5;
  int glcm_levels = 32;
  raster::SvfParams svf;
  gbt::TrainConfig train;
  std::string holdout_ward = "An Phu";
  surface::SurfaceSpec surface;
  routing::CostParams routing;
  EdgeLstSource edge_lst_source = EdgeLstSource::Nodes;
  std::filesystem::path output_dir;

  // Parameter ranges and the existence of every input path.
  void validate() const;
};

bool operator==(const PipelineConfig& a, const PipelineConfig& b);

// INI sections: inputs, rescale, glcm, svf, train, surface, routing,
// output. Relative paths are resolved against base_dir; list values are
// comma separated. Unknown keys are a ConfigError.
PipelineConfig parse_config(std::istream& in, const std::filesystem::path& base_dir);
PipelineConfig load_config(const std::filesystem::path& path);
// Writes absolute paths and shortest round-trip reals.
std::string format_config(const PipelineConfig& config);

// Output locations under config.output_dir.
struct OutputPaths {
  std::filesystem::path root;
  std::filesystem::path layers() const { return root / "layers"; }
  std::filesystem::path gsv_features() const { return root / "gsv_features.csv"; }
  std::filesystem::path train_deploy() const { return root / "train_deploy.csv"; }
  std::filesystem::path train_full() const { return root / "train_full.csv"; }
  std::filesystem::path node_features() const { return root / "node_features.csv"; }
  std::filesystem::path node_full() const { return root / "node_full.csv"; }
  std::filesystem::path full_model() const { return root / "models" / "full.model"; }
  std::filesystem::path deploy_model() const { return root / "models" / "deploy.model"; }
  std::filesystem::path importance() const { return root / "importance.csv"; }
  std::filesystem::path evaluation_text() const { return root / "evaluation.txt"; }
  std::filesystem::path evaluation_csv() const { return root / "evaluation.csv"; }
  std::filesystem::path predictions() const { return root / "predictions.csv"; }
  std::filesystem::path summary() const { return root / "summary.txt"; }
  std::filesystem::path surface() const { return root / "surface.asc"; }
};
OutputPaths outputs(const PipelineConfig& config);

// Raster preparation: composites, rescaling, indices, SAR texture and sky
// view factor, keyed by feature name plus the "lst" target.
features::LayerSet build_layers(const PipelineConfig& config);

struct FeatureStageResult {
  std::size_t gsv_points = 0;
  std::size_t gsv_missing = 0;  // index entries whose label map could not be read
  std::size_t training_rows = 0;
  std::size_t nodes = 0;
  std::size_t nodes_with_gsv = 0;
  std::vector<std::string> warnings;
};
FeatureStageResult run_features(const PipelineConfig& config);

struct TrainStageResult {
  eval::Metrics full_train;
  eval::Metrics deploy_train;
  std::size_t full_trees = 0;
  std::size_t deploy_trees = 0;
};
TrainStageResult run_train(const PipelineConfig& config);

eval::EvaluationReport run_evaluate(const PipelineConfig& config);

struct PredictStageResult {
  surface::NodeStats stats;
  surface::HeatBins bins;
};
PredictStageResult run_predict_nodes(const PipelineConfig& config);

raster::Grid run_surface(const PipelineConfig& config);

// Street graph with edge temperatures from the stored predictions (or the
// stored surface) and costs for the configured lambdas.
routing::Graph load_routing_graph(const PipelineConfig& config);

std::string format_node_summary(const PredictStageResult& result);

}  // namespace hothem::pipeline
