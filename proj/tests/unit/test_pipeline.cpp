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

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "hothem/error.hpp"
#include "hothem/pipeline.hpp"
#include "hothem/synthetic_city.hpp"
#include "test_support.hpp"

namespace hothem::pipeline {
namespace {

PipelineConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "/data");
}

TEST(Config, DefaultsAndRelativePaths) {
  const auto c = parse(
      "[inputs]\nlst_scenes = a.asc, b.asc\nnodes = net/nodes.csv\n"
      "[train]\nn_estimators = 12\nholdout_ward = Ben Thanh\n"
      "[routing]\n; comment\nlambda_cool = 4\nedge_lst_source = surface\n"
      "# comment\n[output]\ndir = out\n");
  ASSERT_EQ(c.inputs.lst_scenes.size(), 2u);
  EXPECT_EQ(c.inputs.lst_scenes[1], std::filesystem::path("/data/b.asc"));
  EXPECT_EQ(c.inputs.nodes, std::filesystem::path("/data/net/nodes.csv"));
  EXPECT_EQ(c.train.n_estimators, 12);
  EXPECT_EQ(c.train.max_depth, 5);
  EXPECT_EQ(c.holdout_ward, "Ben Thanh");
  EXPECT_EQ(c.routing.lambda_cool, 4.0);
  EXPECT_EQ(c.routing.lambda_hot, 10.0);
  EXPECT_EQ(c.edge_lst_source, EdgeLstSource::Surface);
  EXPECT_EQ(c.output_dir, std::filesystem::path("/data/out"));
  EXPECT_EQ(c.surface.blur_sigma, 4.0);
  EXPECT_EQ(c.glcm_window, 5);
}

TEST(Config, FormatParsesBackEqual) {
  auto c = parse("[inputs]\nlst_scenes = x.asc\n[output]\ndir = o\n");
  c.train.learning_rate = 0.1 + 0.2;
  c.surface.extent = surface::Extent{106.6, 10.7, 106.8, 10.9};
  c.svf.radius_m = 75.5;
  const auto text = format_config(c);
  std::istringstream in(text);
  const auto back = parse_config(in, "/elsewhere");
  EXPECT_TRUE(back == c);
  EXPECT_EQ(format_config(back), text);
}

TEST(Config, ErrorsAreConfigErrors) {
  EXPECT_THROW(parse("[train]\nn_estimatorz = 3\n"), ConfigError);
  EXPECT_THROW(parse("[mystery]\nx = 1\n"), ConfigError);
  EXPECT_THROW(parse("[train]\nlearning_rate = fast\n"), ConfigError);
  EXPECT_THROW(parse("[glcm]\nwindow = 4\n").validate(), ConfigError);
  EXPECT_THROW(parse("[routing]\nedge_lst_source = wind\n"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/hothem.ini"), ConfigError);
}

// The whole pipeline against the generated city, once per test binary.
class CityPipeline : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new testing::TempDir("city");
    const auto cfg_path = synthetic::write_city(dir_->path());
    config_ = new PipelineConfig(load_config(cfg_path));
    features_ = run_features(*config_);
    run_train(*config_);
    report_ = new eval::EvaluationReport(run_evaluate(*config_));
    predict_ = run_predict_nodes(*config_);
    run_surface(*config_);
  }
  static void TearDownTestSuite() {
    delete report_;
    delete config_;
    delete dir_;
  }
  static testing::TempDir* dir_;
  static PipelineConfig* config_;
  static FeatureStageResult features_;
  static eval::EvaluationReport* report_;
  static PredictStageResult predict_;
};

testing::TempDir* CityPipeline::dir_ = nullptr;
PipelineConfig* CityPipeline::config_ = nullptr;
FeatureStageResult CityPipeline::features_;
eval::EvaluationReport* CityPipeline::report_ = nullptr;
PredictStageResult CityPipeline::predict_;

TEST_F(CityPipeline, FeatureStageCounts) {
  EXPECT_GT(features_.gsv_points, 100u);
  EXPECT_EQ(features_.gsv_missing, 1u);
  EXPECT_EQ(features_.nodes, 900u);
  EXPECT_LT(features_.nodes_with_gsv, features_.nodes);
  const auto full = features::read_table(outputs(*config_).train_full(), features::FeatureSchema::full());
  const auto deploy = features::read_table(outputs(*config_).train_deploy(), features::FeatureSchema::deployment());
  EXPECT_EQ(full.size(), deploy.size());
}

TEST_F(CityPipeline, HoldoutWardKeptOutOfTraining) {
  EXPECT_EQ(report_->holdout_ward, "An Phu");
  EXPECT_GT(report_->holdout_rows, 0u);
  for (const auto* cv : {&report_->full_cv, &report_->deploy_cv}) {
    for (const auto& f : cv->folds) EXPECT_NE(f.ward, "An Phu");
  }
  EXPECT_GT(report_->full.holdout_r2, report_->deploy.holdout_r2);
  const auto text = util::read_file(outputs(*config_).evaluation_text());
  EXPECT_NE(text.find("holdout R2"), std::string::npos);
}

TEST_F(CityPipeline, PredictionsCoverEveryNode) {
  const auto preds = surface::read_predictions(outputs(*config_).predictions());
  EXPECT_EQ(preds.size(), 900u);
  EXPECT_EQ(predict_.stats.full + predict_.stats.deployment, 900u);
  EXPECT_GT(predict_.stats.full, 0u);
  for (const auto& p : preds) EXPECT_TRUE(p.category);
  const auto grid = raster::read_ascii_grid(outputs(*config_).surface());
  EXPECT_EQ(grid.cell_size(), config_->surface.cell_size);
}

TEST_F(CityPipeline, CoolestRouteIsCoolerAndLonger) {
  const auto g = load_routing_graph(*config_);
  const routing::NodeId a = g.nodes().front().id, b = g.nodes().back().id;
  const auto s = routing::route(g, a, b, routing::Mode::Shortest);
  const auto c = routing::route(g, a, b, routing::Mode::Coolest);
  const auto h = routing::route(g, a, b, routing::Mode::Hottest);
  ASSERT_TRUE(s && c && h);
  EXPECT_GE(c->distance_m, s->distance_m);
  EXPECT_LE(c->avg_lst, s->avg_lst);
  EXPECT_LE(c->max_lst, s->max_lst);
  EXPECT_GE(h->avg_lst, c->avg_lst);
}

#ifdef HOTHEM_CLI
int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + HOTHEM_CLI + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Cli, ExitCodes) {
  testing::TempDir dir("cli");
  EXPECT_EQ(run_cli("--help"), 0);
  EXPECT_EQ(run_cli(""), 1);
  EXPECT_EQ(run_cli("route --to 3"), 1);
  util::write_file(dir.path() / "bad.ini", "[train]\nbogus = 1\n");
  EXPECT_EQ(run_cli("-c " + (dir.path() / "bad.ini").string() + " train"), 2);
  EXPECT_EQ(run_cli("-c " + (dir.path() / "missing.ini").string() + " train"), 2);
}

TEST(Cli, FixtureRunAndRoute) {
  testing::TempDir dir("cli_city");
  ASSERT_EQ(run_cli("make-fixture --out " + dir.path().string()), 0);
  const std::string cfg = "-c " + (dir.path() / "config.ini").string();
  ASSERT_EQ(run_cli(cfg + " run"), 0);
  EXPECT_EQ(run_cli(cfg + " route --from 5000000000 --to 5000006293 --mode coolest"), 0);
  EXPECT_EQ(run_cli(cfg + " route --from 5000000000 --to 42 --mode coolest"), 3);
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "out" / "surface.asc"));
}
#endif

}  // namespace
}  // namespace hothem::pipeline
