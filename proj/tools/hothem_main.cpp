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

// hothem: heat-aware pedestrian routing pipeline.

#include <csignal>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hothem/error.hpp"
#include "hothem/geojson.hpp"
#include "hothem/pipeline.hpp"
#include "hothem/routing.hpp"
#include "hothem/service.hpp"
#include "hothem/synthetic_city.hpp"
#include "hothem/util.hpp"

namespace {

using namespace hothem;

constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

service::HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

pipeline::PipelineConfig config_from(const std::string& flag) {
  std::string path = flag;
  if (path.empty()) {
    if (const char* env = std::getenv("HOTHEM_CONFIG")) path = env;
  }
  if (path.empty()) throw ConfigError("no config given (use --config or HOTHEM_CONFIG)");
  auto cfg = pipeline::load_config(path);
  cfg.validate();
  return cfg;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

int cmd_features(const pipeline::PipelineConfig& cfg) {
  const auto r = pipeline::run_features(cfg);
  print_warnings(r.warnings);
  std::cout << "streetscape points: " << r.gsv_points << " (" << r.gsv_missing << " unreadable)\n"
            << "training rows: " << r.training_rows << '\n'
            << "nodes: " << r.nodes << " (" << r.nodes_with_gsv << " with streetscape features)\n";
  return 0;
}

int cmd_train(const pipeline::PipelineConfig& cfg) {
  const auto r = pipeline::run_train(cfg);
  std::cout << "full model: " << r.full_trees << " trees, train R2 "
            << util::format_fixed(r.full_train.r2, 4) << ", RMSE "
            << util::format_fixed(r.full_train.rmse, 4) << '\n'
            << "deployment model: " << r.deploy_trees << " trees, train R2 "
            << util::format_fixed(r.deploy_train.r2, 4) << ", RMSE "
            << util::format_fixed(r.deploy_train.rmse, 4) << '\n';
  return 0;
}

int cmd_evaluate(const pipeline::PipelineConfig& cfg) {
  std::cout << eval::format_report_text(pipeline::run_evaluate(cfg));
  return 0;
}

int cmd_predict(const pipeline::PipelineConfig& cfg) {
  std::cout << pipeline::format_node_summary(pipeline::run_predict_nodes(cfg));
  return 0;
}

int cmd_surface(const pipeline::PipelineConfig& cfg) {
  const auto grid = pipeline::run_surface(cfg);
  std::cout << "surface: " << grid.width() << " x " << grid.height() << " cells -> "
            << pipeline::outputs(cfg).surface().string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heat-aware pedestrian routing"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("-c,--config", config_path, "Pipeline config file (default: $HOTHEM_CONFIG)");

  auto* features = app.add_subcommand("features", "Extract raster and streetscape features");
  auto* train = app.add_subcommand("train", "Train the full and deployment models");
  auto* evaluate = app.add_subcommand("evaluate", "Spatial CV, holdout and model comparison");
  auto* predict = app.add_subcommand("predict-nodes", "Patchwork node predictions and summary");
  auto* surface = app.add_subcommand("surface", "Interpolated, blurred prediction raster");
  auto* all = app.add_subcommand("run", "features, train, evaluate, predict-nodes and surface");

  auto* route = app.add_subcommand("route", "Route between two nodes, GeoJSON on stdout");
  std::int64_t from = 0, to = 0;
  std::string mode_text = "shortest";
  std::optional<double> lambda;
  route->add_option("--from", from, "Start node id")->required();
  route->add_option("--to", to, "End node id")->required();
  route->add_option("--mode", mode_text, "shortest, coolest or hottest")
      ->check(CLI::IsMember({"shortest", "coolest", "hottest"}));
  route->add_option("--lambda", lambda, "Heat penalty for both heat modes")
      ->check(CLI::NonNegativeNumber);

  auto* serve = app.add_subcommand("serve", "Start the HTTP route service");
  int port = 8080;
  std::string host = "127.0.0.1";
  serve->add_option("--port", port, "Port (0 picks a free one)")->check(CLI::Range(0, 65535));
  serve->add_option("--host", host, "Bind address");

  auto* fixture = app.add_subcommand("make-fixture", "Write the synthetic city inputs");
  std::string fixture_dir;
  std::uint64_t fixture_seed = 7;
  fixture->add_option("--out", fixture_dir, "Output directory")->required();
  fixture->add_option("--seed", fixture_seed, "Generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*fixture) {
      synthetic::CityOptions opts;
      opts.seed = fixture_seed;
      std::cout << synthetic::write_city(fixture_dir, opts).string() << '\n';
      return 0;
    }
    const auto cfg = config_from(config_path);
    if (*features) return cmd_features(cfg);
    if (*train) return cmd_train(cfg);
    if (*evaluate) return cmd_evaluate(cfg);
    if (*predict) return cmd_predict(cfg);
    if (*surface) return cmd_surface(cfg);
    if (*all) {
      cmd_features(cfg);
      cmd_train(cfg);
      cmd_evaluate(cfg);
      cmd_predict(cfg);
      return cmd_surface(cfg);
    }
    if (*route) {
      auto graph = pipeline::load_routing_graph(cfg);
      if (lambda) graph = routing::reweight(graph, {*lambda, *lambda});
      const auto mode = *routing::parse_mode(mode_text);
      const auto r = routing::route(graph, from, to, mode);
      if (!r) {
        std::cerr << "error: no path between " << from << " and " << to << '\n';
        return kExitData;
      }
      std::cout << geojson::route_collection(graph, *r) << '\n';
      return 0;
    }
    if (*serve) {
      const auto graph = pipeline::load_routing_graph(cfg);
      const auto preds = surface::read_predictions(pipeline::outputs(cfg).predictions());
      const service::RouteService svc(graph, preds, cfg.routing);
      service::HttpServer server(svc);
      const int bound = server.bind(host, port);
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "listening on http://" << host << ':' << bound << '\n';
      server.listen();
      g_server = nullptr;
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
