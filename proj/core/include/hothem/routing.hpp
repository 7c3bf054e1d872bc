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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hothem/grid.hpp"
#include "hothem/surface.hpp"

namespace hothem::routing {

using NodeId = std::int64_t;

struct Node {
  NodeId id = 0;
  double lon = 0.0;
  double lat = 0.0;
};

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  double length_m = 0.0;
  std::optional<double> avg_lst;  // degrees C
  // Filled by assign_costs.
  double temp_norm = 0.0;
  double length_norm = 0.0;
  double cool_cost = 0.0;
  double hot_cost = 0.0;
};

struct CostParams {
  double lambda_cool = 10.0;
  double lambda_hot = 10.0;

  void validate() const;
};

// Graph-wide statistics frozen when costs are assigned.
struct CostStats {
  double lst_min = 0.0;
  double lst_range = 0.0;
  double len_mean = 0.0;
  CostParams params;
};

struct Adjacent {
  std::size_t node;  // index into nodes()
  std::size_t edge;  // index into edges()
};

// Undirected street graph. Parallel edges are kept.
class Graph {
 public:
  void add_node(NodeId id, double lon, double lat);
  std::size_t add_edge(NodeId u, NodeId v, double length_m,
                       std::optional<double> avg_lst = std::nullopt);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::optional<std::size_t> index_of(NodeId id) const;
  const Node& node(NodeId id) const;  // NotFoundError when absent
  const std::vector<Adjacent>& adjacent(std::size_t node_index) const { return adj_[node_index]; }

  void set_edge_lst(std::size_t edge, double avg_lst) {
    edges_[edge].avg_lst = avg_lst;
    stats_.reset();
  }
  const std::optional<CostStats>& cost_stats() const { return stats_; }

 private:
  friend Graph assign_costs(const Graph& g, const CostParams& params);

// Recomputes cool_cost and hot_cost for new lambdas from the temp_norm and
// length_norm already stored on a costed graph. Same result as
// assign_costs with the new parameters, without the statistics pass.
Graph reweight(const Graph& g, const CostParams& params);
  friend Graph reweight(const Graph& g, const CostParams& params);

  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Adjacent>> adj_;
  std::unordered_map<NodeId, std::size_t> index_;
  std::optional<CostStats> stats_;
};

// temp_norm = (avg_lst - lst_min) / lst_range (0 when the range is 0),
// length_norm = length / len_mean,
// cool_cost = length_norm + lambda_cool * temp_norm,
// hot_cost = length_norm + lambda_hot * (1 - temp_norm).
// Statistics are taken over all edges. Returns a new graph.
Graph assign_costs(const Graph& g, const CostParams& params);

// Recomputes cool_cost and hot_cost for new lambdas from the temp_norm and
// length_norm already stored on a costed graph. Same result as
// assign_costs with the new parameters, without the statistics pass.
Graph reweight(const Graph& g, const CostParams& params);

enum class Mode { Shortest, Coolest, Hottest };
const char* mode_name(Mode m);
std::optional<Mode> parse_mode(std::string_view s);
double edge_weight(const Edge& e, Mode m);

struct Route {
  Mode mode = Mode::Shortest;
  std::vector<NodeId> path;
  std::vector<std::size_t> edges;  // edge indices, path.size() - 1 of them
  double cost = 0.0;               // sum of mode weights
  double distance_m = 0.0;
  double avg_lst = 0.0;            // length-weighted; NaN without edges
  double max_lst = 0.0;            // NaN without edges
};

// Dijkstra on the mode weight. Equal tentative distances pop in node-id
// order and a node keeps the first predecessor that reached its final
// distance, so results are deterministic. Throws NotFoundError for unknown
// ids and ConfigError when a heat mode is asked of a graph without costs.
std::optional<Route> route(const Graph& g, NodeId from, NodeId to, Mode mode);

// Mean of the two endpoint predictions. Predictions are matched on the
// decimal node id; a missing endpoint is a DataError.
Graph edge_lst_from_nodes(const Graph& g, std::span<const surface::NodePrediction> preds);
// Bilinear sample of the surface at each edge midpoint.
Graph edge_lst_from_surface(const Graph& g, const raster::Grid& surface);

struct RouteSummary {
  Mode mode = Mode::Shortest;
  double distance_km = 0.0;
  double avg_lst = 0.0;
  double max_lst = 0.0;
  double cost = 0.0;
};

std::vector<RouteSummary> route_summary(const Graph& g, std::span<const Route> routes);
std::string format_route_summary(std::span<const RouteSummary> rows);

// nodes: node_id,lon,lat  edges: u,v,length_m[,avg_lst]
Graph read_graph(const std::filesystem::path& nodes_csv, const std::filesystem::path& edges_csv);
void write_graph(const Graph& g, const std::filesystem::path& nodes_csv,
                 const std::filesystem::path& edges_csv);

}  // namespace hothem::routing
