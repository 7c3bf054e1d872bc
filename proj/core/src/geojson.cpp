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

#include "hothem/geojson.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "geojson_json.hpp"

namespace hothem::geojson {

using nlohmann::json;
using routing::Graph;
using routing::Route;

namespace detail {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

namespace {

json position(const routing::Node& n) { return json::array({n.lon, n.lat}); }

json edge_line(const Graph& g, const routing::Edge& e, bool reversed) {
  const auto& a = g.node(reversed ? e.v : e.u);
  const auto& b = g.node(reversed ? e.u : e.v);
  return {{"type", "LineString"}, {"coordinates", json::array({position(a), position(b)})}};
}

}  // namespace

json route_feature(const Graph& g, const Route& route) {
  json coords = json::array();
  for (auto id : route.path) coords.push_back(position(g.node(id)));
  if (coords.size() == 1) coords.push_back(coords.front());
  return {
      {"type", "Feature"},
      {"geometry", {{"type", "LineString"}, {"coordinates", coords}}},
      {"properties",
       {{"kind", "route"},
        {"mode", routing::mode_name(route.mode)},
        {"distance_km", route.distance_m / 1000.0},
        {"avg_lst_c", number_or_null(route.avg_lst)},
        {"max_lst_c", number_or_null(route.max_lst)},
        {"cost", route.cost},
        {"node_ids", route.path}}},
  };
}

json route_collection(const Graph& g, const Route& route) {
  json features = json::array();
  features.push_back(route_feature(g, route));
  for (std::size_t i = 0; i < route.edges.size(); ++i) {
    const auto& e = g.edges()[route.edges[i]];
    const bool reversed = e.u != route.path[i];
    features.push_back({
        {"type", "Feature"},
        {"geometry", edge_line(g, e, reversed)},
        {"properties",
         {{"kind", "segment"},
          {"seq", i},
          {"from", route.path[i]},
          {"to", route.path[i + 1]},
          {"length_m", e.length_m},
          {"avg_lst_c", e.avg_lst ? json(*e.avg_lst) : json(nullptr)}}},
    });
  }
  return {{"type", "FeatureCollection"}, {"features", features}};
}

json corridors(const Graph& g, std::size_t top) {
  json features = json::array();
  std::size_t rank = 0;
  for (auto idx : hottest_edges(g, top)) {
    const auto& e = g.edges()[idx];
    features.push_back({
        {"type", "Feature"},
        {"geometry", edge_line(g, e, false)},
        {"properties",
         {{"rank", ++rank},
          {"u", e.u},
          {"v", e.v},
          {"length_m", e.length_m},
          {"avg_lst_c", e.avg_lst ? json(*e.avg_lst) : json(nullptr)},
          {"temp_norm", e.temp_norm},
          {"hot_cost", e.hot_cost}}},
    });
  }
  return {{"type", "FeatureCollection"}, {"features", features}};
}

}  // namespace detail

std::vector<std::size_t> hottest_edges(const Graph& g, std::size_t top) {
  std::vector<std::size_t> idx(g.edges().size());
  std::iota(idx.begin(), idx.end(), 0);
  const std::size_t k = std::min(top, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + k, idx.end(), [&](std::size_t a, std::size_t b) {
    const double ta = g.edges()[a].temp_norm, tb = g.edges()[b].temp_norm;
    if (ta != tb) return ta > tb;
    return a < b;
  });
  idx.resize(k);
  return idx;
}

std::string route_collection(const Graph& g, const Route& route) {
  return detail::route_collection(g, route).dump();
}

std::string corridors(const Graph& g, std::size_t top) { return detail::corridors(g, top).dump(); }

}  // namespace hothem::geojson
