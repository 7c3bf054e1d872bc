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

#include "hothem/routing.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <tuple>

#include "hothem/error.hpp"
#include "hothem/raster_ops.hpp"
#include "hothem/util.hpp"

namespace hothem::routing {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

void CostParams::validate() const {
  if (!(lambda_cool >= 0.0) || !std::isfinite(lambda_cool)) {
    throw ConfigError("lambda_cool must be a finite value >= 0");
  }
  if (!(lambda_hot >= 0.0) || !std::isfinite(lambda_hot)) {
    throw ConfigError("lambda_hot must be a finite value >= 0");
  }
}

void Graph::add_node(NodeId id, double lon, double lat) {
  if (!index_.emplace(id, nodes_.size()).second) {
    throw DataError("duplicate node id " + std::to_string(id));
  }
  nodes_.push_back({id, lon, lat});
  adj_.emplace_back();
  stats_.reset();
}

std::size_t Graph::add_edge(NodeId u, NodeId v, double length_m, std::optional<double> avg_lst) {
  const auto iu = index_of(u);
  const auto iv = index_of(v);
  if (!iu || !iv) {
    throw DataError("edge " + std::to_string(u) + "-" + std::to_string(v) +
                    " references an unknown node");
  }
  if (!(length_m > 0.0) || !std::isfinite(length_m)) {
    throw DataError("edge " + std::to_string(u) + "-" + std::to_string(v) +
                    " has non-positive length");
  }
  const std::size_t e = edges_.size();
  Edge edge;
  edge.u = u;
  edge.v = v;
  edge.length_m = length_m;
  edge.avg_lst = avg_lst;
  edges_.push_back(edge);
  adj_[*iu].push_back({*iv, e});
  if (*iu != *iv) adj_[*iv].push_back({*iu, e});
  stats_.reset();
  return e;
}

std::optional<std::size_t> Graph::index_of(NodeId id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const Node& Graph::node(NodeId id) const {
  const auto i = index_of(id);
  if (!i) throw NotFoundError("unknown node " + std::to_string(id));
  return nodes_[*i];
}

Graph assign_costs(const Graph& g, const CostParams& params) {
  params.validate();
  if (g.edges().empty()) throw DataError("cannot assign costs on a graph without edges");
  std::vector<std::string> missing;
  double lst_min = kInf, lst_max = -kInf, len_sum = 0.0;
  for (const auto& e : g.edges()) {
    if (!e.avg_lst) {
      if (missing.size() < 20) missing.push_back(std::to_string(e.u) + "-" + std::to_string(e.v));
      continue;
    }
    lst_min = std::min(lst_min, *e.avg_lst);
    lst_max = std::max(lst_max, *e.avg_lst);
    len_sum += e.length_m;
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw DataError("edges without avg_lst: " + list);
  }
  CostStats stats;
  stats.lst_min = lst_min;
  stats.lst_range = lst_max - lst_min;
  stats.len_mean = len_sum / static_cast<double>(g.edges().size());
  stats.params = params;

  Graph out = g;
  for (auto& e : out.edges_) {
    e.temp_norm = stats.lst_range > 0.0 ? (*e.avg_lst - stats.lst_min) / stats.lst_range : 0.0;
    e.length_norm = e.length_m / stats.len_mean;
    e.cool_cost = e.length_norm + params.lambda_cool * e.temp_norm;
    e.hot_cost = e.length_norm + params.lambda_hot * (1.0 - e.temp_norm);
  }
  out.stats_ = stats;
  return out;
}

Graph reweight(const Graph& g, const CostParams& params) {
  params.validate();
  if (!g.stats_) throw ConfigError("reweight needs a graph with assigned costs");
  Graph out = g;
  for (auto& e : out.edges_) {
    e.cool_cost = e.length_norm + params.lambda_cool * e.temp_norm;
    e.hot_cost = e.length_norm + params.lambda_hot * (1.0 - e.temp_norm);
  }
  out.stats_->params = params;
  return out;
}

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::Shortest: return "shortest";
    case Mode::Coolest: return "coolest";
    case Mode::Hottest: return "hottest";
  }
  return "?";
}

std::optional<Mode> parse_mode(std::string_view s) {
  for (Mode m : {Mode::Shortest, Mode::Coolest, Mode::Hottest}) {
    if (s == mode_name(m)) return m;
  }
  return std::nullopt;
}

double edge_weight(const Edge& e, Mode m) {
  switch (m) {
    case Mode::Shortest: return e.length_m;
    case Mode::Coolest: return e.cool_cost;
    case Mode::Hottest: return e.hot_cost;
  }
  return e.length_m;
}

namespace {

void fill_route_stats(const Graph& g, Route& r) {
  double dist = 0.0, weighted = 0.0, max_lst = -kInf;
  bool all_lst = true;
  for (auto e : r.edges) {
    const auto& edge = g.edges()[e];
    dist += edge.length_m;
    if (edge.avg_lst) {
      weighted += edge.length_m * *edge.avg_lst;
      max_lst = std::max(max_lst, *edge.avg_lst);
    } else {
      all_lst = false;
    }
  }
  r.distance_m = dist;
  if (r.edges.empty() || !all_lst) {
    r.avg_lst = kNaN;
    r.max_lst = kNaN;
  } else {
    r.avg_lst = weighted / dist;
    r.max_lst = max_lst;
  }
}

}  // namespace

std::optional<Route> route(const Graph& g, NodeId from, NodeId to, Mode mode) {
  const auto src = g.index_of(from);
  if (!src) throw NotFoundError("unknown node " + std::to_string(from));
  const auto dst = g.index_of(to);
  if (!dst) throw NotFoundError("unknown node " + std::to_string(to));
  if (mode != Mode::Shortest && !g.cost_stats()) {
    throw ConfigError(std::string(mode_name(mode)) + " routing needs assigned edge costs");
  }

  Route r;
  r.mode = mode;
  if (*src == *dst) {
    r.path = {from};
    fill_route_stats(g, r);
    return r;
  }

  const std::size_t n = g.nodes().size();
  std::vector<double> dist(n, kInf);
  std::vector<std::size_t> prev_edge(n, SIZE_MAX), prev_node(n, SIZE_MAX);
  std::vector<char> done(n, 0);
  using Item = std::tuple<double, NodeId, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[*src] = 0.0;
  heap.emplace(0.0, from, *src);
  while (!heap.empty()) {
    const auto [d, id, u] = heap.top();
    heap.pop();
    if (done[u]) continue;
    done[u] = 1;
    if (u == *dst) break;
    for (const auto& a : g.adjacent(u)) {
      if (done[a.node]) continue;
      const double nd = d + edge_weight(g.edges()[a.edge], mode);
      if (nd < dist[a.node]) {
        dist[a.node] = nd;
        prev_edge[a.node] = a.edge;
        prev_node[a.node] = u;
        heap.emplace(nd, g.nodes()[a.node].id, a.node);
      }
    }
  }
  if (!done[*dst]) return std::nullopt;

  for (std::size_t v = *dst; v != *src; v = prev_node[v]) {
    r.path.push_back(g.nodes()[v].id);
    r.edges.push_back(prev_edge[v]);
  }
  r.path.push_back(from);
  std::reverse(r.path.begin(), r.path.end());
  std::reverse(r.edges.begin(), r.edges.end());
  double cost = 0.0;
  for (auto e : r.edges) cost += edge_weight(g.edges()[e], mode);
  r.cost = cost;
  fill_route_stats(g, r);
  return r;
}

Graph edge_lst_from_nodes(const Graph& g, std::span<const surface::NodePrediction> preds) {
  std::unordered_map<std::string, double> lst;
  for (const auto& p : preds) lst[p.node_id] = p.lst;
  Graph out = g;
  std::vector<std::string> missing;
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    const auto& edge = g.edges()[e];
    const auto a = lst.find(std::to_string(edge.u));
    const auto b = lst.find(std::to_string(edge.v));
    if (a == lst.end() || b == lst.end()) {
      if (missing.size() < 20) {
        missing.push_back(std::to_string(a == lst.end() ? edge.u : edge.v));
      }
      continue;
    }
    out.set_edge_lst(e, (a->second + b->second) / 2.0);
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw DataError("edge endpoints without a prediction: " + list);
  }
  return out;
}

Graph edge_lst_from_surface(const Graph& g, const raster::Grid& surface) {
  Graph out = g;
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    const auto& edge = g.edges()[e];
    const auto& a = g.node(edge.u);
    const auto& b = g.node(edge.v);
    const double lon = (a.lon + b.lon) / 2.0;
    const double lat = (a.lat + b.lat) / 2.0;
    const auto v = raster::sample(surface, lon, lat, raster::SampleMethod::Bilinear);
    if (!v) {
      throw DataError("surface has no value at the midpoint of edge " + std::to_string(edge.u) +
                      "-" + std::to_string(edge.v));
    }
    out.set_edge_lst(e, *v);
  }
  return out;
}

std::vector<RouteSummary> route_summary(const Graph& g, std::span<const Route> routes) {
  std::vector<RouteSummary> out;
  for (const auto& r : routes) {
    Route copy = r;
    fill_route_stats(g, copy);
    out.push_back({r.mode, copy.distance_m / 1000.0, copy.avg_lst, copy.max_lst, r.cost});
  }
  return out;
}

std::string format_route_summary(std::span<const RouteSummary> rows) {
  std::ostringstream out;
  out << "Route     Distance (km)  Average LST  Maximum LST\n";
  for (const auto& r : rows) {
    std::string name = mode_name(r.mode);
    name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
    name.resize(10, ' ');
    auto c = [](double v) { return std::isnan(v) ? std::string("n/a") : util::format_fixed(v, 2) + " C"; };
    std::string km = util::format_fixed(r.distance_km, 2);
    km.resize(15, ' ');
    std::string avg = c(r.avg_lst);
    avg.resize(13, ' ');
    out << name << km << avg << c(r.max_lst) << '\n';
  }
  return out.str();
}

namespace {

std::vector<std::vector<std::string>> read_csv_rows(const std::filesystem::path& path,
                                                    std::span<const std::string_view> header,
                                                    std::size_t optional_tail) {
  std::istringstream in(util::read_file(path));
  std::string line;
  if (!std::getline(in, line)) throw SchemaError(path.string() + ": empty file");
  const auto head = util::parse_csv_line(util::trim(line));
  if (head.size() < header.size() || head.size() > header.size() + optional_tail) {
    throw SchemaError(path.string() + ": unexpected header '" + line + "'");
  }
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (head[i] != header[i]) {
      throw SchemaError(path.string() + ": column " + std::to_string(i + 1) + " should be '" +
                        std::string(header[i]) + "', found '" + head[i] + "'");
    }
  }
  std::vector<std::vector<std::string>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (util::trim(line).empty()) continue;
    auto f = util::parse_csv_line(util::trim(line));
    if (f.size() != head.size()) {
      throw DataError(path.string() + " line " + std::to_string(line_no) + ": expected " +
                      std::to_string(head.size()) + " fields");
    }
    rows.push_back(std::move(f));
  }
  return rows;
}

NodeId parse_id(const std::string& s, const std::filesystem::path& path) {
  const auto v = util::parse_int(s);
  if (!v) throw DataError(path.string() + ": bad node id '" + s + "'");
  return *v;
}

double parse_real(const std::string& s, const std::filesystem::path& path) {
  const auto v = util::parse_double(s);
  if (!v || !std::isfinite(*v)) throw DataError(path.string() + ": bad number '" + s + "'");
  return *v;
}

}  // namespace

Graph read_graph(const std::filesystem::path& nodes_csv, const std::filesystem::path& edges_csv) {
  Graph g;
  constexpr std::string_view node_header[] = {"node_id", "lon", "lat"};
  for (const auto& f : read_csv_rows(nodes_csv, node_header, 0)) {
    g.add_node(parse_id(f[0], nodes_csv), parse_real(f[1], nodes_csv), parse_real(f[2], nodes_csv));
  }
  constexpr std::string_view edge_header[] = {"u", "v", "length_m"};
  for (const auto& f : read_csv_rows(edges_csv, edge_header, 1)) {
    std::optional<double> lst;
    if (f.size() == 4 && !f[3].empty()) lst = parse_real(f[3], edges_csv);
    g.add_edge(parse_id(f[0], edges_csv), parse_id(f[1], edges_csv), parse_real(f[2], edges_csv),
               lst);
  }
  return g;
}

void write_graph(const Graph& g, const std::filesystem::path& nodes_csv,
                 const std::filesystem::path& edges_csv) {
  std::ostringstream n;
  n << "node_id,lon,lat\n";
  for (const auto& node : g.nodes()) {
    n << node.id << ',' << util::format_exact(node.lon) << ',' << util::format_exact(node.lat) << '\n';
  }
  util::write_file(nodes_csv, n.str());
  const bool any_lst = std::any_of(g.edges().begin(), g.edges().end(),
                                   [](const Edge& e) { return e.avg_lst.has_value(); });
  std::ostringstream e;
  e << "u,v,length_m" << (any_lst ? ",avg_lst" : "") << '\n';
  for (const auto& edge : g.edges()) {
    e << edge.u << ',' << edge.v << ',' << util::format_exact(edge.length_m);
    if (any_lst) e << ',' << (edge.avg_lst ? util::format_exact(*edge.avg_lst) : "");
    e << '\n';
  }
  util::write_file(edges_csv, e.str());
}

}  // namespace hothem::routing
