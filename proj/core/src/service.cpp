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

#include "hothem/service.hpp"

#include <cmath>
#include <limits>

#include <httplib.h>
#include <json.hpp>

#include "geojson_json.hpp"
#include "hothem/error.hpp"
#include "hothem/geojson.hpp"
#include "hothem/util.hpp"

namespace hothem::service {

using nlohmann::json;
using routing::Mode;

namespace {

// Thrown inside handlers and turned into a JSON error response.
struct HttpError {
  int status;
  std::string code;
  std::string message;
};

Response json_response(int status, const json& body) {
  return {status, body.dump(), status == 200 && body.contains("type")
                                   ? "application/geo+json"
                                   : "application/json"};
}

Response error_response(const HttpError& e) {
  return {e.status, json{{"error", e.message}, {"code", e.code}}.dump(), "application/json"};
}

[[noreturn]] void bad_request(const std::string& msg) { throw HttpError{400, "bad_request", msg}; }

std::optional<std::string_view> param(const Query& q, std::string_view key) {
  const auto it = q.find(key);
  if (it == q.end()) return std::nullopt;
  return std::string_view(it->second);
}

std::int64_t node_param(const Query& q, std::string_view key) {
  const auto v = param(q, key);
  if (!v) bad_request("missing parameter '" + std::string(key) + "'");
  const auto id = util::parse_int(*v);
  if (!id) bad_request("parameter '" + std::string(key) + "' is not a node id");
  return *id;
}

std::size_t count_param(const Query& q, std::string_view key, std::size_t fallback,
                        std::size_t min, std::size_t max) {
  const auto v = param(q, key);
  if (!v) return fallback;
  const auto n = util::parse_int(*v);
  if (!n || *n < static_cast<std::int64_t>(min) || *n > static_cast<std::int64_t>(max)) {
    bad_request("parameter '" + std::string(key) + "' must be an integer in [" +
                std::to_string(min) + ", " + std::to_string(max) + "]");
  }
  return static_cast<std::size_t>(*n);
}

void check_node(const routing::Graph& g, std::int64_t id) {
  if (!g.index_of(id)) throw HttpError{404, "unknown_node", "unknown node " + std::to_string(id)};
}

json summary_row(Mode mode, const std::optional<routing::Route>& r) {
  if (!r) {
    return {{"mode", routing::mode_name(mode)}, {"no_path", true}, {"distance_km", nullptr},
            {"avg_lst_c", nullptr}, {"max_lst_c", nullptr}, {"cost", nullptr}};
  }
  return {{"mode", routing::mode_name(mode)},
          {"no_path", false},
          {"distance_km", r->distance_m / 1000.0},
          {"avg_lst_c", geojson::detail::number_or_null(r->avg_lst)},
          {"max_lst_c", geojson::detail::number_or_null(r->max_lst)},
          {"cost", r->cost}};
}

}  // namespace

RouteService::RouteService(const routing::Graph& graph,
                           std::span<const surface::NodePrediction> preds,
                           routing::CostParams defaults)
    : base_(std::make_shared<const routing::Graph>(routing::assign_costs(graph, defaults))),
      defaults_(defaults) {
  for (const auto& p : preds) {
    const auto id = util::parse_int(p.node_id);
    if (id) node_lst_[*id] = {p.lst, p.category};
  }
}

std::shared_ptr<const routing::Graph> RouteService::graph_for(const routing::CostParams& params) const {
  if (params.lambda_cool == defaults_.lambda_cool && params.lambda_hot == defaults_.lambda_hot) {
    return base_;
  }
  const std::pair key{params.lambda_cool, params.lambda_hot};
  {
    std::lock_guard lock(cache_mutex_);
    const auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  auto g = std::make_shared<const routing::Graph>(routing::reweight(*base_, params));
  std::lock_guard lock(cache_mutex_);
  const auto [it, inserted] = cache_.emplace(key, g);
  if (inserted) {
    cache_order_.push_back(key);
    while (cache_order_.size() > kCacheCapacity) {
      cache_.erase(cache_order_.front());
      cache_order_.pop_front();
    }
  }
  return it->second;
}

std::size_t RouteService::cache_size() const {
  std::lock_guard lock(cache_mutex_);
  return cache_.size();
}

routing::CostParams RouteService::params_from(const Query& q) const {
  const auto v = param(q, "lambda");
  if (!v) return defaults_;
  const auto lambda = util::parse_double(*v);
  if (!lambda || !std::isfinite(*lambda) || *lambda < 0.0 || *lambda > 1e6) {
    bad_request("parameter 'lambda' must be a number in [0, 1e6]");
  }
  return {*lambda, *lambda};
}

Response RouteService::handle(std::string_view path, const Query& query) const {
  try {
    if (!base_) throw HttpError{503, "not_loaded", "graph not loaded"};
    if (path == "/health") return health();
    if (path == "/nodes") return nodes(query);
    if (path == "/route") return route(query);
    if (path == "/routes/compare") return compare(query);
    if (path == "/corridors") return corridors(query);
    throw HttpError{404, "not_found", "no such endpoint: " + std::string(path)};
  } catch (const HttpError& e) {
    return error_response(e);
  } catch (const NotFoundError& e) {
    return error_response({404, "unknown_node", e.what()});
  } catch (const std::exception& e) {
    return error_response({500, "internal", e.what()});
  }
}

Response RouteService::health() const {
  return json_response(200, {{"status", "ok"},
                             {"nodes", base_->nodes().size()},
                             {"edges", base_->edges().size()},
                             {"lambda_cool", defaults_.lambda_cool},
                             {"lambda_hot", defaults_.lambda_hot}});
}

Response RouteService::nodes(const Query& q) const {
  double w = -std::numeric_limits<double>::infinity(), s = w;
  double e = std::numeric_limits<double>::infinity(), n = e;
  if (const auto bbox = param(q, "bbox")) {
    const auto parts = util::split(*bbox, ',');
    std::vector<double> v;
    for (const auto& p : parts) {
      const auto d = util::parse_double(p);
      if (!d || !std::isfinite(*d)) bad_request("bbox must be four numbers w,s,e,n");
      v.push_back(*d);
    }
    if (v.size() != 4 || v[0] > v[2] || v[1] > v[3]) bad_request("bbox must be w,s,e,n with w<=e and s<=n");
    w = v[0], s = v[1], e = v[2], n = v[3];
  }
  const std::size_t limit = count_param(q, "limit", kDefaultNodeLimit, 1, kMaxNodeLimit);
  const std::size_t offset = count_param(q, "offset", 0, 0, std::numeric_limits<std::int32_t>::max());

  json features = json::array();
  std::size_t matched = 0;
  for (const auto& node : base_->nodes()) {
    if (node.lon < w || node.lon > e || node.lat < s || node.lat > n) continue;
    const std::size_t k = matched++;
    if (k < offset || k >= offset + limit) continue;
    json props = {{"node_id", node.id}, {"lst_c", nullptr}, {"category", nullptr}};
    if (const auto it = node_lst_.find(node.id); it != node_lst_.end()) {
      props["lst_c"] = it->second.first;
      if (it->second.second) props["category"] = surface::heat_category_name(*it->second.second);
    }
    features.push_back({{"type", "Feature"},
                        {"geometry", {{"type", "Point"}, {"coordinates", {node.lon, node.lat}}}},
                        {"properties", props}});
  }
  json body = {{"type", "FeatureCollection"}, {"features", features}, {"total", matched},
               {"offset", offset}, {"limit", limit}};
  body["next_offset"] = offset + limit < matched ? json(offset + limit) : json(nullptr);
  return json_response(200, body);
}

Response RouteService::route(const Query& q) const {
  const auto from = node_param(q, "from");
  const auto to = node_param(q, "to");
  const auto mode_text = param(q, "mode");
  if (!mode_text) bad_request("missing parameter 'mode'");
  const auto mode = routing::parse_mode(*mode_text);
  if (!mode) bad_request("mode must be shortest, coolest or hottest");
  const auto params = params_from(q);
  const auto g = graph_for(params);
  check_node(*g, from);
  check_node(*g, to);
  const auto r = routing::route(*g, from, to, *mode);
  if (!r) {
    return json_response(200, {{"type", "FeatureCollection"}, {"features", json::array()}, {"no_path", true}});
  }
  auto body = geojson::detail::route_collection(*g, *r);
  body["no_path"] = false;
  body["lambda"] = params.lambda_cool;
  return json_response(200, body);
}

Response RouteService::compare(const Query& q) const {
  const auto from = node_param(q, "from");
  const auto to = node_param(q, "to");
  const auto params = params_from(q);
  const auto g = graph_for(params);
  check_node(*g, from);
  check_node(*g, to);
  json routes = json::object();
  json summary = json::array();
  for (Mode m : {Mode::Shortest, Mode::Coolest, Mode::Hottest}) {
    const auto r = routing::route(*g, from, to, m);
    routes[routing::mode_name(m)] = r ? geojson::detail::route_collection(*g, *r) : json(nullptr);
    summary.push_back(summary_row(m, r));
  }
  return json_response(200, {{"from", from}, {"to", to}, {"lambda", params.lambda_cool},
                             {"routes", routes}, {"summary", summary}});
}

Response RouteService::corridors(const Query& q) const {
  const std::size_t top = count_param(q, "top", kDefaultCorridors, 1, std::numeric_limits<std::int32_t>::max());
  const auto g = graph_for(params_from(q));
  return json_response(200, geojson::detail::corridors(*g, top));
}

struct HttpServer::Impl {
  const RouteService& service;
  httplib::Server server;
};

HttpServer::HttpServer(const RouteService& service) : impl_(new Impl{service, {}}) {
  impl_->server.Get(R"(/.*)", [this](const httplib::Request& req, httplib::Response& res) {
    Query q;
    for (const auto& [k, v] : req.params) q.emplace(k, v);
    const auto r = impl_->service.handle(req.path, q);
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound <= 0) throw Error("could not bind " + host + ":" + std::to_string(port));
  return bound;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace hothem::service
