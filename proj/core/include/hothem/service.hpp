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

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hothem/routing.hpp"
#include "hothem/surface.hpp"

namespace hothem::service {

struct Response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

using Query = std::map<std::string, std::string, std::less<>>;

inline constexpr std::size_t kDefaultNodeLimit = 1000;
inline constexpr std::size_t kMaxNodeLimit = 5000;
inline constexpr std::size_t kDefaultCorridors = 10;

// Request handling over an immutable costed graph. A default-constructed
// service has nothing loaded and answers 503.
class RouteService {
 public:
  RouteService() = default;
  // `graph` must carry edge temperatures; costs are assigned with `defaults`.
  RouteService(const routing::Graph& graph, std::span<const surface::NodePrediction> preds,
               routing::CostParams defaults);

  bool loaded() const { return static_cast<bool>(base_); }
  Response handle(std::string_view path, const Query& query) const;

  // Costed graph for the given lambdas, memoised.
  std::shared_ptr<const routing::Graph> graph_for(const routing::CostParams& params) const;
  std::size_t cache_size() const;

 private:
  Response health() const;
  Response nodes(const Query& q) const;
  Response route(const Query& q) const;
  Response compare(const Query& q) const;
  Response corridors(const Query& q) const;
  routing::CostParams params_from(const Query& q) const;

  std::shared_ptr<const routing::Graph> base_;
  routing::CostParams defaults_;
  std::unordered_map<std::int64_t, std::pair<double, std::optional<surface::HeatCategory>>> node_lst_;

  static constexpr std::size_t kCacheCapacity = 64;
  mutable std::mutex cache_mutex_;
  mutable std::map<std::pair<double, double>, std::shared_ptr<const routing::Graph>> cache_;
  mutable std::deque<std::pair<double, double>> cache_order_;
};

// HTTP front end. Port 0 binds an ephemeral port.
class HttpServer {
 public:
  explicit HttpServer(const RouteService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Returns the bound port; throws Error when binding fails.
  int bind(const std::string& host, int port);
  // Blocks until stop() is called.
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace hothem::service
