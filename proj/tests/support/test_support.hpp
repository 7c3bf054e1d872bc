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

// Shared fixtures and independent reference implementations for the unit
// and acceptance tests.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <unistd.h>

#include "hothem/features.hpp"
#include "hothem/routing.hpp"
#include "hothem/util.hpp"

namespace hothem::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("hothem_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Connected graph with 2..max_nodes nodes: a random spanning tree plus
// extra edges (parallel edges allowed), shuffled non-contiguous ids.
inline routing::Graph random_graph(util::Rng& rng, int max_nodes = 10) {
  const int n = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_nodes - 1)));
  std::vector<routing::NodeId> ids(n);
  for (int i = 0; i < n; ++i) ids[i] = 3 * i + 1;
  rng.shuffle(ids);
  routing::Graph g;
  for (int i = 0; i < n; ++i) g.add_node(ids[i], rng.uniform(106.69, 106.71), rng.uniform(10.77, 10.79));
  auto edge = [&](int a, int b) {
    g.add_edge(ids[a], ids[b], rng.uniform(10.0, 500.0), rng.uniform(30.0, 45.0));
  };
  for (int i = 1; i < n; ++i) edge(static_cast<int>(rng.below(static_cast<std::uint64_t>(i))), i);
  const int extra = static_cast<int>(rng.below(static_cast<std::uint64_t>(2 * n)));
  for (int k = 0; k < extra; ++k) {
    const int a = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    const int b = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    if (a != b) edge(a, b);
  }
  return g;
}

struct EnumeratedPath {
  std::vector<std::size_t> edges;
  std::vector<routing::NodeId> nodes;
  double cost;
};

// Every simple path from `from` to `to`, as edge sequences (each parallel
// edge is a distinct path). Costs are summed from the start node.
inline std::vector<EnumeratedPath> all_simple_paths(const routing::Graph& g, routing::NodeId from,
                                                    routing::NodeId to, routing::Mode mode) {
  std::vector<EnumeratedPath> out;
  std::vector<std::size_t> edges;
  std::vector<routing::NodeId> nodes{from};
  std::function<void(routing::NodeId, double)> dfs = [&](routing::NodeId at, double cost) {
    if (at == to) {
      out.push_back({edges, nodes, cost});
      return;
    }
    for (std::size_t e = 0; e < g.edges().size(); ++e) {
      const auto& edge = g.edges()[e];
      routing::NodeId next;
      if (edge.u == at) {
        next = edge.v;
      } else if (edge.v == at) {
        next = edge.u;
      } else {
        continue;
      }
      if (std::find(nodes.begin(), nodes.end(), next) != nodes.end()) continue;
      edges.push_back(e);
      nodes.push_back(next);
      dfs(next, cost + routing::edge_weight(edge, mode));
      edges.pop_back();
      nodes.pop_back();
    }
  };
  dfs(from, 0.0);
  return out;
}

// Optimal cost by enumeration, and whether the optimum is unique by a
// relative margin.
struct OracleResult {
  double best = std::numeric_limits<double>::infinity();
  std::optional<EnumeratedPath> unique;
  std::size_t paths = 0;
};

inline OracleResult oracle_route(const routing::Graph& g, routing::NodeId from, routing::NodeId to,
                                 routing::Mode mode) {
  OracleResult r;
  if (from == to) {
    r.best = 0.0;
    r.unique = EnumeratedPath{{}, {from}, 0.0};
    r.paths = 1;
    return r;
  }
  const auto paths = all_simple_paths(g, from, to, mode);
  r.paths = paths.size();
  const EnumeratedPath* best = nullptr;
  double second = std::numeric_limits<double>::infinity();
  for (const auto& p : paths) {
    if (!best || p.cost < best->cost) {
      if (best) second = std::min(second, best->cost);
      best = &p;
    } else {
      second = std::min(second, p.cost);
    }
  }
  if (best) {
    r.best = best->cost;
    if (second > best->cost * (1.0 + 1e-9) + 1e-12) r.unique = *best;
  }
  return r;
}

// Reference GLCM for one cell by explicit pair enumeration over the window.
struct GlcmValues {
  double contrast;
  double homogeneity;
  double energy;
  bool valid;
};

inline GlcmValues glcm_reference(const std::vector<int>& q, int width, int height, int col, int row,
                                 int window, int levels,
                                 const std::vector<std::pair<int, int>>& offsets) {
  const int half = window / 2;
  std::vector<double> avg(static_cast<std::size_t>(levels) * levels, 0.0);
  int used = 0;
  for (const auto& [dx, dy] : offsets) {
    std::vector<double> counts(avg.size(), 0.0);
    double total = 0.0;
    for (int r = std::max(0, row - half); r <= std::min(height - 1, row + half); ++r) {
      for (int c = std::max(0, col - half); c <= std::min(width - 1, col + half); ++c) {
        const int c2 = c + dx, r2 = r + dy;
        if (c2 < std::max(0, col - half) || c2 > std::min(width - 1, col + half)) continue;
        if (r2 < std::max(0, row - half) || r2 > std::min(height - 1, row + half)) continue;
        const int a = q[static_cast<std::size_t>(r) * width + c];
        const int b = q[static_cast<std::size_t>(r2) * width + c2];
        if (a < 0 || b < 0) continue;
        counts[static_cast<std::size_t>(a) * levels + b] += 1.0;
        counts[static_cast<std::size_t>(b) * levels + a] += 1.0;
        total += 2.0;
      }
    }
    if (total == 0.0) continue;
    ++used;
    for (std::size_t i = 0; i < avg.size(); ++i) avg[i] += counts[i] / total;
  }
  if (used == 0) return {0, 0, 0, false};
  GlcmValues v{0, 0, 0, true};
  for (int i = 0; i < levels; ++i) {
    for (int j = 0; j < levels; ++j) {
      const double p = avg[static_cast<std::size_t>(i) * levels + j] / used;
      v.contrast += p * (i - j) * (i - j);
      v.homogeneity += p / (1.0 + (i - j) * (i - j));
      v.energy += p * p;
    }
  }
  return v;
}

// Friedman #1 regression problem with extra noise features.
inline std::vector<features::FeatureRow> friedman_rows(util::Rng& rng, int n, int d, double noise) {
  std::vector<features::FeatureRow> rows;
  for (int i = 0; i < n; ++i) {
    features::FeatureRow r;
    r.point_id = "p" + std::to_string(i);
    for (int k = 0; k < d; ++k) r.values.push_back(rng.uniform());
    const auto& x = r.values;
    r.target_lst = 10.0 * std::sin(std::acos(-1.0) * x[0] * x[1]) + 20.0 * (x[2] - 0.5) * (x[2] - 0.5) +
                   10.0 * x[3] + 5.0 * x[4] + noise * rng.normal();
    rows.push_back(std::move(r));
  }
  return rows;
}

inline features::FeatureSchema numbered_schema(int d) {
  std::vector<std::string> names;
  for (int k = 0; k < d; ++k) names.push_back("x" + std::to_string(k));
  return features::FeatureSchema(names);
}

}  // namespace hothem::testing
