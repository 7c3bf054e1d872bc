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

#include <benchmark/benchmark.h>

#include "hothem/routing.hpp"
#include "hothem/util.hpp"

namespace {

using namespace hothem;

// n x n street lattice with random edge temperatures.
routing::Graph lattice(int n) {
  util::Rng rng(5);
  routing::Graph g;
  auto id = [n](int r, int c) { return static_cast<routing::NodeId>(r * n + c); };
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) g.add_node(id(r, c), 106.69 + c * 0.001, 10.77 + r * 0.001);
  }
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (c + 1 < n) g.add_edge(id(r, c), id(r, c + 1), rng.uniform(80, 140), rng.uniform(28, 45));
      if (r + 1 < n) g.add_edge(id(r, c), id(r + 1, c), rng.uniform(80, 140), rng.uniform(28, 45));
    }
  }
  return routing::assign_costs(g, routing::CostParams{10.0, 10.0});
}

void BM_RouteCoolest(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto g = lattice(n);
  const auto to = static_cast<routing::NodeId>(n * n - 1);
  for (auto _ : state) benchmark::DoNotOptimize(routing::route(g, 0, to, routing::Mode::Coolest));
}
BENCHMARK(BM_RouteCoolest)->Arg(30)->Arg(100);

void BM_Reweight(benchmark::State& state) {
  const auto g = lattice(100);
  for (auto _ : state) benchmark::DoNotOptimize(routing::reweight(g, routing::CostParams{3.0, 3.0}));
}
BENCHMARK(BM_Reweight);

}  // namespace
