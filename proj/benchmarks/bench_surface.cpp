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

#include "hothem/surface.hpp"
#include "hothem/util.hpp"

namespace {

using namespace hothem;

std::vector<surface::NodePrediction> scattered(int n) {
  util::Rng rng(3);
  std::vector<surface::NodePrediction> preds;
  for (int i = 0; i < n; ++i) {
    surface::NodePrediction p;
    p.node_id = std::to_string(i);
    p.lon = rng.uniform(106.690, 106.715);
    p.lat = rng.uniform(10.770, 10.795);
    p.lst = rng.uniform(28, 45);
    preds.push_back(p);
  }
  return preds;
}

void BM_InterpolateSurface(benchmark::State& state) {
  const auto preds = scattered(static_cast<int>(state.range(0)));
  const surface::SurfaceSpec spec;
  for (auto _ : state) benchmark::DoNotOptimize(surface::interpolate_surface(preds, spec));
}
BENCHMARK(BM_InterpolateSurface)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_BuildSurface(benchmark::State& state) {
  const auto preds = scattered(5000);
  const surface::SurfaceSpec spec;
  for (auto _ : state) benchmark::DoNotOptimize(surface::build_surface(preds, spec));
}
BENCHMARK(BM_BuildSurface)->Unit(benchmark::kMillisecond);

}  // namespace
