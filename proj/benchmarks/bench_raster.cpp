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

#include "hothem/raster_ops.hpp"
#include "hothem/util.hpp"

namespace {

using namespace hothem::raster;

Grid noise_grid(int n, std::uint64_t seed) {
  hothem::util::Rng rng(seed);
  std::vector<double> v(static_cast<std::size_t>(n) * n);
  for (auto& x : v) x = rng.uniform(-25.0, 5.0);
  return Grid(GridGeometry{n, n, 106.69, 10.77, 0.0001}, v);
}

void BM_Glcm(benchmark::State& state) {
  const Grid g = noise_grid(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(glcm_features(g));
  state.SetItemsProcessed(state.iterations() * g.size());
}
BENCHMARK(BM_Glcm)->Arg(64)->Arg(128);

void BM_GaussianBlur(benchmark::State& state) {
  const Grid g = noise_grid(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(gaussian_blur(g, 4.0));
  state.SetItemsProcessed(state.iterations() * g.size());
}
BENCHMARK(BM_GaussianBlur)->Arg(256)->Arg(512);

void BM_SkyViewFactor(benchmark::State& state) {
  const Grid g = noise_grid(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(sky_view_factor(g));
  state.SetItemsProcessed(state.iterations() * g.size());
}
BENCHMARK(BM_SkyViewFactor)->Arg(64)->Arg(128);

}  // namespace
