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

#include <cmath>

#include <benchmark/benchmark.h>

#include "hothem/gbt.hpp"
#include "hothem/util.hpp"

namespace {

using namespace hothem;

struct Data {
  std::vector<features::FeatureRow> rows;
  features::FeatureSchema schema;
};

Data friedman(int n) {
  util::Rng rng(7);
  std::vector<std::string> names;
  for (int k = 0; k < 10; ++k) names.push_back("x" + std::to_string(k));
  Data d{{}, features::FeatureSchema(names)};
  for (int i = 0; i < n; ++i) {
    features::FeatureRow r;
    r.point_id = std::to_string(i);
    for (int k = 0; k < 10; ++k) r.values.push_back(rng.uniform());
    const auto& x = r.values;
    r.target_lst = 10 * std::sin(M_PI * x[0] * x[1]) + 20 * (x[2] - 0.5) * (x[2] - 0.5) + 10 * x[3] + 5 * x[4];
    d.rows.push_back(r);
  }
  return d;
}

void BM_GbtTrain(benchmark::State& state) {
  const auto d = friedman(static_cast<int>(state.range(0)));
  gbt::TrainConfig cfg;
  cfg.n_estimators = 100;
  cfg.early_stopping_rounds = 0;
  for (auto _ : state) benchmark::DoNotOptimize(gbt::train(d.rows, d.schema, cfg));
}
BENCHMARK(BM_GbtTrain)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_GbtPredict(benchmark::State& state) {
  const auto d = friedman(2000);
  gbt::TrainConfig cfg;
  cfg.n_estimators = 200;
  cfg.early_stopping_rounds = 0;
  const auto m = gbt::train(d.rows, d.schema, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(m.predict(d.rows));
  state.SetItemsProcessed(state.iterations() * d.rows.size());
}
BENCHMARK(BM_GbtPredict);

}  // namespace
