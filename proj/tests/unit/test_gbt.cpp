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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hothem/error.hpp"
#include "hothem/gbt.hpp"
#include "test_support.hpp"

namespace hothem::gbt {
namespace {

using features::FeatureRow;
using features::FeatureSchema;

TrainConfig plain(int rounds) {
  TrainConfig c;
  c.n_estimators = rounds;
  c.max_depth = 6;
  c.learning_rate = 1.0;
  c.subsample = 1.0;
  c.colsample_bytree = 1.0;
  c.min_child_weight = 0.0;
  c.reg_alpha = 0.0;
  c.reg_lambda = 0.0;
  c.early_stopping_rounds = 0;
  return c;
}

std::vector<FeatureRow> rows_1d(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<FeatureRow> rows;
  for (std::size_t i = 0; i < x.size(); ++i) {
    FeatureRow r;
    r.point_id = "r" + std::to_string(i);
    r.values = {x[i]};
    r.target_lst = y[i];
    rows.push_back(r);
  }
  return rows;
}

double rmse(const GBTModel& m, const std::vector<FeatureRow>& rows) {
  const auto p = m.predict(rows);
  double s = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) s += (p[i] - *rows[i].target_lst) * (p[i] - *rows[i].target_lst);
  return std::sqrt(s / static_cast<double>(rows.size()));
}

std::string saved(const GBTModel& m) {
  std::ostringstream out;
  save_model(m, out);
  return out.str();
}

TEST(TrainConfig, Validation) {
  TrainConfig c;
  EXPECT_NO_THROW(c.validate());
  c.learning_rate = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = TrainConfig{};
  c.subsample = 1.5;
  EXPECT_THROW(c.validate(), ConfigError);
  c = TrainConfig{};
  c.max_depth = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = TrainConfig{};
  c.reg_lambda = -1.0;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Train, TwoRowsUnregularizedFitsExactly) {
  const auto rows = rows_1d({0.0, 1.0}, {0.0, 10.0});
  const auto m = train(rows, testing::numbered_schema(1), plain(1));
  EXPECT_DOUBLE_EQ(m.base_score(), 5.0);
  const auto p = m.predict(rows);
  EXPECT_DOUBLE_EQ(p[0], 0.0);
  EXPECT_DOUBLE_EQ(p[1], 10.0);
}

TEST(Train, TwoRowsWithLambdaTwoShrinksLeaves) {
  auto c = plain(1);
  c.reg_lambda = 2.0;
  const auto rows = rows_1d({0.0, 1.0}, {0.0, 10.0});
  const auto p = train(rows, testing::numbered_schema(1), c).predict(rows);
  EXPECT_NEAR(p[0], 5.0 - 5.0 / 3.0, 1e-12);
  EXPECT_NEAR(p[1], 5.0 + 5.0 / 3.0, 1e-12);
}

TEST(Train, AlphaSoftThresholdsLeafGradient) {
  auto c = plain(1);
  c.reg_alpha = 2.0;
  c.reg_lambda = 1.0;
  const auto rows = rows_1d({0.0, 1.0}, {0.0, 10.0});
  const auto p = train(rows, testing::numbered_schema(1), c).predict(rows);
  // G = +-5, H = 1: w = -(|G| - 2) sign(G) / 2.
  EXPECT_NEAR(p[0], 5.0 - 1.5, 1e-12);
  EXPECT_NEAR(p[1], 5.0 + 1.5, 1e-12);
}

TEST(Train, StumpMatchesExhaustiveSplitSearch) {
  util::Rng rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 5 + static_cast<int>(rng.below(30));
    std::vector<double> x(n), y(n);
    for (auto& v : x) v = rng.uniform(0, 100);
    for (auto& v : y) v = rng.uniform(20, 45);
    const double lambda = trial % 2 ? 1.5 : 0.0;
    auto c = plain(1);
    c.max_depth = 1;
    c.reg_lambda = lambda;
    const auto rows = rows_1d(x, y);
    const auto p = train(rows, testing::numbered_schema(1), c).predict(rows);

    double base = 0.0;
    for (double v : y) base += v;
    base /= n;
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return x[a] < x[b]; });
    double g_total = 0.0;
    for (double v : y) g_total += base - v;
    double best = -1.0;
    int best_cut = -1;
    double gl_best = 0.0;
    double gl = 0.0;
    for (int k = 1; k < n; ++k) {
      gl += base - y[order[k - 1]];
      const double gr = g_total - gl;
      const double score = gl * gl / (k + lambda) + gr * gr / (n - k + lambda) - g_total * g_total / (n + lambda);
      if (score > best) {
        best = score;
        best_cut = k;
        gl_best = gl;
      }
    }
    for (int k = 0; k < n; ++k) {
      const int i = order[k];
      const bool left = k < best_cut;
      const double g = left ? gl_best : g_total - gl_best;
      const double h = left ? best_cut : n - best_cut;
      EXPECT_NEAR(p[i], base - g / (h + lambda), 1e-9) << "trial " << trial;
    }
  }
}

TEST(Train, ConstantTargetGivesConstantPredictions) {
  util::Rng rng(2);
  auto rows = testing::friedman_rows(rng, 60, 6, 0.0);
  for (auto& r : rows) r.target_lst = 33.25;
  TrainConfig c;
  c.n_estimators = 20;
  c.early_stopping_rounds = 0;
  const auto m = train(rows, testing::numbered_schema(6), c);
  for (double p : m.predict(rows)) EXPECT_EQ(p, 33.25);
  for (const auto& t : m.trees()) EXPECT_EQ(t.nodes.size(), 1u);
  EXPECT_TRUE(feature_importance(m).degenerate);
}

TEST(Train, DeterministicForSeedAndSensitiveToIt) {
  util::Rng rng(4);
  const auto rows = testing::friedman_rows(rng, 200, 8, 0.5);
  TrainConfig c;
  c.n_estimators = 40;
  c.early_stopping_rounds = 0;
  const auto schema = testing::numbered_schema(8);
  const auto a = train(rows, schema, c);
  const auto b = train(rows, schema, c);
  EXPECT_EQ(saved(a), saved(b));
  c.seed = 43;
  EXPECT_NE(saved(a), saved(train(rows, schema, c)));
}

TEST(Train, LeavesRespectMinChildWeight) {
  util::Rng rng(6);
  const auto rows = testing::friedman_rows(rng, 150, 5, 1.0);
  TrainConfig c;
  c.n_estimators = 30;
  c.early_stopping_rounds = 0;
  c.min_child_weight = 7.0;
  const auto m = train(rows, testing::numbered_schema(5), c);
  for (const auto& t : m.trees()) {
    EXPECT_LE(t.depth(), c.max_depth);
    for (const auto& node : t.nodes) {
      if (!node.leaf) {
        EXPECT_GE(t.nodes[node.left].cover, c.min_child_weight);
        EXPECT_GE(t.nodes[node.right].cover, c.min_child_weight);
        EXPECT_DOUBLE_EQ(node.cover, t.nodes[node.left].cover + t.nodes[node.right].cover);
      }
    }
  }
}

TEST(Train, TrainingRmseNeverIncreasesWithFullSampling) {
  util::Rng rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    const auto rows = testing::friedman_rows(rng, 120, 6, 1.0);
    TrainConfig c;
    c.n_estimators = 30;
    c.subsample = 1.0;
    c.colsample_bytree = trial % 2 ? 0.5 : 1.0;
    c.early_stopping_rounds = 0;
    c.learning_rate = 0.3;
    auto m = train(rows, testing::numbered_schema(6), c);
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k <= m.trees().size(); ++k) {
      m.set_best_iteration(k);
      const double r = rmse(m, rows);
      EXPECT_LE(r, prev + 1e-12) << "round " << k;
      prev = r;
    }
  }
}

TEST(Train, MemorizesDistinctPoints) {
  util::Rng rng(10);
  std::vector<FeatureRow> rows;
  for (int i = 0; i < 50; ++i) {
    FeatureRow r;
    r.point_id = "m" + std::to_string(i);
    r.values = {rng.uniform(), rng.uniform(), rng.uniform()};
    r.target_lst = rng.uniform(25, 45);
    rows.push_back(r);
  }
  auto c = plain(1);
  c.max_depth = 64;
  const auto m = train(rows, testing::numbered_schema(3), c);
  EXPECT_LT(rmse(m, rows), 1e-9);
}

TEST(Train, MissingValuesAreRoutedAndPredictable) {
  util::Rng rng(12);
  auto rows = testing::friedman_rows(rng, 100, 5, 0.2);
  for (std::size_t i = 0; i < rows.size(); i += 4) rows[i].values[3] = std::nan("");
  TrainConfig c;
  c.n_estimators = 25;
  c.early_stopping_rounds = 0;
  const auto m = train(rows, testing::numbered_schema(5), c);
  for (double p : m.predict(rows)) EXPECT_TRUE(std::isfinite(p));
  std::vector<double> all_missing(5, std::nan(""));
  EXPECT_TRUE(std::isfinite(m.predict(all_missing)));
}

TEST(Train, RejectsBadInput) {
  const auto schema = testing::numbered_schema(1);
  EXPECT_THROW(train(rows_1d({1.0}, {2.0}), schema, plain(1)), DataError);
  EXPECT_THROW(train(rows_1d({1.0, 2.0}, {2.0, 3.0}), testing::numbered_schema(2), plain(1)), SchemaError);
  auto c = plain(1);
  c.early_stopping_rounds = 5;
  EXPECT_THROW(train(rows_1d({1.0, 2.0}, {2.0, 3.0}), schema, c), ConfigError);
  const auto m = train(rows_1d({1.0, 2.0}, {2.0, 3.0}), schema, plain(1));
  std::vector<double> wrong(2, 0.0);
  EXPECT_THROW(m.predict(wrong), SchemaError);
}

TEST(Importance, SignalFeaturesDominateNoise) {
  util::Rng rng(14);
  const auto rows = testing::friedman_rows(rng, 400, 10, 0.5);
  TrainConfig c;
  c.n_estimators = 80;
  c.early_stopping_rounds = 0;
  const auto imp = feature_importance(train(rows, testing::numbered_schema(10), c));
  ASSERT_EQ(imp.weights.size(), 10u);
  EXPECT_FALSE(imp.degenerate);
  double sum = 0.0, signal = 0.0;
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_EQ(imp.weights[i].first, "x" + std::to_string(i));
    EXPECT_GE(imp.weights[i].second, 0.0);
    sum += imp.weights[i].second;
    if (i < 5) signal += imp.weights[i].second;
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_GT(signal, 0.8);
  EXPECT_GT(imp.weights[3].second, imp.weights[7].second);
}

TEST(EarlyStopping, KeepsAllTreesAndStopsAtBest) {
  util::Rng rng(16);
  const auto rows = testing::friedman_rows(rng, 150, 6, 3.0);
  TrainConfig c;
  c.n_estimators = 400;
  c.learning_rate = 0.3;
  c.early_stopping_rounds = 10;
  const auto m = train_with_early_stopping(rows, testing::numbered_schema(6), c, 99);
  EXPECT_GE(m.best_iteration(), 1u);
  EXPECT_LE(m.best_iteration(), m.trees().size());
  EXPECT_LT(m.trees().size(), 400u);
  EXPECT_EQ(m.trees().size() - m.best_iteration(), 10u);
}

TEST(EarlyStopping, SplitIsDeterministicAndDisjoint) {
  util::Rng rng(18);
  const auto rows = testing::friedman_rows(rng, 57, 3, 0.0);
  const auto a = early_stopping_split(rows, 5);
  auto shuffled = rows;
  rng.shuffle(shuffled);
  const auto b = early_stopping_split(shuffled, 5);
  ASSERT_EQ(a.eval.size(), 6u);
  EXPECT_EQ(a.train.size(), 51u);
  for (std::size_t i = 0; i < a.eval.size(); ++i) EXPECT_EQ(a.eval[i].point_id, b.eval[i].point_id);
  for (const auto& e : a.eval)
    for (const auto& t : a.train) EXPECT_NE(e.point_id, t.point_id);
}

TEST(EarlyStopping, TinyInputTrainsWithoutHoldBack) {
  const auto rows = rows_1d({0, 1, 2, 3}, {1, 2, 3, 4});
  TrainConfig c = plain(3);
  c.early_stopping_rounds = 5;
  const auto m = train_with_early_stopping(rows, testing::numbered_schema(1), c, 1);
  EXPECT_EQ(m.trees().size(), 3u);
  EXPECT_EQ(m.best_iteration(), 3u);
}

TEST(Model, SaveLoadRoundTripIsExact) {
  util::Rng rng(20);
  auto rows = testing::friedman_rows(rng, 100, 5, 0.5);
  rows[0].values[1] = std::nan("");
  TrainConfig c;
  c.n_estimators = 30;
  c.early_stopping_rounds = 0;
  const auto m = train(rows, testing::numbered_schema(5), c);
  const std::string text = saved(m);
  std::istringstream in(text);
  const auto back = load_model(in);
  EXPECT_EQ(saved(back), text);
  EXPECT_EQ(back.schema(), m.schema());
  const auto p = m.predict(rows), q = back.predict(rows);
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(p[i], q[i]);
}

TEST(Model, ZeroTreeModelRoundTrips) {
  auto c = plain(0);
  const auto m = train(rows_1d({0.0, 1.0}, {3.0, 4.0}), testing::numbered_schema(1), c);
  EXPECT_TRUE(m.trees().empty());
  std::istringstream in(saved(m));
  const auto back = load_model(in);
  std::vector<double> x{0.5};
  EXPECT_EQ(back.predict(x), 3.5);
}

TEST(Model, TruncatedOrForeignFileIsDataError) {
  util::Rng rng(22);
  TrainConfig c;
  c.n_estimators = 5;
  c.early_stopping_rounds = 0;
  const auto text = saved(train(testing::friedman_rows(rng, 50, 5, 0.1), testing::numbered_schema(5), c));
  for (std::size_t cut : {text.size() / 3, text.size() / 2, text.size() - 8}) {
    std::istringstream in(text.substr(0, cut));
    EXPECT_THROW(load_model(in), DataError) << cut;
  }
  std::istringstream foreign("ncols 3\n");
  EXPECT_THROW(load_model(foreign), DataError);
}

TEST(Model, HalvingLearningRateHalvesTheBoost) {
  util::Rng rng(24);
  const auto rows = testing::friedman_rows(rng, 80, 5, 0.1);
  TrainConfig c;
  c.n_estimators = 10;
  c.learning_rate = 0.5;
  c.early_stopping_rounds = 0;
  auto m = train(rows, testing::numbered_schema(5), c);
  const auto before = m.predict(rows);
  m.set_learning_rate(0.25);
  const auto after = m.predict(rows);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_NEAR(after[i] - m.base_score(), (before[i] - m.base_score()) / 2.0, 1e-12);
  }
}

}  // namespace
}  // namespace hothem::gbt
