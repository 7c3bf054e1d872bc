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
#include <set>

#include "hothem/error.hpp"
#include "hothem/evaluation.hpp"
#include "test_support.hpp"

namespace hothem::eval {
namespace {

using features::FeatureRow;

TEST(Metrics, Examples) {
  const std::vector<double> y{0, 1, 2}, p{0, 1, 5};
  const auto m = metrics(y, p);
  EXPECT_NEAR(m.rmse, std::sqrt(3.0), 1e-15);
  EXPECT_DOUBLE_EQ(m.mae, 1.0);
  EXPECT_DOUBLE_EQ(m.r2, -3.5);
  EXPECT_EQ(m.n, 3u);

  const auto z = metrics(std::vector<double>{0, 2}, std::vector<double>{1, 1});
  EXPECT_DOUBLE_EQ(z.rmse, 1.0);
  EXPECT_DOUBLE_EQ(z.r2, 0.0);

  const auto perfect = metrics(y, y);
  EXPECT_EQ(perfect.rmse, 0.0);
  EXPECT_EQ(perfect.r2, 1.0);
}

TEST(Metrics, ConstantTargetAndBadInput) {
  EXPECT_TRUE(std::isnan(metrics(std::vector<double>{3, 3}, std::vector<double>{3, 4}).r2));
  EXPECT_THROW(metrics(std::vector<double>{}, std::vector<double>{}), DataError);
  EXPECT_THROW(metrics(std::vector<double>{1, 2}, std::vector<double>{1}), DataError);
}

TEST(Metrics, RmseDominatesMaeOnRandomInput) {
  util::Rng rng(1);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> y(1 + rng.below(40)), p(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      y[i] = rng.uniform(-10, 10);
      p[i] = y[i] + rng.normal() * rng.uniform(0, 3);
    }
    const auto m = metrics(y, p);
    EXPECT_GE(m.rmse + 1e-12, m.mae);
  }
}

std::vector<FeatureRow> ward_rows(util::Rng& rng, const std::vector<std::string>& wards, int per_ward,
                                  const std::string& shifted = "", double shift = 0.0) {
  std::vector<FeatureRow> rows;
  for (const auto& w : wards) {
    auto part = testing::friedman_rows(rng, per_ward, 5, 0.3);
    for (std::size_t i = 0; i < part.size(); ++i) {
      part[i].point_id = w + "-" + std::to_string(i);
      part[i].ward = w;
      if (w == shifted) *part[i].target_lst += shift;
      rows.push_back(part[i]);
    }
  }
  return rows;
}

gbt::TrainConfig quick() {
  gbt::TrainConfig c;
  c.n_estimators = 60;
  c.learning_rate = 0.2;
  c.early_stopping_rounds = 10;
  return c;
}

TEST(SpatialCv, OneFoldPerWardWithDisjointSets) {
  util::Rng rng(3);
  auto rows = ward_rows(rng, {"C", "A", "B"}, 40);
  rows.push_back(rows.front());
  rows.back().point_id = "loose";
  rows.back().ward = std::string(features::kNoWard);
  const auto cv = spatial_cv(rows, testing::numbered_schema(5), quick());
  ASSERT_EQ(cv.folds.size(), 3u);
  EXPECT_EQ(cv.folds[0].ward, "A");
  EXPECT_EQ(cv.folds[2].ward, "C");
  for (const auto& f : cv.folds) {
    EXPECT_EQ(f.test_ids.size(), 40u);
    EXPECT_EQ(f.train_ids.size(), 80u);
    std::set<std::string> train(f.train_ids.begin(), f.train_ids.end());
    for (const auto& id : f.test_ids) {
      EXPECT_EQ(id.substr(0, 1), f.ward);
      EXPECT_FALSE(train.contains(id));
    }
    for (const auto& id : f.train_ids) EXPECT_NE(id.substr(0, 1), f.ward);
  }
  std::vector<double> r;
  for (const auto& f : cv.folds) r.push_back(f.metrics.rmse);
  const auto s = util::mean_std(r);
  EXPECT_DOUBLE_EQ(cv.mean_rmse, s.mean);
  EXPECT_DOUBLE_EQ(cv.std_rmse, s.std);
}

TEST(SpatialCv, InvariantToRowOrder) {
  util::Rng rng(5);
  auto rows = ward_rows(rng, {"A", "B", "C", "D"}, 30);
  const auto a = spatial_cv(rows, testing::numbered_schema(5), quick());
  rng.shuffle(rows);
  const auto b = spatial_cv(rows, testing::numbered_schema(5), quick());
  ASSERT_EQ(a.folds.size(), b.folds.size());
  for (std::size_t i = 0; i < a.folds.size(); ++i) {
    EXPECT_EQ(a.folds[i].metrics.rmse, b.folds[i].metrics.rmse);
    EXPECT_EQ(a.folds[i].metrics.r2, b.folds[i].metrics.r2);
  }
  EXPECT_EQ(a.mean_r2, b.mean_r2);
}

TEST(SpatialCv, ShiftedWardHasWorstR2) {
  util::Rng rng(7);
  const auto rows = ward_rows(rng, {"A", "B", "C"}, 60, "C", 6.0);
  const auto cv = spatial_cv(rows, testing::numbered_schema(5), quick());
  ASSERT_EQ(cv.folds.size(), 3u);
  EXPECT_LT(cv.folds[2].metrics.r2, cv.folds[0].metrics.r2);
  EXPECT_LT(cv.folds[2].metrics.r2, cv.folds[1].metrics.r2);
}

TEST(SpatialCv, SmallWardSkippedAndConstantWardExcluded) {
  util::Rng rng(9);
  auto rows = ward_rows(rng, {"A", "B"}, 30);
  auto lone = rows.front();
  lone.point_id = "solo";
  lone.ward = "S";
  rows.push_back(lone);
  for (int i = 0; i < 5; ++i) {
    auto r = rows[i];
    r.point_id = "flat" + std::to_string(i);
    r.ward = "F";
    r.target_lst = 30.0;
    rows.push_back(r);
  }
  const auto cv = spatial_cv(rows, testing::numbered_schema(5), quick());
  EXPECT_EQ(cv.folds.size(), 3u);
  EXPECT_EQ(cv.warnings.size(), 2u);
  std::vector<double> r2;
  for (const auto& f : cv.folds)
    if (!std::isnan(f.metrics.r2)) r2.push_back(f.metrics.r2);
  EXPECT_EQ(r2.size(), 2u);
  EXPECT_DOUBLE_EQ(cv.mean_r2, util::mean_std(r2).mean);
}

TEST(SpatialCv, NeedsTwoWards) {
  util::Rng rng(11);
  EXPECT_THROW(spatial_cv(ward_rows(rng, {"A"}, 20), testing::numbered_schema(5), quick()), DataError);
}

TEST(Holdout, UnseenWardIsNeverIngested) {
  util::Rng rng(13);
  const auto rows = ward_rows(rng, {"A", "B", "C"}, 40);
  std::vector<FeatureRow> train_rows, holdout;
  for (const auto& r : rows) (r.ward == "C" ? holdout : train_rows).push_back(r);
  gbt::TrainConfig c = quick();
  c.early_stopping_rounds = 0;
  const auto model = gbt::train(train_rows, testing::numbered_schema(5), c);
  const auto m = holdout_eval(model, holdout);
  EXPECT_EQ(m.n, 40u);
  for (const auto& r : train_rows) EXPECT_NE(r.ward, "C");
  const auto seen = holdout_eval(model, train_rows);
  EXPECT_LT(seen.rmse, m.rmse);
  EXPECT_THROW(holdout_eval(model, std::vector<FeatureRow>{}), DataError);
}

TEST(FoldSeed, KeyedByWardName) {
  EXPECT_EQ(fold_seed(42, "A"), 42 ^ util::fnv1a("A"));
  EXPECT_NE(fold_seed(42, "A"), fold_seed(42, "B"));
}

TEST(Comparison, ReproducesPublishedArithmetic) {
  Scores full, deploy;
  full.train_r2 = 0.8285;
  full.cv_r2 = 0.5079;
  full.holdout_r2 = 0.7180;
  deploy.cv_r2 = 0.4549;
  deploy.holdout_r2 = 0.6946;
  full.cv_rmse = 1.0;
  deploy.cv_rmse = 1.25;
  const auto c = comparison_report(full, deploy);
  EXPECT_EQ(c.cv_r2_improvement, 0.5079 - 0.4549);
  EXPECT_EQ(util::format_fixed(c.cv_r2_improvement, 4), "0.0530");
  EXPECT_EQ(util::format_fixed(c.holdout_r2_improvement, 4), "0.0234");
  EXPECT_EQ(util::format_fixed(c.full_gap, 4), "0.1105");
  EXPECT_DOUBLE_EQ(c.cv_rmse_reduction, 0.25);

  EvaluationReport report;
  report.full = full;
  report.deploy = deploy;
  report.comparison = c;
  const auto text = format_report_text(report);
  EXPECT_NE(text.find("+0.0530"), std::string::npos);
  EXPECT_NE(text.find("+0.0234"), std::string::npos);
  EXPECT_NE(text.find("0.1105"), std::string::npos);
  const auto csv = format_report_csv(report);
  EXPECT_EQ(csv.rfind("section,model,metric,value\n", 0), 0u);
  EXPECT_NE(csv.find("improvement,full_minus_deployment,cv_r2,0.053"), std::string::npos);
}

TEST(Comparison, DeltasAreDirectDifferences) {
  util::Rng rng(15);
  for (int t = 0; t < 100; ++t) {
    Scores a, b;
    a.train_r2 = rng.uniform();
    a.holdout_r2 = rng.uniform();
    a.cv_r2 = rng.uniform();
    a.holdout_rmse = rng.uniform(0, 3);
    b.train_r2 = rng.uniform();
    b.holdout_r2 = rng.uniform();
    b.cv_r2 = rng.uniform();
    b.holdout_rmse = rng.uniform(0, 3);
    const auto c = comparison_report(a, b);
    EXPECT_EQ(c.full_gap, a.train_r2 - a.holdout_r2);
    EXPECT_EQ(c.deploy_gap, b.train_r2 - b.holdout_r2);
    EXPECT_EQ(c.cv_r2_improvement, a.cv_r2 - b.cv_r2);
    EXPECT_EQ(c.holdout_rmse_reduction, b.holdout_rmse - a.holdout_rmse);
  }
}

}  // namespace
}  // namespace hothem::eval
