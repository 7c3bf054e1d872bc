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

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hothem/features.hpp"
#include "hothem/gbt.hpp"

namespace hothem::eval {

struct Metrics {
  double rmse = 0.0;
  double r2 = 0.0;  // NaN when the observed values are constant
  double mae = 0.0;
  std::size_t n = 0;
};

// Throws DataError on empty input or mismatched lengths.
Metrics metrics(std::span<const double> y, std::span<const double> yhat);

struct Fold {
  std::string ward;
  Metrics metrics;
  std::vector<std::string> train_ids;
  std::vector<std::string> test_ids;
};

struct CVReport {
  std::vector<Fold> folds;  // sorted by ward name
  double mean_rmse = 0.0;
  double std_rmse = 0.0;  // population
  double mean_r2 = 0.0;   // over folds with a defined r2
  double std_r2 = 0.0;
  double mean_mae = 0.0;
  std::vector<std::string> warnings;
};

// Leave-one-ward-out cross-validation over the rows' ward labels. Rows
// labelled features::kNoWard are not used. Each fold trains with its own
// early-stopping split, seeded from config.seed and the ward name. Folds run
// concurrently; the result does not depend on row order.
CVReport spatial_cv(std::span<const features::FeatureRow> rows,
                    const features::FeatureSchema& schema, const gbt::TrainConfig& config);

// Early-stopping split seed used for a fold that holds out `ward`.
std::uint64_t fold_seed(std::uint64_t seed, std::string_view ward);

Metrics holdout_eval(const gbt::GBTModel& model,
                     std::span<const features::FeatureRow> holdout_rows);

struct Scores {
  double train_r2 = 0.0;
  double train_rmse = 0.0;
  double cv_r2 = 0.0;
  double cv_r2_std = 0.0;
  double cv_rmse = 0.0;
  double cv_rmse_std = 0.0;
  double holdout_r2 = 0.0;
  double holdout_rmse = 0.0;
  double holdout_mae = 0.0;
};

Scores scores(const Metrics& train, const CVReport& cv, const Metrics& holdout);

struct Comparison {
  double full_gap = 0.0;    // train_r2 - holdout_r2
  double deploy_gap = 0.0;
  double cv_r2_improvement = 0.0;       // full - deployment
  double holdout_r2_improvement = 0.0;
  double cv_rmse_reduction = 0.0;       // deployment - full
  double holdout_rmse_reduction = 0.0;
};

Comparison comparison_report(const Scores& full, const Scores& deploy);

struct EvaluationReport {
  Scores full;
  Scores deploy;
  CVReport full_cv;
  CVReport deploy_cv;
  Comparison comparison;
  std::string holdout_ward;
  std::size_t full_train_rows = 0;
  std::size_t deploy_train_rows = 0;
  std::size_t holdout_rows = 0;
};

std::string format_report_text(const EvaluationReport& report);
// Long format: section,model,metric,value
std::string format_report_csv(const EvaluationReport& report);

}  // namespace hothem::eval
