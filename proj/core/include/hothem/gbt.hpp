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
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hothem/features.hpp"

namespace hothem::gbt {

// Hyperparameters of the second-order boosted regression trees. Defaults
// are the values used for both the full and deployment LST models.
struct TrainConfig {
  int n_estimators = 500;
  int max_depth = 5;
  double learning_rate = 0.05;
  double subsample = 0.8;
  double colsample_bytree = 0.8;
  double min_child_weight = 5.0;
  double reg_alpha = 0.5;
  double reg_lambda = 2.0;
  int early_stopping_rounds = 50;  // 0 disables early stopping
  std::uint64_t seed = 42;

  // Throws ConfigError on out-of-range values.
  void validate() const;
};

struct TreeNode {
  bool leaf = true;
  // internal
  int feature = -1;
  double threshold = 0.0;  // x < threshold goes left
  int left = -1;
  int right = -1;
  bool missing_goes_left = true;
  double split_gain = 0.0;
  // leaf
  double weight = 0.0;
  // hessian sum (row count under squared error) of training rows reaching
  // the node
  double cover = 0.0;
};

// Nodes in preorder; nodes[0] is the root.
struct Tree {
  std::vector<TreeNode> nodes;

  double predict(std::span<const double> x) const;
  int depth() const;
};

class GBTModel {
 public:
  GBTModel() = default;
  GBTModel(features::FeatureSchema schema, TrainConfig config, double base_score);

  const features::FeatureSchema& schema() const { return schema_; }
  const TrainConfig& config() const { return config_; }
  double base_score() const { return base_score_; }
  double learning_rate() const { return config_.learning_rate; }
  const std::vector<Tree>& trees() const { return trees_; }
  std::size_t best_iteration() const { return best_iteration_; }

  // base_score + learning_rate * sum of leaf weights over the first
  // best_iteration trees. NaN inputs follow each split's default direction.
  double predict(std::span<const double> x) const;
  std::vector<double> predict(std::span<const features::FeatureRow> rows) const;

  // Accumulated split gain per schema feature over the trees in use.
  std::vector<double> gain_by_feature() const;

  // Used by the trainer and the loader.
  void add_tree(Tree tree) { trees_.push_back(std::move(tree)); }
  void set_best_iteration(std::size_t n);
  // Replaces the learning rate while keeping the trees.
  void set_learning_rate(double lr) { config_.learning_rate = lr; }

 private:
  features::FeatureSchema schema_{std::vector<std::string>{}};
  TrainConfig config_;
  double base_score_ = 0.0;
  std::vector<Tree> trees_;
  std::size_t best_iteration_ = 0;
};

// Squared-error boosting with exact greedy splits and L1/L2 regularised
// leaf weights. Rows without a target are ignored. When early stopping is
// enabled, eval_rows must be non-empty; boosting stops once eval RMSE has
// not improved for early_stopping_rounds rounds and the model keeps the
// best round. Identical inputs give bit-identical models.
GBTModel train(std::span<const features::FeatureRow> rows,
               const features::FeatureSchema& schema, const TrainConfig& config,
               std::span<const features::FeatureRow> eval_rows = {});

struct FeatureImportance {
  std::vector<std::pair<std::string, double>> weights;  // schema order, sums to 1
  bool degenerate = false;  // no split gain at all; weights are uniform
};

FeatureImportance feature_importance(const GBTModel& model);

// Plain-text format, versioned by its first line. Reals are stored as
// hexadecimal floats so a reloaded model predicts bit-identically.
void save_model(const GBTModel& model, std::ostream& out);
void save_model(const GBTModel& model, const std::filesystem::path& path);
GBTModel load_model(std::istream& in);
GBTModel load_model(const std::filesystem::path& path);

// Deterministic 10% (by default) early-stopping hold-back of a training
// set. Rows are ordered by point id before the seeded shuffle, so the split
// does not depend on input order.
struct EarlyStoppingSplit {
  std::vector<features::FeatureRow> train;
  std::vector<features::FeatureRow> eval;
};
EarlyStoppingSplit early_stopping_split(std::span<const features::FeatureRow> rows,
                                        std::uint64_t seed, double eval_fraction = 0.1);

// Trains on `rows` with an internal early-stopping split when the config
// asks for early stopping (and the set is large enough to hold some back).
GBTModel train_with_early_stopping(std::span<const features::FeatureRow> rows,
                                   const features::FeatureSchema& schema,
                                   const TrainConfig& config, std::uint64_t split_seed);

}  // namespace hothem::gbt
