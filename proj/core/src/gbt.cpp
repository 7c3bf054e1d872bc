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

#include "hothem/gbt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>

#include "hothem/error.hpp"
#include "hothem/util.hpp"

namespace hothem::gbt {

using features::FeatureRow;
using features::FeatureSchema;

void TrainConfig::validate() const {
  if (n_estimators < 0) throw ConfigError("n_estimators must be >= 0");
  if (max_depth < 1) throw ConfigError("max_depth must be >= 1");
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) {
    throw ConfigError("learning_rate must be in (0, 1]");
  }
  if (!(subsample > 0.0 && subsample <= 1.0)) throw ConfigError("subsample must be in (0, 1]");
  if (!(colsample_bytree > 0.0 && colsample_bytree <= 1.0)) {
    throw ConfigError("colsample_bytree must be in (0, 1]");
  }
  if (!(min_child_weight >= 0.0)) throw ConfigError("min_child_weight must be >= 0");
  if (!(reg_alpha >= 0.0)) throw ConfigError("reg_alpha must be >= 0");
  if (!(reg_lambda >= 0.0)) throw ConfigError("reg_lambda must be >= 0");
  if (early_stopping_rounds < 0) throw ConfigError("early_stopping_rounds must be >= 0");
}

double Tree::predict(std::span<const double> x) const {
  if (nodes.empty()) return 0.0;
  int i = 0;
  while (!nodes[i].leaf) {
    const TreeNode& n = nodes[i];
    const double v = x[n.feature];
    const bool left = std::isnan(v) ? n.missing_goes_left : v < n.threshold;
    i = left ? n.left : n.right;
  }
  return nodes[i].weight;
}

int Tree::depth() const {
  if (nodes.empty()) return 0;
  std::vector<int> d(nodes.size(), 0);
  int best = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    best = std::max(best, d[i]);
    if (!nodes[i].leaf) {
      d[nodes[i].left] = d[i] + 1;
      d[nodes[i].right] = d[i] + 1;
    }
  }
  return best;
}

GBTModel::GBTModel(FeatureSchema schema, TrainConfig config, double base_score)
    : schema_(std::move(schema)), config_(config), base_score_(base_score) {}

void GBTModel::set_best_iteration(std::size_t n) {
  if (n > trees_.size()) throw DataError("best_iteration exceeds tree count");
  best_iteration_ = n;
}

double GBTModel::predict(std::span<const double> x) const {
  if (x.size() != schema_.size()) {
    throw SchemaError("feature vector has " + std::to_string(x.size()) +
                      " values, model expects " + std::to_string(schema_.size()));
  }
  double sum = 0.0;
  for (std::size_t t = 0; t < best_iteration_; ++t) sum += trees_[t].predict(x);
  return base_score_ + config_.learning_rate * sum;
}

std::vector<double> GBTModel::predict(std::span<const FeatureRow> rows) const {
  std::vector<double> out(rows.size());
  util::parallel_for(rows.size(), [&](std::size_t i) { out[i] = predict(rows[i].values); });
  return out;
}

std::vector<double> GBTModel::gain_by_feature() const {
  std::vector<double> gain(schema_.size(), 0.0);
  for (std::size_t t = 0; t < best_iteration_; ++t) {
    for (const auto& n : trees_[t].nodes) {
      if (!n.leaf) gain[n.feature] += n.split_gain;
    }
  }
  return gain;
}

namespace {

struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }
};

Matrix to_matrix(std::span<const FeatureRow> rows, std::size_t cols) {
  Matrix m{rows.size(), cols, {}};
  m.data.reserve(rows.size() * cols);
  for (const auto& r : rows) m.data.insert(m.data.end(), r.values.begin(), r.values.end());
  return m;
}

double soft_threshold(double g, double alpha) {
  if (g > alpha) return g - alpha;
  if (g < -alpha) return g + alpha;
  return 0.0;
}

struct Regularizer {
  double alpha;
  double lambda;

  double score(double g, double h) const {
    const double denom = h + lambda;
    if (denom <= 0.0) return 0.0;
    const double t = soft_threshold(g, alpha);
    return t * t / denom;
  }
  double weight(double g, double h) const {
    const double denom = h + lambda;
    if (denom <= 0.0) return 0.0;
    return -soft_threshold(g, alpha) / denom;
  }
};

// Threshold strictly between two sorted distinct values so that lo goes left
// and hi goes right under "x < threshold".
double split_point(double lo, double hi) {
  const double mid = lo + (hi - lo) / 2.0;
  return mid > lo ? mid : hi;
}

struct NodeRows {
  std::vector<std::size_t> rows;                  // ascending row index
  std::vector<std::vector<std::size_t>> sorted;   // per active feature, by value
  std::vector<std::vector<std::size_t>> missing;  // per active feature
};

struct Split {
  double score = 0.0;
  std::size_t feature_slot = 0;
  double threshold = 0.0;
  bool missing_left = true;
};

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, const std::vector<double>& grad,
              const std::vector<int>& active_features, const TrainConfig& config)
      : x_(x),
        grad_(grad),
        features_(active_features),
        config_(config),
        reg_{config.reg_alpha, config.reg_lambda},
        goes_left_(x.rows, 0) {}

  Tree build(NodeRows root) {
    Tree tree;
    grow(tree, std::move(root), 0);
    return tree;
  }

 private:
  int grow(Tree& tree, NodeRows node, int depth) {
    double g_sum = 0.0;
    for (auto r : node.rows) g_sum += grad_[r];
    const double h_sum = static_cast<double>(node.rows.size());

    const int index = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes[index].cover = h_sum;

    std::optional<Split> split;
    if (depth < config_.max_depth && !uniform_gradient(node.rows)) {
      split = best_split(node, g_sum, h_sum);
    }
    if (!split) {
      tree.nodes[index].leaf = true;
      tree.nodes[index].weight = reg_.weight(g_sum, h_sum);
      return index;
    }

    const int feature = features_[split->feature_slot];
    for (auto r : node.rows) {
      const double v = x_.at(r, feature);
      goes_left_[r] = std::isnan(v) ? split->missing_left : v < split->threshold;
    }
    auto [left, right] = partition(node);
    node = NodeRows{};

    {
      TreeNode& n = tree.nodes[index];
      n.leaf = false;
      n.feature = feature;
      n.threshold = split->threshold;
      n.missing_goes_left = split->missing_left;
      n.split_gain = split->score;
    }
    const int l = grow(tree, std::move(left), depth + 1);
    const int r = grow(tree, std::move(right), depth + 1);
    tree.nodes[index].left = l;
    tree.nodes[index].right = r;
    return index;
  }

  bool uniform_gradient(const std::vector<std::size_t>& rows) const {
    for (auto r : rows) {
      if (grad_[r] != grad_[rows.front()]) return false;
    }
    return true;
  }

  std::optional<Split> best_split(const NodeRows& node, double g_sum, double h_sum) const {
    const double parent = reg_.score(g_sum, h_sum);
    const std::size_t total = node.rows.size();
    std::optional<Split> best;
    double best_score = 0.0;

    for (std::size_t slot = 0; slot < features_.size(); ++slot) {
      const int f = features_[slot];
      const auto& sorted = node.sorted[slot];
      const auto& miss = node.missing[slot];
      double g_miss = 0.0;
      for (auto r : miss) g_miss += grad_[r];
      const double h_miss = static_cast<double>(miss.size());

      double g_left = 0.0, h_left = 0.0;
      for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
        g_left += grad_[sorted[k]];
        h_left += 1.0;
        const double v = x_.at(sorted[k], f);
        const double next = x_.at(sorted[k + 1], f);
        if (v == next) continue;
        const double threshold = split_point(v, next);
        for (const bool missing_left : {true, false}) {
          if (!missing_left && miss.empty()) continue;
          const double gl = g_left + (missing_left ? g_miss : 0.0);
          const double hl = h_left + (missing_left ? h_miss : 0.0);
          const double gr = g_sum - gl;
          const double hr = h_sum - hl;
          const std::size_t nl = (k + 1) + (missing_left ? miss.size() : 0);
          if (nl == 0 || nl >= total) continue;
          if (hl < config_.min_child_weight || hr < config_.min_child_weight) continue;
          const double score = 0.5 * (reg_.score(gl, hl) + reg_.score(gr, hr) - parent);
          if (score > best_score) {
            best_score = score;
            best = Split{score, slot, threshold, missing_left};
          }
        }
      }
    }
    return best;
  }

  std::pair<NodeRows, NodeRows> partition(const NodeRows& node) const {
    NodeRows l, r;
    auto split_list = [&](const std::vector<std::size_t>& in, std::vector<std::size_t>& a,
                          std::vector<std::size_t>& b) {
      for (auto i : in) (goes_left_[i] ? a : b).push_back(i);
    };
    split_list(node.rows, l.rows, r.rows);
    l.sorted.resize(node.sorted.size());
    r.sorted.resize(node.sorted.size());
    l.missing.resize(node.missing.size());
    r.missing.resize(node.missing.size());
    for (std::size_t s = 0; s < node.sorted.size(); ++s) {
      split_list(node.sorted[s], l.sorted[s], r.sorted[s]);
      split_list(node.missing[s], l.missing[s], r.missing[s]);
    }
    return {std::move(l), std::move(r)};
  }

  const Matrix& x_;
  const std::vector<double>& grad_;
  const std::vector<int>& features_;
  const TrainConfig& config_;
  Regularizer reg_;
  mutable std::vector<char> goes_left_;
};

// First k entries of a seeded partial Fisher-Yates shuffle of [0, n).
std::vector<std::size_t> draw_subset(util::Rng& rng, std::size_t n, std::size_t k) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(perm[i], perm[j]);
  }
  perm.resize(k);
  std::sort(perm.begin(), perm.end());
  return perm;
}

std::size_t sample_count(double rate, std::size_t n) {
  if (rate >= 1.0) return n;
  const auto k = static_cast<std::size_t>(std::llround(rate * static_cast<double>(n)));
  return std::clamp<std::size_t>(k, 1, n);
}

void check_schema(std::span<const FeatureRow> rows, const FeatureSchema& schema,
                  const char* what) {
  for (const auto& r : rows) {
    if (r.values.size() != schema.size()) {
      throw SchemaError(std::string(what) + " row '" + r.point_id + "' has " +
                        std::to_string(r.values.size()) + " values, schema has " +
                        std::to_string(schema.size()));
    }
  }
}

}  // namespace

GBTModel train(std::span<const FeatureRow> rows, const FeatureSchema& schema,
               const TrainConfig& config, std::span<const FeatureRow> eval_rows) {
  config.validate();
  if (schema.size() == 0) throw ConfigError("cannot train on an empty feature schema");
  check_schema(rows, schema, "training");
  check_schema(eval_rows, schema, "eval");
  const auto train_rows = features::with_target(rows);
  if (train_rows.size() < 2) {
    throw DataError("training needs at least 2 rows with a target, got " +
                    std::to_string(train_rows.size()));
  }
  const auto eval_set = features::with_target(eval_rows);
  const bool early_stopping = config.early_stopping_rounds > 0;
  if (early_stopping && eval_set.empty()) {
    throw ConfigError("early stopping is enabled but no eval rows with targets were given");
  }

  const Matrix x = to_matrix(train_rows, schema.size());
  const std::size_t n = x.rows;
  const std::size_t d = x.cols;
  std::vector<double> y(n);
  long double y_sum = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = *train_rows[i].target_lst;
    y_sum += y[i];
  }
  const double base = static_cast<double>(y_sum / static_cast<long double>(n));
  GBTModel model(schema, config, base);

  // Global per-feature order, ties broken by row index.
  std::vector<std::vector<std::size_t>> presorted(d), missing(d);
  for (std::size_t f = 0; f < d; ++f) {
    for (std::size_t i = 0; i < n; ++i) {
      (std::isnan(x.at(i, f)) ? missing[f] : presorted[f]).push_back(i);
    }
    std::stable_sort(presorted[f].begin(), presorted[f].end(),
                     [&](std::size_t a, std::size_t b) { return x.at(a, f) < x.at(b, f); });
  }

  const Matrix eval_x = to_matrix(eval_set, schema.size());
  std::vector<double> leaf_sum(n, 0.0), eval_sum(eval_set.size(), 0.0);
  std::vector<double> grad(n, 0.0);
  std::vector<char> in_sample(n, 0);
  double best_rmse = std::numeric_limits<double>::infinity();
  std::size_t best_round = 0;

  for (int round = 0; round < config.n_estimators; ++round) {
    util::Rng rng(config.seed, static_cast<std::uint64_t>(round));
    const auto rows_used = draw_subset(rng, n, sample_count(config.subsample, n));
    const auto cols_drawn = draw_subset(rng, d, sample_count(config.colsample_bytree, d));
    std::vector<int> cols(cols_drawn.begin(), cols_drawn.end());

    std::fill(in_sample.begin(), in_sample.end(), 0);
    for (auto r : rows_used) in_sample[r] = 1;
    for (std::size_t i = 0; i < n; ++i) {
      grad[i] = (base + config.learning_rate * leaf_sum[i]) - y[i];
    }

    NodeRows root;
    root.rows = rows_used;
    root.sorted.resize(cols.size());
    root.missing.resize(cols.size());
    for (std::size_t s = 0; s < cols.size(); ++s) {
      for (auto r : presorted[cols[s]]) {
        if (in_sample[r]) root.sorted[s].push_back(r);
      }
      for (auto r : missing[cols[s]]) {
        if (in_sample[r]) root.missing[s].push_back(r);
      }
    }

    TreeBuilder builder(x, grad, cols, config);
    Tree tree = builder.build(std::move(root));
    for (std::size_t i = 0; i < n; ++i) leaf_sum[i] += tree.predict(x.row(i));

    if (early_stopping) {
      double sse = 0.0;
      for (std::size_t i = 0; i < eval_set.size(); ++i) {
        eval_sum[i] += tree.predict(eval_x.row(i));
        const double e = base + config.learning_rate * eval_sum[i] - *eval_set[i].target_lst;
        sse += e * e;
      }
      const double rmse = std::sqrt(sse / static_cast<double>(eval_set.size()));
      model.add_tree(std::move(tree));
      if (rmse < best_rmse) {
        best_rmse = rmse;
        best_round = model.trees().size();
      } else if (model.trees().size() - best_round >=
                 static_cast<std::size_t>(config.early_stopping_rounds)) {
        break;
      }
    } else {
      model.add_tree(std::move(tree));
    }
  }
  model.set_best_iteration(early_stopping ? best_round : model.trees().size());
  return model;
}

FeatureImportance feature_importance(const GBTModel& model) {
  const auto gain = model.gain_by_feature();
  double total = 0.0;
  for (double g : gain) total += g;
  FeatureImportance out;
  const auto& names = model.schema().names();
  if (!(total > 0.0)) {
    out.degenerate = true;
    const double u = names.empty() ? 0.0 : 1.0 / static_cast<double>(names.size());
    for (const auto& n : names) out.weights.emplace_back(n, u);
    return out;
  }
  for (std::size_t i = 0; i < names.size(); ++i) out.weights.emplace_back(names[i], gain[i] / total);
  return out;
}

namespace {

constexpr const char* kModelMagic = "hothem-gbt-model";
constexpr int kModelVersion = 1;

std::string hex(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%a", v);
  return buf;
}

class ModelReader {
 public:
  explicit ModelReader(std::istream& in) : in_(in) {}

  std::string token(const char* what) {
    std::string t;
    if (!(in_ >> t)) throw DataError(std::string("model file truncated reading ") + what);
    return t;
  }
  void expect(const char* key) {
    const auto t = token(key);
    if (t != key) throw DataError("model file: expected '" + std::string(key) + "', found '" + t + "'");
  }
  double real(const char* what) {
    const auto t = token(what);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end == t.c_str() || *end != '\0') {
      throw DataError(std::string("model file: bad number for ") + what + ": " + t);
    }
    return v;
  }
  long long integer(const char* what) {
    const auto v = util::parse_int(token(what));
    if (!v) throw DataError(std::string("model file: bad integer for ") + what);
    return *v;
  }
  double keyed_real(const char* key) {
    expect(key);
    return real(key);
  }
  long long keyed_int(const char* key) {
    expect(key);
    return integer(key);
  }

 private:
  std::istream& in_;
};

int read_node(ModelReader& r, Tree& tree, std::size_t n_features, std::size_t remaining_depth) {
  if (remaining_depth == 0) throw DataError("model file: tree nesting too deep");
  const auto kind = r.token("node kind");
  const int index = static_cast<int>(tree.nodes.size());
  tree.nodes.emplace_back();
  if (kind == "leaf") {
    const double w = r.real("leaf weight");
    const double cover = r.real("leaf cover");
    tree.nodes[index].leaf = true;
    tree.nodes[index].weight = w;
    tree.nodes[index].cover = cover;
    return index;
  }
  if (kind != "split") throw DataError("model file: unknown node kind '" + kind + "'");
  const auto feature = r.integer("split feature");
  if (feature < 0 || static_cast<std::size_t>(feature) >= n_features) {
    throw DataError("model file: split feature index out of range");
  }
  TreeNode n;
  n.leaf = false;
  n.feature = static_cast<int>(feature);
  n.threshold = r.real("threshold");
  n.missing_goes_left = r.integer("missing direction") != 0;
  n.split_gain = r.real("split gain");
  n.cover = r.real("cover");
  tree.nodes[index] = n;
  const int left = read_node(r, tree, n_features, remaining_depth - 1);
  const int right = read_node(r, tree, n_features, remaining_depth - 1);
  tree.nodes[index].left = left;
  tree.nodes[index].right = right;
  return index;
}

void write_node(std::ostream& out, const Tree& tree, int i) {
  const auto& n = tree.nodes[i];
  if (n.leaf) {
    out << "leaf " << hex(n.weight) << ' ' << hex(n.cover) << '\n';
    return;
  }
  out << "split " << n.feature << ' ' << hex(n.threshold) << ' ' << (n.missing_goes_left ? 1 : 0)
      << ' ' << hex(n.split_gain) << ' ' << hex(n.cover) << '\n';
  write_node(out, tree, n.left);
  write_node(out, tree, n.right);
}

}  // namespace

void save_model(const GBTModel& model, std::ostream& out) {
  const auto& c = model.config();
  out << kModelMagic << ' ' << kModelVersion << '\n';
  out << "features " << model.schema().size() << '\n';
  for (const auto& name : model.schema().names()) out << "name " << name << '\n';
  out << "n_estimators " << c.n_estimators << '\n'
      << "max_depth " << c.max_depth << '\n'
      << "learning_rate " << hex(c.learning_rate) << '\n'
      << "subsample " << hex(c.subsample) << '\n'
      << "colsample_bytree " << hex(c.colsample_bytree) << '\n'
      << "min_child_weight " << hex(c.min_child_weight) << '\n'
      << "reg_alpha " << hex(c.reg_alpha) << '\n'
      << "reg_lambda " << hex(c.reg_lambda) << '\n'
      << "early_stopping_rounds " << c.early_stopping_rounds << '\n'
      << "seed " << c.seed << '\n'
      << "base_score " << hex(model.base_score()) << '\n'
      << "best_iteration " << model.best_iteration() << '\n'
      << "trees " << model.trees().size() << '\n';
  for (const auto& tree : model.trees()) {
    out << "tree " << tree.nodes.size() << '\n';
    if (!tree.nodes.empty()) write_node(out, tree, 0);
  }
  out << "end\n";
}

void save_model(const GBTModel& model, const std::filesystem::path& path) {
  std::ostringstream ss;
  save_model(model, ss);
  util::write_file(path, ss.str());
}

GBTModel load_model(std::istream& in) {
  ModelReader r(in);
  const auto magic = r.token("header");
  if (magic != kModelMagic) throw DataError("not a hothem model file");
  const auto version = r.integer("version");
  if (version != kModelVersion) {
    throw DataError("unsupported model version " + std::to_string(version));
  }
  const auto n_features = r.keyed_int("features");
  if (n_features < 0 || n_features > 100000) throw DataError("model file: bad feature count");
  std::vector<std::string> names;
  for (long long i = 0; i < n_features; ++i) {
    r.expect("name");
    names.push_back(r.token("feature name"));
  }
  TrainConfig c;
  c.n_estimators = static_cast<int>(r.keyed_int("n_estimators"));
  c.max_depth = static_cast<int>(r.keyed_int("max_depth"));
  c.learning_rate = r.keyed_real("learning_rate");
  c.subsample = r.keyed_real("subsample");
  c.colsample_bytree = r.keyed_real("colsample_bytree");
  c.min_child_weight = r.keyed_real("min_child_weight");
  c.reg_alpha = r.keyed_real("reg_alpha");
  c.reg_lambda = r.keyed_real("reg_lambda");
  c.early_stopping_rounds = static_cast<int>(r.keyed_int("early_stopping_rounds"));
  r.expect("seed");
  const auto seed_tok = r.token("seed");
  c.seed = std::strtoull(seed_tok.c_str(), nullptr, 10);
  c.validate();
  const double base = r.keyed_real("base_score");
  const auto best = r.keyed_int("best_iteration");
  const auto n_trees = r.keyed_int("trees");
  if (n_trees < 0 || best < 0 || best > n_trees) throw DataError("model file: bad tree counts");

  GBTModel model(FeatureSchema(std::move(names)), c, base);
  for (long long t = 0; t < n_trees; ++t) {
    const auto size = r.keyed_int("tree");
    Tree tree;
    if (size > 0) read_node(r, tree, static_cast<std::size_t>(n_features), 4096);
    if (static_cast<long long>(tree.nodes.size()) != size) {
      throw DataError("model file: tree " + std::to_string(t) + " node count mismatch");
    }
    model.add_tree(std::move(tree));
  }
  r.expect("end");
  model.set_best_iteration(static_cast<std::size_t>(best));
  return model;
}

GBTModel load_model(const std::filesystem::path& path) {
  std::istringstream in(util::read_file(path));
  try {
    return load_model(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

EarlyStoppingSplit early_stopping_split(std::span<const FeatureRow> rows, std::uint64_t seed,
                                        double eval_fraction) {
  auto ordered = features::with_target(rows);
  auto by_id = [](const FeatureRow& a, const FeatureRow& b) { return a.point_id < b.point_id; };
  std::stable_sort(ordered.begin(), ordered.end(), by_id);
  std::vector<std::size_t> idx(ordered.size());
  std::iota(idx.begin(), idx.end(), 0);
  util::Rng rng(seed);
  rng.shuffle(idx);
  const std::size_t k = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(eval_fraction * static_cast<double>(ordered.size()))),
      1, ordered.size() > 1 ? ordered.size() - 1 : 1);
  std::vector<char> is_eval(ordered.size(), 0);
  for (std::size_t i = 0; i < k && i < idx.size(); ++i) is_eval[idx[i]] = 1;
  EarlyStoppingSplit out;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    (is_eval[i] ? out.eval : out.train).push_back(ordered[i]);
  }
  return out;
}

namespace {
// Below this many rows an early-stopping hold-back leaves too little to fit.
constexpr std::size_t kMinRowsForEarlyStopping = 10;
}  // namespace

GBTModel train_with_early_stopping(std::span<const FeatureRow> rows, const FeatureSchema& schema,
                                   const TrainConfig& config, std::uint64_t split_seed) {
  const auto labelled = features::with_target(rows);
  if (config.early_stopping_rounds > 0 && labelled.size() >= kMinRowsForEarlyStopping) {
    const auto split = early_stopping_split(labelled, split_seed);
    return train(split.train, schema, config, split.eval);
  }
  TrainConfig no_stop = config;
  no_stop.early_stopping_rounds = 0;
  auto ordered = labelled;
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const FeatureRow& a, const FeatureRow& b) { return a.point_id < b.point_id; });
  return train(ordered, schema, no_stop);
}

}  // namespace hothem::gbt
