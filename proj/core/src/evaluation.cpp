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

#include "hothem/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "hothem/error.hpp"
#include "hothem/util.hpp"

namespace hothem::eval {

using features::FeatureRow;

Metrics metrics(std::span<const double> y, std::span<const double> yhat) {
  if (y.size() != yhat.size()) {
    throw DataError("metrics: " + std::to_string(y.size()) + " targets vs " +
                    std::to_string(yhat.size()) + " predictions");
  }
  if (y.empty()) throw DataError("metrics: empty input");
  const double n = static_cast<double>(y.size());
  double y_mean = 0.0;
  for (double v : y) y_mean += v;
  y_mean /= n;
  double sse = 0.0, sae = 0.0, sst = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double e = y[i] - yhat[i];
    sse += e * e;
    sae += std::abs(e);
    sst += (y[i] - y_mean) * (y[i] - y_mean);
  }
  Metrics m;
  m.n = y.size();
  m.rmse = std::sqrt(sse / n);
  m.mae = sae / n;
  m.r2 = sst > 0.0 ? 1.0 - sse / sst : std::numeric_limits<double>::quiet_NaN();
  if (m.rmse < m.mae - 1e-9 * std::max(1.0, m.mae)) {
    throw std::logic_error("metrics: rmse below mae");
  }
  return m;
}

std::uint64_t fold_seed(std::uint64_t seed, std::string_view ward) {
  return seed ^ util::fnv1a(ward);
}

namespace {

Fold run_fold(const std::string& ward, const std::vector<FeatureRow>& rows,
              const features::FeatureSchema& schema, const gbt::TrainConfig& config) {
  std::vector<FeatureRow> train, test;
  for (const auto& r : rows) (r.ward == ward ? test : train).push_back(r);
  Fold fold;
  fold.ward = ward;
  for (const auto& r : train) fold.train_ids.push_back(r.point_id);
  for (const auto& r : test) fold.test_ids.push_back(r.point_id);
  const auto model = gbt::train_with_early_stopping(train, schema, config, fold_seed(config.seed, ward));
  fold.metrics = holdout_eval(model, test);
  return fold;
}

}  // namespace

CVReport spatial_cv(std::span<const FeatureRow> rows, const features::FeatureSchema& schema,
                    const gbt::TrainConfig& config) {
  std::vector<FeatureRow> used;
  for (const auto& r : rows) {
    if (r.ward != features::kNoWard && r.target_lst) used.push_back(r);
  }
  std::stable_sort(used.begin(), used.end(),
                   [](const FeatureRow& a, const FeatureRow& b) { return a.point_id < b.point_id; });
  std::map<std::string, std::size_t> counts;
  for (const auto& r : used) ++counts[r.ward];
  if (counts.size() < 2) {
    throw DataError("spatial_cv needs at least 2 wards, found " + std::to_string(counts.size()));
  }

  CVReport report;
  std::vector<std::string> fold_wards;
  for (const auto& [ward, n] : counts) {
    if (n < 2) {
      report.warnings.push_back("ward '" + ward + "' has " + std::to_string(n) +
                                " row(s); fold skipped");
    } else {
      fold_wards.push_back(ward);
    }
  }

  std::vector<std::future<Fold>> pending;
  for (const auto& ward : fold_wards) {
    pending.push_back(std::async(std::launch::async, [&, ward] {
      return run_fold(ward, used, schema, config);
    }));
  }
  for (auto& f : pending) report.folds.push_back(f.get());

  std::vector<double> rmse, r2, mae;
  for (const auto& f : report.folds) {
    rmse.push_back(f.metrics.rmse);
    mae.push_back(f.metrics.mae);
    if (std::isnan(f.metrics.r2)) {
      report.warnings.push_back("ward '" + f.ward + "' has a constant target; r2 undefined");
    } else {
      r2.push_back(f.metrics.r2);
    }
  }
  const auto nan = std::numeric_limits<double>::quiet_NaN();
  if (!rmse.empty()) {
    const auto s = util::mean_std(rmse);
    report.mean_rmse = s.mean;
    report.std_rmse = s.std;
    report.mean_mae = util::mean_std(mae).mean;
  } else {
    report.mean_rmse = report.std_rmse = report.mean_mae = nan;
  }
  if (!r2.empty()) {
    const auto s = util::mean_std(r2);
    report.mean_r2 = s.mean;
    report.std_r2 = s.std;
  } else {
    report.mean_r2 = report.std_r2 = nan;
  }
  return report;
}

Metrics holdout_eval(const gbt::GBTModel& model, std::span<const FeatureRow> holdout_rows) {
  const auto rows = features::with_target(holdout_rows);
  if (rows.empty()) throw DataError("holdout evaluation: no rows with targets");
  std::vector<double> y;
  for (const auto& r : rows) y.push_back(*r.target_lst);
  const auto yhat = model.predict(rows);
  return metrics(y, yhat);
}

Scores scores(const Metrics& train, const CVReport& cv, const Metrics& holdout) {
  Scores s;
  s.train_r2 = train.r2;
  s.train_rmse = train.rmse;
  s.cv_r2 = cv.mean_r2;
  s.cv_r2_std = cv.std_r2;
  s.cv_rmse = cv.mean_rmse;
  s.cv_rmse_std = cv.std_rmse;
  s.holdout_r2 = holdout.r2;
  s.holdout_rmse = holdout.rmse;
  s.holdout_mae = holdout.mae;
  return s;
}

Comparison comparison_report(const Scores& full, const Scores& deploy) {
  Comparison c;
  c.full_gap = full.train_r2 - full.holdout_r2;
  c.deploy_gap = deploy.train_r2 - deploy.holdout_r2;
  c.cv_r2_improvement = full.cv_r2 - deploy.cv_r2;
  c.holdout_r2_improvement = full.holdout_r2 - deploy.holdout_r2;
  c.cv_rmse_reduction = deploy.cv_rmse - full.cv_rmse;
  c.holdout_rmse_reduction = deploy.holdout_rmse - full.holdout_rmse;
  return c;
}

namespace {

std::string f4(double v) { return std::isnan(v) ? "n/a" : util::format_fixed(v, 4); }

std::string signed4(double v) {
  if (std::isnan(v)) return "n/a";
  return (v >= 0 ? "+" : "") + util::format_fixed(v, 4);
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

void fold_table(std::ostringstream& out, const std::string& title, const CVReport& cv) {
  out << title << '\n';
  out << "  " << pad("ward", 24) << pad("n", 8) << pad("rmse", 10) << pad("r2", 10) << "mae\n";
  for (const auto& f : cv.folds) {
    out << "  " << pad(f.ward, 24) << pad(std::to_string(f.metrics.n), 8)
        << pad(f4(f.metrics.rmse), 10) << pad(f4(f.metrics.r2), 10) << f4(f.metrics.mae) << '\n';
  }
  for (const auto& w : cv.warnings) out << "  warning: " << w << '\n';
}

}  // namespace

std::string format_report_text(const EvaluationReport& r) {
  std::ostringstream out;
  out << "Model performance (holdout ward: " << r.holdout_ward << ", " << r.holdout_rows
      << " rows)\n";
  out << pad("metric", 22) << pad("full", 20) << "deployment\n";
  auto pm = [](double m, double s) { return f4(m) + " +/- " + f4(s); };
  out << pad("training rows", 22) << pad(std::to_string(r.full_train_rows), 20)
      << r.deploy_train_rows << '\n';
  out << pad("training R2", 22) << pad(f4(r.full.train_r2), 20) << f4(r.deploy.train_r2) << '\n';
  out << pad("spatial CV RMSE", 22) << pad(pm(r.full.cv_rmse, r.full.cv_rmse_std), 20)
      << pm(r.deploy.cv_rmse, r.deploy.cv_rmse_std) << '\n';
  out << pad("spatial CV R2", 22) << pad(pm(r.full.cv_r2, r.full.cv_r2_std), 20)
      << pm(r.deploy.cv_r2, r.deploy.cv_r2_std) << '\n';
  out << pad("holdout RMSE", 22) << pad(f4(r.full.holdout_rmse), 20) << f4(r.deploy.holdout_rmse)
      << '\n';
  out << pad("holdout R2", 22) << pad(f4(r.full.holdout_r2), 20) << f4(r.deploy.holdout_r2) << '\n';
  out << pad("holdout MAE", 22) << pad(f4(r.full.holdout_mae), 20) << f4(r.deploy.holdout_mae)
      << "\n\n";

  out << "Generalization gap (train R2 - holdout R2)\n";
  out << "  full        " << f4(r.comparison.full_gap) << '\n';
  out << "  deployment  " << f4(r.comparison.deploy_gap) << "\n\n";

  out << "Contribution of streetscape features (full - deployment)\n";
  out << "  spatial CV R2 improvement   " << signed4(r.comparison.cv_r2_improvement) << '\n';
  out << "  holdout R2 improvement      " << signed4(r.comparison.holdout_r2_improvement) << '\n';
  out << "  spatial CV RMSE reduction   " << signed4(r.comparison.cv_rmse_reduction) << '\n';
  out << "  holdout RMSE reduction      " << signed4(r.comparison.holdout_rmse_reduction) << "\n\n";

  fold_table(out, "Full model folds", r.full_cv);
  fold_table(out, "Deployment model folds", r.deploy_cv);
  return out.str();
}

std::string format_report_csv(const EvaluationReport& r) {
  std::ostringstream out;
  out << "section,model,metric,value\n";
  auto row = [&](const char* section, const std::string& model, const char* metric, double v) {
    out << section << ',' << util::csv_escape(model) << ',' << metric << ','
        << (std::isnan(v) ? std::string() : util::format_sig(v, 9)) << '\n';
  };
  for (const auto& [name, s] : {std::pair{"full", &r.full}, std::pair{"deployment", &r.deploy}}) {
    row("performance", name, "train_r2", s->train_r2);
    row("performance", name, "cv_rmse_mean", s->cv_rmse);
    row("performance", name, "cv_rmse_std", s->cv_rmse_std);
    row("performance", name, "cv_r2_mean", s->cv_r2);
    row("performance", name, "cv_r2_std", s->cv_r2_std);
    row("performance", name, "holdout_rmse", s->holdout_rmse);
    row("performance", name, "holdout_r2", s->holdout_r2);
    row("performance", name, "holdout_mae", s->holdout_mae);
  }
  row("gap", "full", "train_minus_holdout_r2", r.comparison.full_gap);
  row("gap", "deployment", "train_minus_holdout_r2", r.comparison.deploy_gap);
  row("improvement", "full_minus_deployment", "cv_r2", r.comparison.cv_r2_improvement);
  row("improvement", "full_minus_deployment", "holdout_r2", r.comparison.holdout_r2_improvement);
  row("improvement", "deployment_minus_full", "cv_rmse", r.comparison.cv_rmse_reduction);
  row("improvement", "deployment_minus_full", "holdout_rmse", r.comparison.holdout_rmse_reduction);
  for (const auto& [name, cv] :
       {std::pair{"full", &r.full_cv}, std::pair{"deployment", &r.deploy_cv}}) {
    for (const auto& f : cv->folds) {
      const std::string model = std::string(name) + ":" + f.ward;
      row("fold", model, "rmse", f.metrics.rmse);
      row("fold", model, "r2", f.metrics.r2);
      row("fold", model, "mae", f.metrics.mae);
      row("fold", model, "n", static_cast<double>(f.metrics.n));
    }
  }
  return out.str();
}

}  // namespace hothem::eval
