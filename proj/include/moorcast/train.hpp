// Copyright 2026 The Moorcast Authors. All Rights Reserved.
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

// Surrogate training: per-target linear, baseline and tuned boosting models,
// held-out metrics, permutation importance and the serving bundle.

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "moorcast/config.hpp"
#include "moorcast/dataset.hpp"
#include "moorcast/ml/angular.hpp"
#include "moorcast/ml/gbm.hpp"
#include "moorcast/ml/importance.hpp"
#include "moorcast/ml/linear.hpp"
#include "moorcast/ml/metrics.hpp"
#include "moorcast/ml/search.hpp"
#include "moorcast/serve.hpp"

namespace moorcast {

// Held-out metrics for one reported target; offset_dir is the angular pair
// evaluated on wrapped degrees.
struct TargetEvaluation {
  std::string target;
  std::optional<ml::Metrics> linear;  // empty if the linear direction degenerates
  ml::Metrics baseline;
  ml::Metrics tuned;
};

struct TrainReport {
  std::vector<TargetEvaluation> targets;
  ml::ModelParams tuned_params;
  std::optional<ml::SearchResult> search;
  double baseline_cv_mse = 0.0;
  std::vector<std::string> importance_features;  // features + "noise"
  std::vector<ml::Importance> importance;
  std::map<std::string, double> seconds;
  std::size_t n_train = 0;
  std::size_t n_validation = 0;

  const TargetEvaluation& at(const std::string& target) const {
    for (const auto& t : targets)
      if (t.target == target) return t;
    throw Error("unknown_target", "no evaluation for " + target);
  }
};

struct TrainOutput {
  ModelBundle bundle;
  TrainReport report;
};

using TrainProgress = std::function<void(const std::string&)>;

namespace detail {

struct SplitData {
  ml::Matrix x;
  std::vector<std::size_t> rows;
};

inline SplitData split_matrix(const TrainingTable& t, Split s) {
  SplitData d;
  d.rows = t.rows(s);
  d.x = ml::Matrix(d.rows.size(), t.features.size());
  for (std::size_t k = 0; k < d.rows.size(); ++k)
    for (std::size_t j = 0; j < t.features.size(); ++j) d.x(k, j) = t.x[d.rows[k]][j];
  return d;
}

inline std::vector<double> target_of(const TrainingTable& t, const std::vector<std::size_t>& rows,
                                     const std::string& name) {
  std::vector<double> y;
  y.reserve(rows.size());
  for (auto i : rows) y.push_back(TrainingTable::target_value(t.responses[i], name));
  return y;
}

inline std::vector<double> directions_of(const TrainingTable& t,
                                         const std::vector<std::size_t>& rows) {
  std::vector<double> d;
  d.reserve(rows.size());
  for (auto i : rows) d.push_back(t.responses[i].offset_dir);
  return d;
}

// Appends a column of U[0,1) draws that no response depends on.
inline ml::Matrix with_noise(const ml::Matrix& x, std::uint64_t seed) {
  ml::Matrix out(x.rows, x.cols + 1);
  CounterRng r(seed);
  for (std::size_t i = 0; i < x.rows; ++i) {
    for (std::size_t j = 0; j < x.cols; ++j) out(i, j) = x(i, j);
    out(i, x.cols) = r.uniform();
  }
  return out;
}

inline nlohmann::json metrics_json(const ml::Metrics& m) {
  return {{"rmse", m.rmse},
          {"mae", m.mae},
          {"r2", m.r2},
          {"residual_mean", m.residual_mean},
          {"residual_min", m.residual_min},
          {"residual_max", m.residual_max},
          {"n", m.n}};
}

}  // namespace detail

inline nlohmann::json to_json(const TrainReport& r) {
  nlohmann::json targets = nlohmann::json::object();
  for (const auto& t : r.targets) {
    nlohmann::json e = {{"baseline", detail::metrics_json(t.baseline)},
                        {"tuned", detail::metrics_json(t.tuned)}};
    e["linear"] = t.linear ? detail::metrics_json(*t.linear) : nlohmann::json();
    targets[t.target] = e;
  }
  nlohmann::json imp = nlohmann::json::array();
  for (std::size_t j = 0; j < r.importance.size(); ++j)
    imp.push_back({{"feature", r.importance_features[j]},
                   {"mean", r.importance[j].mean},
                   {"std", r.importance[j].std},
                   {"share", r.importance[j].share}});
  nlohmann::json out = {{"targets", targets},
                        {"tuned_params", r.tuned_params},
                        {"baseline_cv_mse", r.baseline_cv_mse},
                        {"importance", imp},
                        {"seconds", r.seconds},
                        {"n_train", r.n_train},
                        {"n_validation", r.n_validation}};
  if (r.search) {
    nlohmann::json h = nlohmann::json::array();
    for (const auto& t : r.search->history) h.push_back({{"params", t.params}, {"cv_mse", t.cv_mse}});
    out["search"] = {{"best_cv_mse", r.search->best_cv_mse}, {"history", h}};
  }
  return out;
}

// The search runs on mpm_offset only; the other targets are fitted with the
// parameters it selects (boosting rounds still stop early per target).
inline TrainOutput train_bundle(const TrainingTable& table, const TrainConfig& cfg,
                                const ServeConfig& serve, const VesselModel& vessel,
                                const TrainProgress& progress = nullptr) {
  using clock = std::chrono::steady_clock;
  auto secs = [](clock::time_point a) {
    return std::chrono::duration<double>(clock::now() - a).count();
  };
  auto say = [&](const std::string& s) {
    if (progress) progress(s);
  };
  if (table.size() == 0) throw Error("empty", "train: empty table");
  if (table.features != feature_names())
    throw Error("feature_mismatch", "train: table features differ from this build");

  const auto tr = detail::split_matrix(table, Split::kTrain);
  const auto va = detail::split_matrix(table, Split::kValidation);
  if (tr.rows.empty() || va.rows.empty())
    throw Error("empty_split", "train: both splits must be non-empty");
  const auto& fn = table.features;

  TrainOutput out;
  auto& rep = out.report;
  rep.n_train = tr.rows.size();
  rep.n_validation = va.rows.size();

  auto baseline = ml::baseline_params(ml::ModelKind::kGbm);
  baseline.gbm.seed = cfg.seed;
  const auto y_off = detail::target_of(table, tr.rows, "mpm_offset");

  auto t0 = clock::now();
  rep.tuned_params = baseline;
  if (cfg.tune) {
    say("search: " + std::to_string(cfg.tune_trials) + " trials");
    rep.search = ml::random_search(tr.x, y_off, fn, cfg.space, cfg.tune_trials, cfg.seed,
                                   cfg.cv_folds);
    rep.baseline_cv_mse =
        ml::cv_mse(tr.x, y_off, fn, baseline, ml::cv_folds(tr.x.rows, cfg.cv_folds, cfg.seed));
    if (rep.search->best_cv_mse < rep.baseline_cv_mse) rep.tuned_params = rep.search->best;
  }
  rep.seconds["search"] = secs(t0);

  t0 = clock::now();
  std::map<std::string, ml::Model> base_m, tuned_m, lin_m;
  for (const auto& name : target_names()) {
    say("fit " + name);
    const auto y = detail::target_of(table, tr.rows, name);
    lin_m.emplace(name, ml::fit_linear(tr.x, y, fn));
    base_m.emplace(name, ml::fit_model(tr.x, y, fn, baseline));
    tuned_m.emplace(name, ml::fit_model(tr.x, y, fn, rep.tuned_params));
  }
  rep.seconds["fit"] = secs(t0);

  t0 = clock::now();
  for (const std::string name : {"mpm_offset", "mpm_t_fair", "mpm_t_anchor"}) {
    const auto y = detail::target_of(table, va.rows, name);
    rep.targets.push_back({name, ml::evaluate(lin_m.at(name).predict(va.x), y),
                           ml::evaluate(base_m.at(name).predict(va.x), y),
                           ml::evaluate(tuned_m.at(name).predict(va.x), y)});
  }
  {
    const auto theta = detail::directions_of(table, va.rows);
    auto ang = [&](std::map<std::string, ml::Model>& m) {
      return ml::AngularModel{m.at("offset_dir_e"), m.at("offset_dir_n")};
    };
    TargetEvaluation e{"offset_dir", std::nullopt, {}, {}};
    try {
      e.linear = ml::evaluate_angular(ang(lin_m).predict(va.x), theta);
    } catch (const Error&) {
      // a linear east/north pair can cancel on some row; report as absent
    }
    e.baseline = ml::evaluate_angular(ang(base_m).predict(va.x), theta);
    e.tuned = ml::evaluate_angular(ang(tuned_m).predict(va.x), theta);
    rep.targets.push_back(e);
  }
  rep.seconds["evaluate"] = secs(t0);

  t0 = clock::now();
  say("importance");
  {
    const auto noise_seed = derive_seed(cfg.seed, 0x4E);
    const auto xtr = detail::with_noise(tr.x, noise_seed);
    const auto xva = detail::with_noise(va.x, derive_seed(noise_seed, 1));
    rep.importance_features = fn;
    rep.importance_features.push_back("noise");
    const auto m = ml::fit_model(xtr, y_off, rep.importance_features, rep.tuned_params);
    rep.importance = ml::permutation_importance(
        [&](const ml::Matrix& x) { return m.predict(x); }, xva,
        detail::target_of(table, va.rows, "mpm_offset"), cfg.importance_repeats,
        derive_seed(cfg.seed, 0x1F));
  }
  rep.seconds["importance"] = secs(t0);

  auto& b = out.bundle;
  b.features = fn;
  b.mpm_offset = tuned_m.at("mpm_offset");
  b.offset_dir = {tuned_m.at("offset_dir_e"), tuned_m.at("offset_dir_n")};
  b.mpm_t_fair = tuned_m.at("mpm_t_fair");
  b.mpm_t_anchor = tuned_m.at("mpm_t_anchor");
  b.bounds = table.bounds;
  b.limits = {serve.tension_limit, serve.offset_limit};
  b.vessel = vessel;
  for (const auto& t : rep.targets) b.metrics[t.target] = detail::metrics_json(t.tuned);
  b.metadata = {{"created", format_timestamp(std::floor(now_epoch()))},
                {"train_seed", cfg.seed},
                {"split_seed", table.split_seed},
                {"split_fraction", table.split_fraction},
                {"n_train", rep.n_train},
                {"n_validation", rep.n_validation},
                {"qd_rows", table.qd_count()},
                {"params", rep.tuned_params}};
  return out;
}

// Held-out (or training) metrics of a bundle's models against a table.
inline std::map<std::string, ml::Metrics> evaluate_bundle(const ModelBundle& b,
                                                          const TrainingTable& t,
                                                          Split s = Split::kValidation) {
  if (t.features != b.features)
    throw Error("feature_mismatch", "evaluate: table and bundle features differ");
  const auto d = detail::split_matrix(t, s);
  if (d.rows.empty()) throw Error("empty_split", "evaluate: split has no rows");
  std::map<std::string, ml::Metrics> out;
  out["mpm_offset"] =
      ml::evaluate(b.mpm_offset.predict(d.x), detail::target_of(t, d.rows, "mpm_offset"));
  out["mpm_t_fair"] =
      ml::evaluate(b.mpm_t_fair.predict(d.x), detail::target_of(t, d.rows, "mpm_t_fair"));
  out["mpm_t_anchor"] =
      ml::evaluate(b.mpm_t_anchor.predict(d.x), detail::target_of(t, d.rows, "mpm_t_anchor"));
  out["offset_dir"] =
      ml::evaluate_angular(b.offset_dir.predict(d.x), detail::directions_of(t, d.rows));
  return out;
}

}  // namespace moorcast
