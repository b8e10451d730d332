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

// L2 gradient boosting on histogram trees. Each round fits a tree to the
// residual gradients g_i = F(x_i) - y_i with the regularised leaf
// w = -soft(G, alpha) / (n + lambda), shrunk by the learning rate.
// With early stopping a seeded holdout is carved from the rows; boosting
// stops after `patience` rounds without holdout improvement and the
// ensemble is truncated to the best round.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "moorcast/ml/forest.hpp"
#include "moorcast/ml/linear.hpp"

namespace moorcast::ml {

struct GbmTrace {
  std::vector<double> train_mse;    // after each round, on boosting rows
  std::vector<double> holdout_mse;  // empty without early stopping
  std::size_t best_round = 0;       // rounds kept
};

inline Model fit_gbm(const Matrix& x, const std::vector<double>& y,
                     const std::vector<std::string>& features, const GbmParams& p,
                     GbmTrace* trace = nullptr) {
  detail::check_fit_inputs(x, y, features);
  p.validate();
  const auto bins = fit_bins(x, p.n_bins);
  const auto bx = apply_bins(bins, x);

  std::vector<std::size_t> fit_rows(x.rows), hold_rows;
  std::iota(fit_rows.begin(), fit_rows.end(), std::size_t{0});
  if (p.early_stopping) {
    CounterRng rng(derive_seed(p.seed, 0xE5));
    auto perm = fit_rows;
    for (std::size_t i = perm.size(); i > 1; --i)
      std::swap(perm[i - 1], perm[static_cast<std::size_t>(
                                 rng.uniform_int(0, static_cast<std::int64_t>(i - 1)))]);
    auto n_hold = static_cast<std::size_t>(
        std::llround(p.validation_fraction * static_cast<double>(x.rows)));
    n_hold = std::min(n_hold, x.rows - 1);
    hold_rows.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_hold));
    fit_rows.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_hold), perm.end());
    std::sort(hold_rows.begin(), hold_rows.end());
    std::sort(fit_rows.begin(), fit_rows.end());
  }

  double base = 0.0;
  for (auto i : fit_rows) base += y[i];
  base /= static_cast<double>(fit_rows.size());

  Model m;
  m.kind = ModelKind::kGbm;
  m.features = features;
  m.base = base;
  std::vector<double> pred(x.rows, base);
  std::vector<double> grad(x.rows, 0.0);
  auto mse = [&](const std::vector<std::size_t>& rows) {
    double s = 0.0;
    for (auto i : rows) s += (pred[i] - y[i]) * (pred[i] - y[i]);
    return s / static_cast<double>(rows.size());
  };

  GbmTrace tr;
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_round = 0;
  if (!hold_rows.empty()) best = mse(hold_rows);
  const GrowParams gp{p.max_depth, p.min_samples_leaf, p.l1_alpha, p.l2_lambda};
  for (std::size_t round = 0; round < p.n_rounds; ++round) {
    for (auto i : fit_rows) grad[i] = pred[i] - y[i];
    CounterRng rng(derive_seed(p.seed, round + 1));
    std::vector<std::size_t> rows = fit_rows;
    if (p.row_subsample < 1.0) {
      const auto k = std::max<std::size_t>(
          1, static_cast<std::size_t>(std::llround(p.row_subsample *
                                                   static_cast<double>(rows.size()))));
      for (std::size_t i = 0; i < k; ++i)
        std::swap(rows[i], rows[static_cast<std::size_t>(rng.uniform_int(
                               static_cast<std::int64_t>(i),
                               static_cast<std::int64_t>(rows.size() - 1)))]);
      rows.resize(k);
      std::sort(rows.begin(), rows.end());
    }
    const auto active = detail::sample_features(x.cols, p.col_subsample, rng);
    Tree t = grow_tree(bx, bins, grad, std::move(rows), active, gp);
    t.scale(p.learning_rate);
    for (std::size_t i = 0; i < x.rows; ++i) pred[i] += t.predict_binned(bx, i);
    m.trees.push_back(std::move(t));
    tr.train_mse.push_back(mse(fit_rows));
    if (!hold_rows.empty()) {
      const double h = mse(hold_rows);
      tr.holdout_mse.push_back(h);
      if (h < best) {
        best = h;
        best_round = round + 1;
      } else if (round + 1 - best_round >= p.patience) {
        break;
      }
    } else {
      best_round = round + 1;
    }
  }
  m.trees.resize(best_round);
  tr.best_round = best_round;
  m.meta = {{"n_rounds", p.n_rounds},
            {"learning_rate", p.learning_rate},
            {"max_depth", p.max_depth},
            {"min_samples_leaf", p.min_samples_leaf},
            {"l1_alpha", p.l1_alpha},
            {"l2_lambda", p.l2_lambda},
            {"row_subsample", p.row_subsample},
            {"col_subsample", p.col_subsample},
            {"early_stopping", p.early_stopping},
            {"validation_fraction", p.validation_fraction},
            {"patience", p.patience},
            {"seed", p.seed},
            {"final_round", best_round}};
  if (trace) *trace = std::move(tr);
  return m;
}

inline Model fit_model(const Matrix& x, const std::vector<double>& y,
                       const std::vector<std::string>& features, const ModelParams& p) {
  switch (p.kind) {
    case ModelKind::kLinear: return fit_linear(x, y, features);
    case ModelKind::kTree: return fit_tree(x, y, features, p.tree);
    case ModelKind::kForest: return fit_forest(x, y, features, p.forest);
    case ModelKind::kGbm: return fit_gbm(x, y, features, p.gbm);
  }
  throw Error("bad_kind", "fit_model");
}

}  // namespace moorcast::ml
