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

// Randomised hyperparameter search scored by k-fold cross-validated MSE.
// Trial t draws its parameters from derive_seed(seed, t); folds come from
// one seeded permutation shared by all trials.

#include <cmath>
#include <limits>
#include <vector>

#include "moorcast/ml/gbm.hpp"

namespace moorcast::ml {

struct SearchSpace {
  ModelKind kind = ModelKind::kGbm;
  // boosting
  double lr_min = 1e-3, lr_max = 0.5;            // log-uniform
  int depth_min = 4, depth_max = 20;
  double reg_min = 1e-8, reg_max = 10.0;          // l1 and l2, log-uniform
  double subsample_min = 0.6, subsample_max = 1.0;
  double vf_min = 0.1, vf_max = 0.2;
  int patience_min = 10, patience_max = 30;
  std::size_t n_rounds = 1000;                    // cap; early stopping decides
  int leaf_min = 1, leaf_max = 40;
  // forest
  int trees_min = 100, trees_max = 300;
  int forest_depth_min = 10, forest_depth_max = 30;
  int forest_leaf_min = 1, forest_leaf_max = 10;

  void validate() const {
    const bool ok = lr_min > 0.0 && lr_min <= lr_max && depth_min >= 1 &&
                    depth_min <= depth_max && reg_min > 0.0 && reg_min <= reg_max &&
                    subsample_min > 0.0 && subsample_min <= subsample_max &&
                    subsample_max <= 1.0 && vf_min > 0.0 && vf_min <= vf_max &&
                    vf_max < 1.0 && patience_min >= 1 && patience_min <= patience_max &&
                    n_rounds >= 1 && leaf_min >= 1 && leaf_min <= leaf_max &&
                    trees_min >= 1 && trees_min <= trees_max &&
                    forest_depth_min >= 1 && forest_depth_min <= forest_depth_max &&
                    forest_leaf_min >= 1 && forest_leaf_min <= forest_leaf_max &&
                    (kind == ModelKind::kGbm || kind == ModelKind::kForest);
    if (!ok) throw Error("invalid_space", "search space bounds are inconsistent");
  }
};

struct Trial {
  ModelParams params;
  double cv_mse = 0.0;
};

struct SearchResult {
  ModelParams best;
  double best_cv_mse = 0.0;
  std::vector<Trial> history;
};

namespace detail {

inline double log_uniform(CounterRng& r, double lo, double hi) {
  return std::exp(r.uniform(std::log(lo), std::log(hi)));
}

}  // namespace detail

inline ModelParams sample_params(const SearchSpace& s, std::uint64_t seed) {
  CounterRng r(seed);
  ModelParams p;
  p.kind = s.kind;
  if (s.kind == ModelKind::kGbm) {
    auto& g = p.gbm;
    g.n_rounds = s.n_rounds;
    g.learning_rate = detail::log_uniform(r, s.lr_min, s.lr_max);
    g.max_depth = static_cast<int>(r.uniform_int(s.depth_min, s.depth_max));
    g.l1_alpha = detail::log_uniform(r, s.reg_min, s.reg_max);
    g.l2_lambda = detail::log_uniform(r, s.reg_min, s.reg_max);
    g.row_subsample = r.uniform(s.subsample_min, s.subsample_max);
    g.col_subsample = r.uniform(s.subsample_min, s.subsample_max);
    g.early_stopping = true;
    g.validation_fraction = r.uniform(s.vf_min, s.vf_max);
    g.patience = static_cast<std::size_t>(r.uniform_int(s.patience_min, s.patience_max));
    g.min_samples_leaf = static_cast<std::size_t>(r.uniform_int(s.leaf_min, s.leaf_max));
    g.seed = seed;
  } else {
    auto& f = p.forest;
    f.n_trees = static_cast<std::size_t>(r.uniform_int(s.trees_min, s.trees_max));
    f.max_depth = static_cast<int>(r.uniform_int(s.forest_depth_min, s.forest_depth_max));
    f.min_samples_leaf =
        static_cast<std::size_t>(r.uniform_int(s.forest_leaf_min, s.forest_leaf_max));
    f.col_subsample = r.uniform(s.subsample_min, s.subsample_max);
    f.seed = seed;
  }
  return p;
}

// Fold f holds rows whose position in the seeded permutation is f mod k.
inline std::vector<std::vector<std::size_t>> cv_folds(std::size_t n, std::size_t k,
                                                      std::uint64_t seed) {
  if (k < 2 || k > n) throw Error("bad_folds", "cv_folds: need 2 <= k <= n");
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  CounterRng rng(derive_seed(seed, 0xCF));
  for (std::size_t i = n; i > 1; --i)
    std::swap(perm[i - 1],
              perm[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i - 1)))]);
  std::vector<std::vector<std::size_t>> folds(k);
  for (std::size_t i = 0; i < n; ++i) folds[i % k].push_back(perm[i]);
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

inline double cv_mse(const Matrix& x, const std::vector<double>& y,
                     const std::vector<std::string>& features, const ModelParams& p,
                     const std::vector<std::vector<std::size_t>>& folds) {
  std::vector<double> fold_mse(folds.size());
  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::vector<std::size_t> train;
    for (std::size_t g = 0; g < folds.size(); ++g)
      if (g != f) train.insert(train.end(), folds[g].begin(), folds[g].end());
    std::sort(train.begin(), train.end());
    const auto m = fit_model(x.take_rows(train), take(y, train), features, p);
    const auto pred = m.predict(x.take_rows(folds[f]));
    double s = 0.0;
    for (std::size_t k = 0; k < folds[f].size(); ++k) {
      const double e = pred[k] - y[folds[f][k]];
      s += e * e;
    }
    fold_mse[f] = s / static_cast<double>(folds[f].size());
  }
  double mean = 0.0;
  for (double v : fold_mse) mean += v;
  return mean / static_cast<double>(folds.size());
}

inline SearchResult random_search(const Matrix& x, const std::vector<double>& y,
                                  const std::vector<std::string>& features,
                                  const SearchSpace& space, std::size_t n_trials,
                                  std::uint64_t seed, std::size_t n_folds = 3) {
  space.validate();
  if (n_trials < 1) throw Error("bad_trials", "random_search: n_trials >= 1");
  const auto folds = cv_folds(x.rows, n_folds, seed);
  SearchResult out;
  out.history.resize(n_trials);
  ExceptionSink sink;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t t = 0; t < static_cast<std::int64_t>(n_trials); ++t) {
    sink.run([&] {
      auto& tr = out.history[static_cast<std::size_t>(t)];
      tr.params = sample_params(space, derive_seed(seed, static_cast<std::uint64_t>(t)));
      tr.cv_mse = cv_mse(x, y, features, tr.params, folds);
    });
  }
  sink.rethrow();
  out.best_cv_mse = std::numeric_limits<double>::infinity();
  for (const auto& tr : out.history)
    if (tr.cv_mse < out.best_cv_mse) {
      out.best_cv_mse = tr.cv_mse;
      out.best = tr.params;
    }
  return out;
}

}  // namespace moorcast::ml
