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

#include <algorithm>
#include <numeric>
#include <vector>

#include "moorcast/ml/model.hpp"
#include "moorcast/random.hpp"

namespace moorcast::ml {

namespace detail {

inline void check_fit_inputs(const Matrix& x, const std::vector<double>& y,
                             const std::vector<std::string>& features) {
  if (x.rows == 0) throw Error("empty_table", "fit: no rows");
  if (y.size() != x.rows || features.size() != x.cols)
    throw Error("size_mismatch", "fit: shapes disagree");
}

inline std::vector<std::size_t> all_features(std::size_t p) {
  std::vector<std::size_t> f(p);
  std::iota(f.begin(), f.end(), std::size_t{0});
  return f;
}

// Sorted random subset of ceil(fraction * p) feature indices (at least 1).
inline std::vector<std::size_t> sample_features(std::size_t p, double fraction,
                                                CounterRng& rng) {
  auto f = all_features(p);
  if (fraction >= 1.0) return f;
  const auto k = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(p))));
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = static_cast<std::size_t>(
        rng.uniform_int(static_cast<std::int64_t>(i), static_cast<std::int64_t>(p - 1)));
    std::swap(f[i], f[j]);
  }
  f.resize(k);
  std::sort(f.begin(), f.end());
  return f;
}

inline std::vector<double> negated(const std::vector<double>& y) {
  std::vector<double> g(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) g[i] = -y[i];
  return g;
}

}  // namespace detail

inline Model fit_tree(const Matrix& x, const std::vector<double>& y,
                      const std::vector<std::string>& features, const TreeParams& p = {}) {
  detail::check_fit_inputs(x, y, features);
  const auto bins = fit_bins(x, p.n_bins);
  const auto bx = apply_bins(bins, x);
  std::vector<std::size_t> rows(x.rows);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  Model m;
  m.kind = ModelKind::kTree;
  m.features = features;
  m.trees.push_back(grow_tree(bx, bins, detail::negated(y), std::move(rows),
                              detail::all_features(x.cols),
                              {p.max_depth, p.min_samples_leaf, 0.0, 0.0}));
  m.meta = {{"max_depth", p.max_depth}, {"min_samples_leaf", p.min_samples_leaf},
            {"n_bins", p.n_bins}};
  return m;
}

// Bagged trees; tree t draws its bootstrap and feature subset from
// derive_seed(seed, t), so trees can be grown in any order.
inline Model fit_forest(const Matrix& x, const std::vector<double>& y,
                        const std::vector<std::string>& features,
                        const ForestParams& p = {}) {
  detail::check_fit_inputs(x, y, features);
  if (p.n_trees == 0) throw Error("bad_params", "fit_forest: n_trees must be > 0");
  const auto bins = fit_bins(x, p.n_bins);
  const auto bx = apply_bins(bins, x);
  const auto g = detail::negated(y);
  Model m;
  m.kind = ModelKind::kForest;
  m.features = features;
  m.trees.resize(p.n_trees);
  const auto n = static_cast<std::int64_t>(x.rows);
  ExceptionSink sink;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t t = 0; t < static_cast<std::int64_t>(p.n_trees); ++t) {
    sink.run([&] {
      CounterRng rng(derive_seed(p.seed, static_cast<std::uint64_t>(t)));
      std::vector<std::size_t> rows(x.rows);
      for (auto& r : rows) r = static_cast<std::size_t>(rng.uniform_int(0, n - 1));
      std::sort(rows.begin(), rows.end());
      const auto active = detail::sample_features(x.cols, p.col_subsample, rng);
      m.trees[static_cast<std::size_t>(t)] =
          grow_tree(bx, bins, g, std::move(rows), active,
                    {p.max_depth, p.min_samples_leaf, 0.0, 0.0});
    });
  }
  sink.rethrow();
  m.meta = {{"n_trees", p.n_trees},         {"max_depth", p.max_depth},
            {"min_samples_leaf", p.min_samples_leaf},
            {"col_subsample", p.col_subsample}, {"seed", p.seed}};
  return m;
}

}  // namespace moorcast::ml
