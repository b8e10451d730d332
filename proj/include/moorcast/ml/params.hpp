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

#include <cstddef>
#include <cstdint>
#include <string>

#include "moorcast/common.hpp"
#include "moorcast/ml/binning.hpp"

namespace moorcast::ml {

enum class ModelKind { kLinear, kTree, kForest, kGbm };

inline const char* to_string(ModelKind k) {
  switch (k) {
    case ModelKind::kLinear: return "linear";
    case ModelKind::kTree: return "tree";
    case ModelKind::kForest: return "forest";
    case ModelKind::kGbm: return "gbm";
  }
  return "?";
}

inline ModelKind parse_model_kind(const std::string& s) {
  if (s == "linear") return ModelKind::kLinear;
  if (s == "tree") return ModelKind::kTree;
  if (s == "forest") return ModelKind::kForest;
  if (s == "gbm") return ModelKind::kGbm;
  throw Error("bad_kind", "unknown model kind '" + s + "'");
}

struct TreeParams {
  int max_depth = 30;
  std::size_t min_samples_leaf = 1;
  std::size_t n_bins = kMaxBins;
};

struct ForestParams {
  std::size_t n_trees = 100;
  int max_depth = 30;
  std::size_t min_samples_leaf = 1;
  double col_subsample = 1.0;  // per tree
  std::size_t n_bins = kMaxBins;
  std::uint64_t seed = 0;
};

struct GbmParams {
  std::size_t n_rounds = 100;
  double learning_rate = 0.1;
  int max_depth = 30;
  std::size_t min_samples_leaf = 20;
  double l1_alpha = 0.0;
  double l2_lambda = 0.0;
  double row_subsample = 1.0;  // per round, without replacement
  double col_subsample = 1.0;  // per round
  std::size_t n_bins = kMaxBins;
  bool early_stopping = false;
  double validation_fraction = 0.1;
  std::size_t patience = 10;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(learning_rate >= 0.0) || !(l1_alpha >= 0.0) || !(l2_lambda >= 0.0) ||
        !(row_subsample > 0.0 && row_subsample <= 1.0) ||
        !(col_subsample > 0.0 && col_subsample <= 1.0) || max_depth < 0 ||
        (early_stopping && (!(validation_fraction > 0.0 && validation_fraction < 1.0) ||
                            patience < 1)))
      throw Error("bad_params", "GbmParams out of range");
  }
};

struct ModelParams {
  ModelKind kind = ModelKind::kGbm;
  TreeParams tree;
  ForestParams forest;
  GbmParams gbm;
};

// Untuned starting points: 100 trees or rounds, learning rate 0.1, depth 30.
inline ModelParams baseline_params(ModelKind kind) {
  ModelParams p;
  p.kind = kind;
  p.tree.max_depth = 30;
  p.forest.n_trees = 100;
  p.forest.max_depth = 30;
  p.gbm.n_rounds = 100;
  p.gbm.learning_rate = 0.1;
  p.gbm.max_depth = 30;
  return p;
}

}  // namespace moorcast::ml
