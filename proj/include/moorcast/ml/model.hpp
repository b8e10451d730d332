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

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "moorcast/ml/matrix.hpp"
#include "moorcast/ml/params.hpp"
#include "moorcast/ml/tree.hpp"

namespace moorcast::ml {

struct Model {
  ModelKind kind = ModelKind::kGbm;
  std::vector<std::string> features;
  double base = 0.0;              // gbm base score, linear intercept
  std::vector<double> coef;       // linear weights
  std::vector<Tree> trees;
  nlohmann::json meta = nlohmann::json::object();

  double predict_row(const double* x) const {
    switch (kind) {
      case ModelKind::kLinear: {
        double s = base;
        for (std::size_t j = 0; j < coef.size(); ++j) s += coef[j] * x[j];
        return s;
      }
      case ModelKind::kTree:
        return trees.front().predict(x);
      case ModelKind::kForest: {
        double s = 0.0;
        for (const auto& t : trees) s += t.predict(x);
        return s / static_cast<double>(trees.size());
      }
      case ModelKind::kGbm: {
        double s = base;
        for (const auto& t : trees) s += t.predict(x);
        return s;
      }
    }
    return 0.0;
  }

  double predict(const std::vector<double>& x) const {
    if (x.size() != features.size())
      throw Error("feature_mismatch", "predict: expected " + std::to_string(features.size()) +
                                          " features, got " + std::to_string(x.size()));
    return predict_row(x.data());
  }

  std::vector<double> predict(const Matrix& x) const {
    if (x.cols != features.size())
      throw Error("feature_mismatch", "predict: column count differs from feature list");
    std::vector<double> out(x.rows);
    for (std::size_t i = 0; i < x.rows; ++i) out[i] = predict_row(x.row(i));
    return out;
  }
};

inline nlohmann::json to_json(const Tree& t) {
  return {{"feature", t.feature}, {"threshold", t.threshold}, {"left", t.left},
          {"right", t.right},     {"value", t.value}};
}

inline Tree tree_from_json(const nlohmann::json& j) {
  Tree t;
  j.at("feature").get_to(t.feature);
  j.at("threshold").get_to(t.threshold);
  j.at("left").get_to(t.left);
  j.at("right").get_to(t.right);
  j.at("value").get_to(t.value);
  const std::size_t n = t.feature.size();
  if (n == 0 || t.threshold.size() != n || t.left.size() != n || t.right.size() != n ||
      t.value.size() != n)
    throw Error("corrupt_model", "tree arrays differ in length");
  for (std::size_t k = 0; k < n; ++k) {
    if (t.feature[k] < 0) continue;
    const auto ok = [&](std::int32_t c) {
      return c > static_cast<std::int32_t>(k) && c < static_cast<std::int32_t>(n);
    };
    if (!ok(t.left[k]) || !ok(t.right[k]))
      throw Error("corrupt_model", "tree child index out of range");
  }
  t.bin.assign(n, 0);
  return t;
}

inline nlohmann::json to_json(const Model& m) {
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& t : m.trees) trees.push_back(to_json(t));
  return {{"kind", to_string(m.kind)}, {"features", m.features}, {"base", m.base},
          {"coef", m.coef},           {"trees", trees},         {"meta", m.meta}};
}

inline Model model_from_json(const nlohmann::json& j) {
  Model m;
  m.kind = parse_model_kind(j.at("kind").get<std::string>());
  j.at("features").get_to(m.features);
  m.base = j.at("base").get<double>();
  j.at("coef").get_to(m.coef);
  for (const auto& t : j.at("trees")) m.trees.push_back(tree_from_json(t));
  m.meta = j.value("meta", nlohmann::json::object());
  for (const auto& t : m.trees)
    for (auto f : t.feature)
      if (f >= static_cast<std::int32_t>(m.features.size()))
        throw Error("corrupt_model", "tree feature index out of range");
  if (m.kind == ModelKind::kLinear && m.coef.size() != m.features.size())
    throw Error("corrupt_model", "linear coefficient count mismatch");
  if ((m.kind == ModelKind::kTree || m.kind == ModelKind::kForest) && m.trees.empty())
    throw Error("corrupt_model", "tree model without trees");
  return m;
}

}  // namespace moorcast::ml
