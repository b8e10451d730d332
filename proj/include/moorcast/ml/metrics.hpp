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

// Residuals are e_i = yhat_i - y_i. Angular targets use the wrapped
// difference in (-180, 180] deg.

#include <algorithm>
#include <cmath>
#include <vector>

#include "moorcast/common.hpp"

namespace moorcast::ml {

struct Metrics {
  double rmse = 0.0;
  double mae = 0.0;
  double r2 = 0.0;
  double residual_mean = 0.0;
  double residual_min = 0.0;
  double residual_max = 0.0;
  std::size_t n = 0;
};

inline Metrics metrics_from_residuals(const std::vector<double>& e,
                                      const std::vector<double>& y) {
  if (e.empty()) throw Error("empty_split", "evaluate: no rows");
  Metrics m;
  m.n = e.size();
  const double n = static_cast<double>(e.size());
  double sse = 0.0, sae = 0.0, se = 0.0;
  m.residual_min = m.residual_max = e.front();
  for (double r : e) {
    sse += r * r;
    sae += std::abs(r);
    se += r;
    m.residual_min = std::min(m.residual_min, r);
    m.residual_max = std::max(m.residual_max, r);
  }
  double ym = 0.0;
  for (double v : y) ym += v;
  ym /= n;
  double sst = 0.0;
  for (double v : y) sst += (v - ym) * (v - ym);
  if (!(sst > 0.0)) throw Error("r2_undefined", "evaluate: target has zero variance");
  m.rmse = std::sqrt(sse / n);
  m.mae = sae / n;
  m.residual_mean = se / n;
  m.r2 = 1.0 - sse / sst;
  return m;
}

inline Metrics evaluate(const std::vector<double>& pred, const std::vector<double>& y) {
  if (pred.size() != y.size()) throw Error("size_mismatch", "evaluate");
  std::vector<double> e(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) e[i] = pred[i] - y[i];
  return metrics_from_residuals(e, y);
}

inline Metrics evaluate_angular(const std::vector<double>& pred_deg,
                                const std::vector<double>& y_deg) {
  if (pred_deg.size() != y_deg.size()) throw Error("size_mismatch", "evaluate_angular");
  std::vector<double> e(y_deg.size());
  for (std::size_t i = 0; i < y_deg.size(); ++i) e[i] = wrap180(pred_deg[i] - y_deg[i]);
  return metrics_from_residuals(e, y_deg);
}

}  // namespace moorcast::ml
