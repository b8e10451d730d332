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

// Ordinary least squares with intercept via column-pivoted QR.

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "moorcast/ml/model.hpp"

namespace moorcast::ml {

inline Model fit_linear(const Matrix& x, const std::vector<double>& y,
                        const std::vector<std::string>& features) {
  const auto n = static_cast<Eigen::Index>(x.rows);
  const auto p = static_cast<Eigen::Index>(x.cols);
  if (y.size() != x.rows || features.size() != x.cols)
    throw Error("size_mismatch", "fit_linear: shapes disagree");
  if (n <= p) throw Error("too_few_rows", "fit_linear: need n > p");
  // Centre columns so the intercept is decoupled and scale by column norm
  // so the rank decision is unit-free.
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(p);
  double ymean = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) mean(j) += x(i, j);
    ymean += y[i];
  }
  mean /= static_cast<double>(n);
  ymean /= static_cast<double>(n);
  Eigen::MatrixXd a(n, p);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) a(i, j) = x(i, j) - mean(j);
    b(i) = y[i] - ymean;
  }
  Eigen::VectorXd scale(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double s = a.col(j).norm();
    scale(j) = s > 0.0 ? s : 1.0;
    a.col(j) /= scale(j);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(1e-10);
  if (qr.rank() < p) {
    std::string cols;
    for (Eigen::Index k = qr.rank(); k < p; ++k) {
      const auto j = qr.colsPermutation().indices()(k);
      if (!cols.empty()) cols += ", ";
      cols += features[static_cast<std::size_t>(j)];
    }
    throw Error("rank_deficient", "fit_linear: collinear columns: " + cols);
  }
  Eigen::VectorXd w = qr.solve(b);
  Model m;
  m.kind = ModelKind::kLinear;
  m.features = features;
  m.coef.resize(static_cast<std::size_t>(p));
  double intercept = ymean;
  for (Eigen::Index j = 0; j < p; ++j) {
    m.coef[static_cast<std::size_t>(j)] = w(j) / scale(j);
    intercept -= m.coef[static_cast<std::size_t>(j)] * mean(j);
  }
  m.base = intercept;
  return m;
}

}  // namespace moorcast::ml
