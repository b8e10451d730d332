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

// Equal-frequency feature binning. Bin b of a feature holds values v with
// edges[b-1] < v <= edges[b], so "bin <= b" and "v <= edges[b]" select the
// same rows and a tree trained on codes predicts identically on raw values.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "moorcast/ml/matrix.hpp"

namespace moorcast::ml {

inline constexpr std::size_t kMaxBins = 256;

struct BinMapper {
  std::vector<std::vector<double>> edges;  // per feature, ascending

  std::uint8_t code(std::size_t j, double x) const {
    const auto& e = edges[j];
    return static_cast<std::uint8_t>(std::lower_bound(e.begin(), e.end(), x) - e.begin());
  }
  std::size_t n_bins(std::size_t j) const { return edges[j].size() + 1; }
};

inline BinMapper fit_bins(const Matrix& x, std::size_t max_bins = kMaxBins) {
  if (max_bins < 2 || max_bins > kMaxBins)
    throw Error("bad_bins", "fit_bins: max_bins must be in [2, 256]");
  BinMapper m;
  m.edges.resize(x.cols);
  std::vector<double> col(x.rows);
  for (std::size_t j = 0; j < x.cols; ++j) {
    for (std::size_t i = 0; i < x.rows; ++i) col[i] = x(i, j);
    std::sort(col.begin(), col.end());
    std::vector<double> distinct;
    for (double v : col)
      if (distinct.empty() || v != distinct.back()) distinct.push_back(v);
    auto& e = m.edges[j];
    if (distinct.size() <= max_bins) {
      for (std::size_t k = 0; k + 1 < distinct.size(); ++k)
        e.push_back(0.5 * (distinct[k] + distinct[k + 1]));
      continue;
    }
    for (std::size_t b = 1; b < max_bins; ++b) {
      const std::size_t pos = b * col.size() / max_bins;
      const double v = col[pos];
      auto next = std::upper_bound(distinct.begin(), distinct.end(), v);
      if (next == distinct.end()) break;
      const double edge = 0.5 * (v + *next);
      if (e.empty() || edge > e.back()) e.push_back(edge);
    }
  }
  return m;
}

// Column-major codes.
struct BinnedMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> codes;
  std::vector<std::size_t> n_bins;

  std::uint8_t operator()(std::size_t i, std::size_t j) const { return codes[j * rows + i]; }
  const std::uint8_t* column(std::size_t j) const { return codes.data() + j * rows; }
};

inline BinnedMatrix apply_bins(const BinMapper& m, const Matrix& x) {
  BinnedMatrix b;
  b.rows = x.rows;
  b.cols = x.cols;
  b.codes.resize(x.rows * x.cols);
  for (std::size_t j = 0; j < x.cols; ++j) {
    b.n_bins.push_back(m.n_bins(j));
    for (std::size_t i = 0; i < x.rows; ++i) b.codes[j * x.rows + i] = m.code(j, x(i, j));
  }
  return b;
}

}  // namespace moorcast::ml
