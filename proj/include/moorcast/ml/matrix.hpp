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
#include <string>
#include <vector>

#include "moorcast/common.hpp"

namespace moorcast::ml {

// Dense row-major design matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> v;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), v(r * c, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return v[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return v[i * cols + j]; }
  const double* row(std::size_t i) const { return v.data() + i * cols; }

  static Matrix from_rows(const std::vector<std::vector<double>>& r) {
    Matrix m(r.size(), r.empty() ? 0 : r.front().size());
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (r[i].size() != m.cols) throw Error("ragged", "Matrix: ragged rows");
      for (std::size_t j = 0; j < m.cols; ++j) m(i, j) = r[i][j];
    }
    return m;
  }

  Matrix take_rows(const std::vector<std::size_t>& idx) const {
    Matrix m(idx.size(), cols);
    for (std::size_t k = 0; k < idx.size(); ++k)
      for (std::size_t j = 0; j < cols; ++j) m(k, j) = (*this)(idx[k], j);
    return m;
  }
};

inline std::vector<double> take(const std::vector<double>& y,
                                const std::vector<std::size_t>& idx) {
  std::vector<double> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(y[i]);
  return out;
}

}  // namespace moorcast::ml
