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

// Permutation importance: increase in MSE when one column is shuffled,
// averaged over repeats. Shuffle (j, r) uses derive_seed(derive_seed(seed, j), r).

#include <cmath>
#include <functional>
#include <vector>

#include "moorcast/ml/matrix.hpp"
#include "moorcast/random.hpp"

namespace moorcast::ml {

struct Importance {
  double mean = 0.0;   // raw MSE increase
  double std = 0.0;    // across repeats
  double share = 0.0;  // mean / sum of positive means, 0 if not positive
};

using BatchPredictor = std::function<std::vector<double>(const Matrix&)>;

inline std::vector<Importance> permutation_importance(const BatchPredictor& predict,
                                                      const Matrix& x,
                                                      const std::vector<double>& y,
                                                      std::size_t n_repeats,
                                                      std::uint64_t seed) {
  if (x.rows == 0) throw Error("empty_split", "permutation_importance: no rows");
  if (n_repeats < 2) throw Error("bad_repeats", "permutation_importance: n_repeats >= 2");
  auto mse = [&](const std::vector<double>& p) {
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += (p[i] - y[i]) * (p[i] - y[i]);
    return s / static_cast<double>(y.size());
  };
  const double base = mse(predict(x));
  std::vector<Importance> out(x.cols);
  Matrix xp = x;
  for (std::size_t j = 0; j < x.cols; ++j) {
    std::vector<double> d(n_repeats);
    for (std::size_t r = 0; r < n_repeats; ++r) {
      CounterRng rng(derive_seed(derive_seed(seed, j), r));
      std::vector<std::size_t> perm(x.rows);
      for (std::size_t i = 0; i < x.rows; ++i) perm[i] = i;
      for (std::size_t i = x.rows; i > 1; --i)
        std::swap(perm[i - 1], perm[static_cast<std::size_t>(
                                   rng.uniform_int(0, static_cast<std::int64_t>(i - 1)))]);
      for (std::size_t i = 0; i < x.rows; ++i) xp(i, j) = x(perm[i], j);
      d[r] = mse(predict(xp)) - base;
    }
    for (std::size_t i = 0; i < x.rows; ++i) xp(i, j) = x(i, j);
    double m = 0.0;
    for (double v : d) m += v;
    m /= static_cast<double>(n_repeats);
    double v2 = 0.0;
    for (double v : d) v2 += (v - m) * (v - m);
    out[j].mean = m;
    out[j].std = std::sqrt(v2 / static_cast<double>(n_repeats - 1));
  }
  double pos = 0.0;
  for (const auto& i : out)
    if (i.mean > 0.0) pos += i.mean;
  for (auto& i : out) i.share = (pos > 0.0 && i.mean > 0.0) ? i.mean / pos : 0.0;
  return out;
}

}  // namespace moorcast::ml
