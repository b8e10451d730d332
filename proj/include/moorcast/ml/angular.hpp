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

#include <vector>

#include "moorcast/dataset.hpp"
#include "moorcast/ml/model.hpp"

namespace moorcast::ml {

// Direction target learned as independent east and north regressions.
struct AngularModel {
  Model east;
  Model north;

  double predict(const std::vector<double>& x) const {
    const double e = east.predict(x);
    const double n = north.predict(x);
    if (std::hypot(e, n) < 1e-6)
      throw Error("degenerate_direction", "predict_angular: predicted vector ~ 0");
    return angular_reconstruct(e, n);
  }

  std::vector<double> predict(const Matrix& x) const {
    const auto e = east.predict(x);
    const auto n = north.predict(x);
    std::vector<double> out(x.rows);
    for (std::size_t i = 0; i < x.rows; ++i) {
      if (std::hypot(e[i], n[i]) < 1e-6)
        throw Error("degenerate_direction", "predict_angular: predicted vector ~ 0");
      out[i] = angular_reconstruct(e[i], n[i]);
    }
    return out;
  }
};

inline double predict_angular(const AngularModel& m, const std::vector<double>& x) {
  return m.predict(x);
}

}  // namespace moorcast::ml
