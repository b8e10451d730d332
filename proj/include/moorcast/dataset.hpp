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

// Training-table assembly: feature rows with compass (east, north)
// decompositions of every direction, FD rows overridden by QD where a state
// was screened, and a decile-stratified train/validation split.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "moorcast/common.hpp"
#include "moorcast/heading.hpp"
#include "moorcast/metocean.hpp"
#include "moorcast/random.hpp"
#include "moorcast/response.hpp"

namespace moorcast {

inline constexpr int kFeatureVersion = 1;

inline const std::vector<std::string>& feature_names() {
  static const std::vector<std::string> names = {
      "hs1",    "tp1",    "hs2",    "tp2",    "uw",     "uc",
      "thp1_e", "thp1_n", "thp2_e", "thp2_n", "thw_e",  "thw_n",
      "thc_e",  "thc_n",  "phi_e",  "phi_n"};
  return names;
}

inline const std::vector<std::string>& target_names() {
  static const std::vector<std::string> names = {
      "mpm_offset", "offset_dir_e", "offset_dir_n", "mpm_t_fair", "mpm_t_anchor"};
  return names;
}

struct EastNorth {
  double east = 0.0;
  double north = 0.0;
};

inline EastNorth angular_decompose(double theta_deg) {
  if (!std::isfinite(theta_deg)) throw Error("non_finite", "angular_decompose");
  const double r = deg2rad(theta_deg);
  return {std::sin(r), std::cos(r)};
}

inline double angular_reconstruct(double east, double north) {
  if (east == 0.0 && north == 0.0)
    throw Error("no_direction", "angular_reconstruct: zero vector");
  return wrap360(rad2deg(std::atan2(east, north)));
}

using FeatureVector = std::vector<double>;

inline FeatureVector build_feature_row(const MetoceanState& s,
                                       const HeadingSolution& h) {
  const auto p1 = angular_decompose(s.wave1.theta_p);
  const auto p2 = angular_decompose(s.wave2.theta_p);
  const auto w = angular_decompose(s.wind.theta_w);
  const auto c = angular_decompose(s.current.theta_c);
  const auto ph = angular_decompose(h.phi_eq);
  return {s.wave1.hs, s.wave1.tp, s.wave2.hs, s.wave2.tp, s.wind.uw,
          s.current.uc, p1.east, p1.north, p2.east, p2.north,
          w.east, w.north, c.east, c.north, ph.east, ph.north};
}

struct FeatureBound {
  double min = 0.0;
  double max = 0.0;
  bool operator==(const FeatureBound&) const = default;
};

enum class Split : std::uint8_t { kTrain = 0, kValidation = 1 };

struct TrainingTable {
  std::vector<std::string> features = feature_names();
  std::vector<std::string> ids;
  std::vector<FeatureVector> x;
  std::vector<ResponseStatistics> responses;
  std::vector<Split> split;
  std::vector<FeatureBound> bounds;  // training rows only
  std::uint64_t split_seed = 0;
  double split_fraction = 0.2;

  std::size_t size() const { return ids.size(); }

  // Target column by name (see target_names()).
  std::vector<double> target(const std::string& name) const {
    std::vector<double> y;
    y.reserve(responses.size());
    for (const auto& r : responses) y.push_back(target_value(r, name));
    return y;
  }

  static double target_value(const ResponseStatistics& r, const std::string& name) {
    if (name == "mpm_offset") return r.mpm_offset;
    if (name == "offset_dir_e") return angular_decompose(r.offset_dir).east;
    if (name == "offset_dir_n") return angular_decompose(r.offset_dir).north;
    if (name == "mpm_t_fair") return r.mpm_t_fair;
    if (name == "mpm_t_anchor") return r.mpm_t_anchor;
    throw Error("unknown_target", "no target named " + name);
  }

  std::vector<std::size_t> rows(Split s) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < split.size(); ++i)
      if (split[i] == s) out.push_back(i);
    return out;
  }

  std::size_t qd_count() const {
    return static_cast<std::size_t>(std::count_if(
        responses.begin(), responses.end(),
        [](const ResponseStatistics& r) { return r.source == ResponseSource::kQD; }));
  }
};

namespace detail {

// Deciles by rank of the stratification key (ties by row order); within
// each decile a seeded shuffle sends round(fraction * size) rows to
// validation.
inline std::vector<Split> stratified_split(const std::vector<double>& key,
                                           double fraction, std::uint64_t seed) {
  const std::size_t n = key.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
  std::vector<Split> out(n, Split::kTrain);
  constexpr std::size_t kStrata = 10;
  for (std::size_t d = 0; d < kStrata; ++d) {
    const std::size_t lo = d * n / kStrata;
    const std::size_t hi = (d + 1) * n / kStrata;
    std::vector<std::size_t> members(order.begin() + static_cast<std::ptrdiff_t>(lo),
                                     order.begin() + static_cast<std::ptrdiff_t>(hi));
    std::sort(members.begin(), members.end());
    CounterRng rng(derive_seed(seed, d));
    for (std::size_t i = members.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i - 1)));
      std::swap(members[i - 1], members[j]);
    }
    const auto take = static_cast<std::size_t>(
        std::llround(fraction * static_cast<double>(members.size())));
    for (std::size_t k = 0; k < take; ++k) out[members[k]] = Split::kValidation;
  }
  return out;
}

}  // namespace detail

inline std::vector<FeatureBound> training_bounds(const TrainingTable& t) {
  std::vector<FeatureBound> b(t.features.size(),
                              {std::numeric_limits<double>::infinity(),
                               -std::numeric_limits<double>::infinity()});
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t.split[i] != Split::kTrain) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      b[j].min = std::min(b[j].min, t.x[i][j]);
      b[j].max = std::max(b[j].max, t.x[i][j]);
    }
  }
  return b;
}

// states, headings and fd_results are parallel arrays; qd_results is keyed
// by state id and must cover exactly the flagged ids.
inline TrainingTable assemble_dataset(
    const std::vector<MetoceanState>& states,
    const std::vector<HeadingSolution>& headings,
    const std::vector<ResponseStatistics>& fd_results,
    const std::vector<std::string>& flagged,
    const std::map<std::string, ResponseStatistics>& qd_results,
    double split_fraction = 0.2, std::uint64_t seed = 0) {
  if (states.size() != fd_results.size() || states.size() != headings.size())
    throw Error("size_mismatch", "assemble_dataset: inputs differ in length");
  if (states.empty()) throw Error("empty", "assemble_dataset: no states");
  if (!(split_fraction > 0.0 && split_fraction < 1.0))
    throw Error("bad_fraction", "assemble_dataset: split_fraction must be in (0, 1)");
  std::set<std::string> seen;
  for (const auto& s : states)
    if (!seen.insert(s.id).second)
      throw Error("duplicate_id", "assemble_dataset: duplicate id " + s.id);
  const std::set<std::string> flag_set(flagged.begin(), flagged.end());
  for (const auto& id : flag_set)
    if (!qd_results.count(id))
      throw Error("missing_qd", "assemble_dataset: no QD result for flagged id " + id);
  for (const auto& [id, r] : qd_results)
    if (!flag_set.count(id))
      throw Error("unexpected_qd", "assemble_dataset: QD result for unflagged id " + id);

  TrainingTable t;
  t.split_seed = seed;
  t.split_fraction = split_fraction;
  for (std::size_t i = 0; i < states.size(); ++i) {
    t.ids.push_back(states[i].id);
    t.x.push_back(build_feature_row(states[i], headings[i]));
    auto it = qd_results.find(states[i].id);
    t.responses.push_back(it != qd_results.end() ? it->second : fd_results[i]);
  }
  t.split = detail::stratified_split(t.target("mpm_offset"), split_fraction, seed);
  t.bounds = training_bounds(t);
  return t;
}

}  // namespace moorcast
