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

// JSON run configuration. Every section is optional; absent keys keep their
// defaults. The file carries a schema_version that must match.

#include <array>
#include <string>

#include <json.hpp>

#include "moorcast/io.hpp"
#include "moorcast/ml/search.hpp"
#include "moorcast/pipeline.hpp"

namespace moorcast {

inline constexpr int kConfigSchemaVersion = 1;

struct MooringConfig {
  double depth = 400.0;
  LineSpec line;
  std::array<double, 3> cluster_azimuths{30.0, 150.0, 270.0};
  double separation = 5.0;
  int per_cluster = 3;
  double daf_fairlead = 1.15;
  double daf_anchor = 1.05;

  MooringSystem build() const {
    if (daf_fairlead < 1.0 || daf_anchor < 1.0)
      throw Error("bad_config", "mooring: DAF must be >= 1");
    if (!(line.length > depth) || !(line.w > 0.0) || !(line.ea > 0.0) ||
        !(line.anchor_radius > 0.0) || !(line.capacity_mbl > 0.0))
      throw Error("bad_config", "mooring: invalid line properties");
    auto sys = make_spread_mooring(line, depth, cluster_azimuths, separation, per_cluster);
    sys.daf_fairlead = daf_fairlead;
    sys.daf_anchor = daf_anchor;
    return sys;
  }
};

struct DatasetConfig {
  std::size_t n_states = 20000;
  std::uint64_t seed = 42;
  double split_fraction = 0.2;
  DatasetBounds bounds;
};

struct TrainConfig {
  bool tune = true;
  std::size_t tune_trials = 50;
  std::size_t cv_folds = 3;
  std::uint64_t seed = 7;
  std::size_t importance_repeats = 5;
  ml::SearchSpace space;
};

struct ServeConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  double tension_limit = 4.8e6;  // N
  double offset_limit = 40.0;    // m
  double domain_margin = 0.0;    // fraction of each feature's training span
  double max_buoy_age = 3600.0;  // s
  double forecast_cadence_h = 12.0;
  double forecast_window_h = 72.0;
  std::string forecast_path;     // CSV polled every cadence, empty = off
  std::string buoy_path;         // reference file-based buoy client
};

struct Config {
  int schema_version = kConfigSchemaVersion;
  VesselModel vessel;
  MooringConfig mooring;
  FdConfig fd;
  QdConfig qd;
  DatasetConfig dataset;
  TrainConfig train;
  ServeConfig serve;

  PipelineConfig pipeline() const {
    PipelineConfig p;
    p.n_states = dataset.n_states;
    p.seed = dataset.seed;
    p.bounds = dataset.bounds;
    p.vessel = vessel;
    p.mooring = mooring.build();
    p.fd = fd;
    p.qd = qd;
    p.split_fraction = dataset.split_fraction;
    return p;
  }
};

NLOHMANN_JSON_SERIALIZE_ENUM(Distribution, {{Distribution::kUniform, "uniform"},
                                            {Distribution::kLogNormal, "lognormal"}})

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(HarmonicCoefficients, cx, cy, cm)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(VesselModel, loa, beam, draft, turret_x,
                                                wind_area_frontal, wind_area_lateral,
                                                current_area_frontal, current_area_lateral,
                                                wind, current, drift, drift_tp_ref,
                                                drift_decay)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(LineSpec, length, w, ea, anchor_radius, psi,
                                                capacity_mbl)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(MooringConfig, depth, line, cluster_azimuths,
                                                separation, per_cluster, daf_fairlead,
                                                daf_anchor)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(RaoParams, corner_omega, surge_gain, sway_gain)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(FdConfig, duration, lf_mass, lf_damping,
                                                lf_quad_damping, rao, tension_fraction,
                                                offset_fraction, spectral_points)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ParamBounds, min, max, dist, mean, sd)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SteepnessLimit, tp_low, sp_low, tp_high,
                                                sp_high)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(DatasetBounds, hs1, tp1, gamma1, sigma_a1,
                                                sigma_b1, hs2, tp2, gamma2, sigma_a2,
                                                sigma_b2, uw, uc, theta, steepness)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(DatasetConfig, n_states, seed,
                                                split_fraction, bounds)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ServeConfig, host, port, tension_limit,
                                                offset_limit, domain_margin, max_buoy_age,
                                                forecast_cadence_h, forecast_window_h,
                                                forecast_path, buoy_path)

inline void to_json(nlohmann::json& j, const QdConfig& c) {
  j = {{"n_realizations", c.n_realizations}, {"duration", c.duration}, {"ramp", c.ramp},
       {"dt", c.dt}, {"lf_mass", c.lf_mass}, {"lf_damping", c.lf_damping},
       {"lf_quad_damping", c.lf_quad_damping}, {"rao", c.rao}, {"seed", c.seed},
       {"include_wf", c.include_wf}};
}

inline void from_json(const nlohmann::json& j, QdConfig& c) {
  const QdConfig d;
  c.n_realizations = j.value("n_realizations", d.n_realizations);
  c.duration = j.value("duration", d.duration);
  c.ramp = j.value("ramp", d.ramp);
  c.dt = j.value("dt", d.dt);
  c.lf_mass = j.value("lf_mass", d.lf_mass);
  c.lf_damping = j.value("lf_damping", d.lf_damping);
  c.lf_quad_damping = j.value("lf_quad_damping", d.lf_quad_damping);
  c.rao = j.value("rao", d.rao);
  c.seed = j.value("seed", d.seed);
  c.include_wf = j.value("include_wf", d.include_wf);
}

namespace ml {
NLOHMANN_JSON_SERIALIZE_ENUM(ModelKind, {{ModelKind::kLinear, "linear"},
                                         {ModelKind::kTree, "tree"},
                                         {ModelKind::kForest, "forest"},
                                         {ModelKind::kGbm, "gbm"}})
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SearchSpace, kind, lr_min, lr_max, depth_min,
                                                depth_max, reg_min, reg_max, subsample_min,
                                                subsample_max, vf_min, vf_max, patience_min,
                                                patience_max, n_rounds, leaf_min, leaf_max,
                                                trees_min, trees_max, forest_depth_min,
                                                forest_depth_max, forest_leaf_min,
                                                forest_leaf_max)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(TreeParams, max_depth, min_samples_leaf,
                                                n_bins)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ForestParams, n_trees, max_depth,
                                                min_samples_leaf, col_subsample, n_bins, seed)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(GbmParams, n_rounds, learning_rate, max_depth,
                                                min_samples_leaf, l1_alpha, l2_lambda,
                                                row_subsample, col_subsample, n_bins,
                                                early_stopping, validation_fraction, patience,
                                                seed)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ModelParams, kind, tree, forest, gbm)
}  // namespace ml

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(TrainConfig, tune, tune_trials, cv_folds, seed,
                                                importance_repeats, space)

inline void to_json(nlohmann::json& j, const Config& c) {
  j = {{"schema_version", c.schema_version}, {"vessel", c.vessel}, {"mooring", c.mooring},
       {"fd", c.fd}, {"qd", c.qd}, {"dataset", c.dataset}, {"train", c.train},
       {"serve", c.serve}};
}

inline void from_json(const nlohmann::json& j, Config& c) {
  const Config d;
  c.schema_version = j.value("schema_version", -1);
  if (c.schema_version != kConfigSchemaVersion)
    throw Error("version_mismatch", "config schema_version " +
                                        std::to_string(c.schema_version) + " unsupported (want " +
                                        std::to_string(kConfigSchemaVersion) + ")");
  c.vessel = j.value("vessel", d.vessel);
  c.mooring = j.value("mooring", d.mooring);
  c.fd = j.value("fd", d.fd);
  c.qd = j.value("qd", d.qd);
  c.dataset = j.value("dataset", d.dataset);
  c.train = j.value("train", d.train);
  c.serve = j.value("serve", d.serve);
}

inline Config load_config(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(io::read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error("bad_config", path + ": " + e.what());
  }
  try {
    return j.get<Config>();
  } catch (const nlohmann::json::exception& e) {
    throw Error("bad_config", path + ": " + e.what());
  }
}

}  // namespace moorcast
