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

// Data-generation pipeline: sample -> heading -> FD -> screen -> QD on the
// flagged states -> training table. Per-state stages run in parallel and
// are stored by state index, so results do not depend on thread count.

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "moorcast/dataset.hpp"
#include "moorcast/heading.hpp"
#include "moorcast/metocean.hpp"
#include "moorcast/mooring.hpp"
#include "moorcast/qd.hpp"
#include "moorcast/response.hpp"
#include "moorcast/vessel.hpp"

namespace moorcast {

struct PipelineConfig {
  std::size_t n_states = 20000;
  std::uint64_t seed = 42;
  DatasetBounds bounds;
  VesselModel vessel;
  MooringSystem mooring = default_mooring();
  FdConfig fd;
  QdConfig qd;
  double split_fraction = 0.2;
};

// FNV-1a; keys QD seeds by state id so a state keeps its seeds when it is
// rotated, reordered or evaluated alone.
inline std::uint64_t id_hash(const std::string& id) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : id) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::uint64_t qd_state_seed(std::uint64_t master, const std::string& id) {
  return derive_seed(master, id_hash(id));
}

struct DroppedState {
  std::string id;
  std::string stage;
  std::string reason;
};

struct PipelineResult {
  std::vector<MetoceanState> states;  // kept states, sample order
  std::vector<HeadingSolution> headings;
  std::vector<ResponseStatistics> fd;
  ScreenResult screened;
  std::map<std::string, ResponseStatistics> qd;
  std::vector<DroppedState> dropped;
  TrainingTable table;
  std::map<std::string, double> seconds;
};

using ProgressFn = std::function<void(const std::string& stage, std::size_t done,
                                      std::size_t total)>;

// Heading and FD for each state; failures are returned, not thrown.
inline void evaluate_fd(const PipelineConfig& cfg, const std::vector<MetoceanState>& states,
                        std::vector<HeadingSolution>& headings,
                        std::vector<ResponseStatistics>& fd,
                        std::vector<std::string>& errors) {
  const std::size_t n = states.size();
  headings.assign(n, {});
  fd.assign(n, {});
  errors.assign(n, {});
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(n); ++k) {
    const auto i = static_cast<std::size_t>(k);
    try {
      headings[i] = solve_equilibrium_heading(cfg.vessel, states[i]);
      fd[i] = fd_response(cfg.mooring, cfg.vessel, states[i], headings[i].phi_eq, cfg.fd);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
}

inline PipelineResult run_pipeline(const PipelineConfig& cfg,
                                   const ProgressFn& progress = nullptr) {
  using clock = std::chrono::steady_clock;
  auto secs = [](clock::time_point a) {
    return std::chrono::duration<double>(clock::now() - a).count();
  };
  PipelineResult out;
  auto t0 = clock::now();
  auto states = sample_metocean(cfg.n_states, cfg.seed, cfg.bounds);
  out.seconds["sample"] = secs(t0);

  t0 = clock::now();
  std::vector<HeadingSolution> headings;
  std::vector<ResponseStatistics> fd;
  std::vector<std::string> errors;
  evaluate_fd(cfg, states, headings, fd, errors);
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (!errors[i].empty()) {
      out.dropped.push_back({states[i].id, "fd", errors[i]});
      continue;
    }
    out.states.push_back(std::move(states[i]));
    out.headings.push_back(headings[i]);
    out.fd.push_back(fd[i]);
  }
  out.seconds["heading_fd"] = secs(t0);
  if (progress) progress("fd", out.states.size(), cfg.n_states);

  std::vector<std::string> ids;
  for (const auto& s : out.states) ids.push_back(s.id);
  out.screened = screen(cfg.mooring, ids, out.fd, cfg.fd);

  t0 = clock::now();
  std::vector<std::size_t> flagged_idx;
  for (std::size_t i = 0, f = 0; i < ids.size() && f < out.screened.flagged.size(); ++i)
    if (ids[i] == out.screened.flagged[f]) {
      flagged_idx.push_back(i);
      ++f;
    }
  const TableMooring table_moor(cfg.mooring);
  std::vector<ResponseStatistics> qd(flagged_idx.size());
  std::vector<std::string> qd_err(flagged_idx.size());
  std::size_t done = 0;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(flagged_idx.size()); ++k) {
    const auto i = flagged_idx[static_cast<std::size_t>(k)];
    QdConfig qc = cfg.qd;
    qc.seed = qd_state_seed(cfg.qd.seed, out.states[i].id);
    try {
      qd[static_cast<std::size_t>(k)] =
          qd_mpm(table_moor, cfg.vessel, out.states[i], out.headings[i].phi_eq, qc);
    } catch (const std::exception& e) {
      qd_err[static_cast<std::size_t>(k)] = e.what();
    }
#pragma omp critical(moorcast_progress)
    {
      ++done;
      if (progress && (done % 50 == 0 || done == flagged_idx.size()))
        progress("qd", done, flagged_idx.size());
    }
  }
  out.seconds["qd"] = secs(t0);

  // States whose QD run failed are removed altogether; they can be neither
  // FD rows (screened as critical) nor QD rows.
  std::vector<bool> drop(out.states.size(), false);
  for (std::size_t k = 0; k < flagged_idx.size(); ++k) {
    const auto i = flagged_idx[k];
    if (qd_err[k].empty()) {
      out.qd[out.states[i].id] = qd[k];
    } else {
      drop[i] = true;
      out.dropped.push_back({out.states[i].id, "qd", qd_err[k]});
    }
  }
  if (std::find(drop.begin(), drop.end(), true) != drop.end()) {
    PipelineResult kept;
    for (std::size_t i = 0; i < out.states.size(); ++i) {
      if (drop[i]) continue;
      kept.states.push_back(out.states[i]);
      kept.headings.push_back(out.headings[i]);
      kept.fd.push_back(out.fd[i]);
    }
    out.states = std::move(kept.states);
    out.headings = std::move(kept.headings);
    out.fd = std::move(kept.fd);
    std::vector<std::string> still;
    for (const auto& id : out.screened.flagged)
      if (out.qd.count(id)) still.push_back(id);
    out.screened.flagged = std::move(still);
  }

  out.table = assemble_dataset(out.states, out.headings, out.fd, out.screened.flagged,
                               out.qd, cfg.split_fraction, cfg.seed);
  return out;
}

}  // namespace moorcast
