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

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "moorcast/io.hpp"
#include "moorcast/pipeline.hpp"

namespace moorcast {
namespace {

TEST(Angular, CardinalDirections) {
  const auto n = angular_decompose(0.0);
  EXPECT_NEAR(n.east, 0.0, 1e-15);
  EXPECT_EQ(n.north, 1.0);
  const auto e = angular_decompose(90.0);
  EXPECT_EQ(e.east, 1.0);
  EXPECT_NEAR(e.north, 0.0, 1e-15);
}

TEST(Angular, MeanSwellDirection) {
  const auto d = angular_decompose(223.61);
  EXPECT_NEAR(d.east, -0.690, 1e-3);
  EXPECT_NEAR(d.north, -0.724, 1e-3);
}

TEST(Angular, Reconstruct) {
  EXPECT_NEAR(angular_reconstruct(0.5, 0.5), 45.0, 1e-12);
  EXPECT_NEAR(angular_reconstruct(0.0, -1.0), 180.0, 1e-12);
  EXPECT_THROW(angular_reconstruct(0.0, 0.0), Error);
  EXPECT_THROW(angular_decompose(NAN), Error);
}

TEST(Angular, RoundTripGrid) {
  double worst = 0.0;
  for (int i = 0; i < 3600; ++i) {
    const double th = 0.1 * i;
    const auto d = angular_decompose(th);
    worst = std::max(worst, std::abs(wrap180(angular_reconstruct(d.east, d.north) - th)));
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(FeatureRow, CalmState) {
  MetoceanState s;
  s.wave1 = {0.0, 8.0, 0.0};
  s.wave2 = {0.0, 12.0, 0.0};
  HeadingSolution h;
  const auto x = build_feature_row(s, h);
  ASSERT_EQ(x.size(), feature_names().size());
  for (int j : {0, 2, 4, 5}) EXPECT_EQ(x[static_cast<std::size_t>(j)], 0.0);
  EXPECT_NEAR(x[14], 0.0, 1e-15);
  EXPECT_EQ(x[15], 1.0);
}

TEST(FeatureRow, FixedOrderAndUnitPairs) {
  const auto states = sample_metocean(200, 5, DatasetBounds{});
  const VesselModel v;
  for (const auto& s : states) {
    const auto h = solve_equilibrium_heading(v, s);
    const auto a = build_feature_row(s, h);
    EXPECT_EQ(a, build_feature_row(s, h));
    EXPECT_EQ(a[0], s.wave1.hs);
    EXPECT_EQ(a[3], s.wave2.tp);
    EXPECT_EQ(a[5], s.current.uc);
    for (std::size_t j = 6; j < 16; j += 2) EXPECT_NEAR(std::hypot(a[j], a[j + 1]), 1.0, 1e-9);
  }
  EXPECT_EQ(feature_names().front(), "hs1");
  EXPECT_EQ(feature_names().back(), "phi_n");
}

TEST(FeatureRow, RotationEquivariance) {
  const auto states = sample_metocean(50, 6, DatasetBounds{});
  for (const auto& s : states) {
    HeadingSolution h;
    h.phi_eq = 77.0;
    const double d = 37.5;
    HeadingSolution hr;
    hr.phi_eq = wrap360(h.phi_eq + d);
    const auto a = build_feature_row(s, h);
    const auto b = build_feature_row(rotated(s, d), hr);
    for (std::size_t j = 6; j < 16; j += 2) {
      const double ta = angular_reconstruct(a[j], a[j + 1]);
      const double tb = angular_reconstruct(b[j], b[j + 1]);
      EXPECT_NEAR(wrap180(tb - ta - d), 0.0, 1e-9);
    }
  }
}

// Synthetic parallel inputs with mpm_offset = i.
struct Inputs {
  std::vector<MetoceanState> states;
  std::vector<HeadingSolution> headings;
  std::vector<ResponseStatistics> fd;
};

Inputs synthetic(std::size_t n) {
  Inputs in;
  in.states = sample_metocean(n, 8, DatasetBounds{});
  for (std::size_t i = 0; i < n; ++i) {
    HeadingSolution h;
    h.phi_eq = std::fmod(7.0 * static_cast<double>(i), 360.0);
    in.headings.push_back(h);
    ResponseStatistics r;
    r.phi_eq = h.phi_eq;
    r.mpm_offset = static_cast<double>(i);
    r.offset_dir = std::fmod(13.0 * static_cast<double>(i), 360.0);
    r.mpm_t_fair = 2e6 + static_cast<double>(i);
    r.mpm_t_anchor = 1.5e6;
    in.fd.push_back(r);
  }
  return in;
}

TEST(Assemble, AllFdWithoutFlags) {
  const auto in = synthetic(100);
  const auto t = assemble_dataset(in.states, in.headings, in.fd, {}, {}, 0.2, 1);
  EXPECT_EQ(t.qd_count(), 0u);
  EXPECT_EQ(t.size(), 100u);
}

TEST(Assemble, ValidationSizeAndStratification) {
  const auto in = synthetic(1000);
  const auto t = assemble_dataset(in.states, in.headings, in.fd, {}, {}, 0.2, 9);
  const auto val = t.rows(Split::kValidation);
  EXPECT_LE(std::abs(static_cast<long>(val.size()) - 200L), 10L);
  // 20 per decile of mpm_offset (= row index here).
  std::vector<int> per(10, 0);
  for (auto i : val) ++per[i / 100];
  for (int c : per) EXPECT_EQ(c, 20);
}

TEST(Assemble, DeterministicAndDisjoint) {
  const auto in = synthetic(500);
  const auto a = assemble_dataset(in.states, in.headings, in.fd, {}, {}, 0.2, 3);
  const auto b = assemble_dataset(in.states, in.headings, in.fd, {}, {}, 0.2, 3);
  const auto c = assemble_dataset(in.states, in.headings, in.fd, {}, {}, 0.2, 4);
  EXPECT_EQ(a.split, b.split);
  EXPECT_NE(a.split, c.split);
  std::set<std::string> train, val;
  for (std::size_t i = 0; i < a.size(); ++i)
    (a.split[i] == Split::kTrain ? train : val).insert(a.ids[i]);
  for (const auto& id : val) EXPECT_EQ(train.count(id), 0u);
  EXPECT_EQ(train.size() + val.size(), a.size());
}

TEST(Assemble, BoundsFromTrainingRowsOnly) {
  const auto in = synthetic(300);
  const auto t = assemble_dataset(in.states, in.headings, in.fd, {}, {}, 0.2, 2);
  for (std::size_t j = 0; j < t.features.size(); ++j) {
    double lo = INFINITY, hi = -INFINITY;
    for (auto i : t.rows(Split::kTrain)) {
      lo = std::min(lo, t.x[i][j]);
      hi = std::max(hi, t.x[i][j]);
    }
    EXPECT_EQ(t.bounds[j].min, lo);
    EXPECT_EQ(t.bounds[j].max, hi);
  }
}

TEST(Assemble, QdOverridesFlaggedRows) {
  const auto in = synthetic(50);
  std::map<std::string, ResponseStatistics> qd;
  std::vector<std::string> flagged;
  for (std::size_t i : {3u, 17u, 41u}) {
    ResponseStatistics r = in.fd[i];
    r.source = ResponseSource::kQD;
    r.mpm_offset += 100.0;
    qd[in.states[i].id] = r;
    flagged.push_back(in.states[i].id);
  }
  const auto t = assemble_dataset(in.states, in.headings, in.fd, flagged, qd, 0.2, 1);
  EXPECT_EQ(t.qd_count(), flagged.size());
  EXPECT_EQ(t.responses[17].source, ResponseSource::kQD);
  EXPECT_EQ(t.responses[17].mpm_offset, 117.0);
  EXPECT_EQ(t.responses[18].source, ResponseSource::kFD);
}

TEST(Assemble, Errors) {
  auto in = synthetic(20);
  try {
    assemble_dataset(in.states, in.headings, in.fd, {in.states[2].id}, {}, 0.2, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "missing_qd");
  }
  in.states[5].id = in.states[4].id;
  try {
    assemble_dataset(in.states, in.headings, in.fd, {}, {}, 0.2, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "duplicate_id");
  }
  EXPECT_THROW(assemble_dataset(in.states, in.headings, {}, {}, {}, 0.2, 1), Error);
}

TEST(Assemble, TargetsFromResponses) {
  const auto in = synthetic(10);
  const auto t = assemble_dataset(in.states, in.headings, in.fd, {}, {}, 0.2, 1);
  const auto e = t.target("offset_dir_e");
  const auto n = t.target("offset_dir_n");
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_NEAR(std::hypot(e[i], n[i]), 1.0, 1e-12);
    EXPECT_NEAR(wrap180(angular_reconstruct(e[i], n[i]) - t.responses[i].offset_dir), 0.0, 1e-9);
  }
  EXPECT_THROW(t.target("nope"), Error);
}

TEST(TableCsv, RoundTrip) {
  const auto in = synthetic(60);
  const auto t = assemble_dataset(in.states, in.headings, in.fd, {}, {}, 0.25, 11);
  const auto back = io::parse_table_csv(io::table_csv(t));
  EXPECT_EQ(back.ids, t.ids);
  EXPECT_EQ(back.split, t.split);
  EXPECT_EQ(back.x, t.x);
  EXPECT_EQ(back.bounds, t.bounds);
  for (std::size_t i = 0; i < t.size(); ++i) EXPECT_TRUE(back.responses[i] == t.responses[i]);
  const auto side = io::table_sidecar(t, 3);
  EXPECT_EQ(side["counts"]["dropped"], 3);
  EXPECT_EQ(side["counts"]["rows"], 60);
}

TEST(TableCsv, VersionChecked) {
  const auto in = synthetic(5);
  auto text = io::table_csv(assemble_dataset(in.states, in.headings, in.fd, {}, {}, 0.2, 1));
  text.replace(text.find("schema_version=1"), 16, "schema_version=9");
  try {
    io::parse_table_csv(text);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "version_mismatch");
  }
}

TEST(Pipeline, SmallRunEndToEnd) {
  PipelineConfig cfg;
  cfg.n_states = 120;
  cfg.seed = 21;
  cfg.qd.duration = 1800.0;
  cfg.qd.ramp = 300.0;
  cfg.qd.n_realizations = 3;
  cfg.fd.tension_fraction = 0.45;  // flag a handful in a small sample
  const auto r = run_pipeline(cfg);
  EXPECT_EQ(r.states.size() + r.dropped.size(), 120u);
  EXPECT_EQ(r.table.size(), r.states.size());
  EXPECT_GT(r.screened.flagged.size(), 0u);
  EXPECT_EQ(r.table.qd_count(), r.screened.flagged.size());
  EXPECT_EQ(r.qd.size(), r.screened.flagged.size());
  for (std::size_t i = 0; i < r.table.size(); ++i) {
    const auto& x = r.table.x[i];
    for (double v : x) ASSERT_TRUE(std::isfinite(v));
    for (std::size_t j = 6; j < 16; j += 2) EXPECT_NEAR(std::hypot(x[j], x[j + 1]), 1.0, 1e-9);
  }
  const auto again = run_pipeline(cfg);
  EXPECT_EQ(io::table_csv(again.table), io::table_csv(r.table));
}

TEST(Pipeline, QdSeedKeyedById) {
  EXPECT_EQ(qd_state_seed(1, "S7"), qd_state_seed(1, "S7"));
  EXPECT_NE(qd_state_seed(1, "S7"), qd_state_seed(1, "S8"));
  EXPECT_NE(qd_state_seed(1, "S7"), qd_state_seed(2, "S7"));
}

}  // namespace
}  // namespace moorcast
