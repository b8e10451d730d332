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

#include "moorcast/heading.hpp"
#include "moorcast/qd.hpp"

namespace moorcast {
namespace {

const VesselModel kVessel;

MetoceanState make(double h1, double t1, double d1, double h2, double t2, double d2,
                   double uw, double dw, double uc, double dc) {
  MetoceanState s;
  s.wave1 = {h1, t1, d1, 2.0};
  s.wave2 = {h2, t2, d2, 2.0};
  s.wind = {uw, dw};
  s.current = {uc, dc};
  return s;
}

// Benign, unimodal benchmark states.
std::vector<MetoceanState> benchmarks() {
  return {make(2, 7, 0, 1, 12, 10, 10, 5, 0.3, 20),
          make(3, 8, 100, 1.5, 13, 110, 14, 95, 0.5, 120),
          make(4, 9, 200, 2, 14, 190, 18, 210, 0.7, 200),
          make(5, 10, 300, 2.5, 15, 320, 20, 290, 0.9, 310),
          make(3.5, 8.5, 45, 1, 11, 60, 12, 30, 0.6, 70)};
}

double phi_of(const MetoceanState& s) {
  return solve_equilibrium_heading(kVessel, s).phi_eq;
}

const TableMooring& table() {
  static const TableMooring t(default_mooring());
  return t;
}

TEST(GumbelFit, RecoversSampledParameters) {
  CounterRng rng(31337);
  std::vector<double> x(10000);
  for (auto& v : x) v = 10.0 - 2.0 * std::log(-std::log(rng.uniform()));
  const auto g = gumbel_fit(x);
  EXPECT_GE(g.mu, 9.9);
  EXPECT_LE(g.mu, 10.1);
  EXPECT_GE(g.beta, 1.9);
  EXPECT_LE(g.beta, 2.1);
}

TEST(GumbelFit, LocationShift) {
  const std::vector<double> x{3.0, 4.5, 2.2, 7.1, 5.0};
  auto y = x;
  for (auto& v : y) v += 12.5;
  const auto a = gumbel_fit(x);
  const auto b = gumbel_fit(y);
  EXPECT_NEAR(b.mu - a.mu, 12.5, 1e-12);
  EXPECT_NEAR(b.beta, a.beta, 1e-12);
  double mean = 0.0;
  for (double v : x) mean += v;
  EXPECT_LT(a.mu, mean / 5.0);
}

TEST(GumbelFit, IdenticalValuesRejected) {
  try {
    gumbel_fit({4.0, 4.0, 4.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "degenerate");
  }
  EXPECT_THROW(gumbel_fit({1.0}), Error);
}

TEST(DriftForce, ZeroWithoutWaves) {
  const auto f = synthesize_drift_force(kVessel, WaveSystem{0.0, 8.0, 0.0}, 0.0, 1, QdConfig{});
  for (const auto& v : f.force) ASSERT_EQ(v.norm(), 0.0);
}

TEST(DriftForce, SameSeedBitwise) {
  const WaveSystem w{3.0, 9.0, 40.0, 2.5};
  const auto a = synthesize_drift_force(kVessel, w, 10.0, 99, QdConfig{});
  const auto b = synthesize_drift_force(kVessel, w, 10.0, 99, QdConfig{});
  ASSERT_EQ(a.force.size(), b.force.size());
  for (std::size_t i = 0; i < a.force.size(); ++i) {
    ASSERT_EQ(a.force[i].x, b.force[i].x);
    ASSERT_EQ(a.force[i].y, b.force[i].y);
  }
  const auto c = synthesize_drift_force(kVessel, w, 10.0, 100, QdConfig{});
  EXPECT_NE(a.force[1000].x, c.force[1000].x);
}

TEST(DriftForce, EnsembleMeanMatchesMeanDrift) {
  const WaveSystem w{3.0, 9.0, 40.0, 2.5};
  const QdConfig cfg;
  const Vec2 target = global_drift_force(kVessel, w, 10.0);
  Vec2 acc;
  const auto n3h = static_cast<std::size_t>(10800.0 / (0.5 * cfg.dt));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto f = synthesize_drift_force(kVessel, w, 10.0, seed, cfg);
    Vec2 m;
    for (std::size_t j = 0; j < n3h; ++j) m += f.force[j];
    acc += m * (1.0 / static_cast<double>(n3h));
  }
  acc = acc * (1.0 / 20.0);
  EXPECT_LE((acc - target).norm(), 0.05 * target.norm());
}

TEST(Realization, CalmStaysAtOrigin) {
  MetoceanState s;
  s.wave1 = {0.0, 8.0, 0.0};
  s.wave2 = {0.0, 12.0, 0.0};
  const auto e = simulate_realization(table(), kVessel, s, 0.0, 1, QdConfig{});
  EXPECT_LE(e.max_offset, 1e-6);
}

TEST(Realization, TimeStepConvergence) {
  const auto s = benchmarks()[2];
  const double phi = phi_of(s);
  QdConfig a;
  QdConfig b = a;
  b.dt = 0.25;
  const auto ea = simulate_realization(table(), kVessel, s, phi, 7, a);
  const auto eb = simulate_realization(table(), kVessel, s, phi, 7, b);
  EXPECT_LT(std::abs(ea.max_offset - eb.max_offset), 0.01 * eb.max_offset);
}

TEST(Realization, NoExtremeDuringRamp) {
  const auto s = benchmarks()[1];
  const QdConfig cfg;
  std::vector<TracePoint> trace;
  const auto e = simulate_realization(table(), kVessel, s, phi_of(s), 3, cfg, &trace);
  EXPECT_GT(e.t_max_offset, cfg.ramp);
  EXPECT_GT(e.t_max_t_fair, cfg.ramp);
  EXPECT_GT(e.t_max_t_anchor, cfg.ramp);
  ASSERT_FALSE(trace.empty());
  EXPECT_GT(trace.front().t, cfg.ramp);
  EXPECT_NEAR(trace.back().t, cfg.ramp + cfg.duration, 20 * cfg.dt);
}

TEST(Realization, FreeDecay) {
  MetoceanState s;
  s.wave1 = {0.0, 8.0, 0.0};
  s.wave2 = {0.0, 12.0, 0.0};
  QdConfig cfg;
  cfg.ramp = 0.0;
  cfg.duration = 3600.0;
  cfg.initial_offset = Vec2{12.0, -5.0};
  std::vector<TracePoint> trace;
  simulate_realization(table(), kVessel, s, 0.0, 1, cfg, &trace, 1);
  // Peak |x| in consecutive 300 s windows.
  std::vector<double> peaks;
  for (const auto& p : trace) {
    const auto w = static_cast<std::size_t>(p.t / 300.0);
    if (w >= peaks.size()) peaks.resize(w + 1, 0.0);
    peaks[w] = std::max(peaks[w], std::hypot(p.x, p.y));
  }
  for (std::size_t i = 1; i + 1 < peaks.size(); ++i) EXPECT_LT(peaks[i], peaks[i - 1]) << i;
  EXPECT_LT(peaks[peaks.size() - 2], 0.1 * 13.0);
}

TEST(Realization, LinearRegimeMatchesSpectralStd) {
  const auto sys = default_mooring();
  const auto s = benchmarks()[0];
  const double phi = phi_of(s);
  QdConfig q;
  q.lf_quad_damping = 0.0;
  q.include_wf = false;
  FdConfig f;
  f.lf_quad_damping = 0.0;
  const auto mean = mean_equilibrium_offset(sys, kVessel, s, phi);
  const double fd = lf_response_std(sys, kVessel, s, phi, mean, f);
  const double qd = qd_run(table(), kVessel, s, phi, q).stats.sigma_lf;
  EXPECT_NEAR(qd, fd, 0.10 * fd);
}

TEST(QdMpm, SteadyForcingGivesStaticOffset) {
  auto s = make(0, 8, 0, 0, 12, 0, 15.0, 60.0, 0.5, 80.0);
  const double phi = phi_of(s);
  const auto r = qd_mpm(table(), kVessel, s, phi, QdConfig{});
  const auto x = mean_equilibrium_offset(default_mooring(), kVessel, s, phi, 1e-6);
  EXPECT_NEAR(r.mpm_offset, x.norm(), 1e-3);
  EXPECT_EQ(r.source, ResponseSource::kQD);
}

TEST(QdMpm, DeterministicUnderSeed) {
  const auto s = benchmarks()[3];
  const double phi = phi_of(s);
  QdConfig cfg;
  cfg.seed = 42;
  const auto a = qd_mpm(table(), kVessel, s, phi, cfg);
  const auto b = qd_mpm(table(), kVessel, s, phi, cfg);
  EXPECT_TRUE(a == b);
  cfg.seed = 43;
  EXPECT_NE(qd_mpm(table(), kVessel, s, phi, cfg).mpm_offset, a.mpm_offset);
}

TEST(QdMpm, RotationEquivariance) {
  const auto s = benchmarks()[4];
  const double phi = phi_of(s);
  const auto a = qd_mpm(table(), kVessel, s, phi, QdConfig{});
  const auto b = qd_mpm(table(), kVessel, rotated(s, 120.0), wrap360(phi + 120.0), QdConfig{});
  EXPECT_NEAR(b.mpm_offset, a.mpm_offset, 0.01 * a.mpm_offset);
  EXPECT_NEAR(b.mpm_t_fair, a.mpm_t_fair, 0.01 * a.mpm_t_fair);
  EXPECT_NEAR(wrap180(b.offset_dir - a.offset_dir - 120.0), 0.0, 0.5);
}

TEST(QdMpm, DafApplied) {
  auto sys = default_mooring();
  const auto s = benchmarks()[1];
  const double phi = phi_of(s);
  const auto r = qd_run(TableMooring(sys), kVessel, s, phi, QdConfig{});
  EXPECT_DOUBLE_EQ(r.stats.mpm_t_fair, r.t_fair_fit.mu * sys.daf_fairlead);
  EXPECT_DOUBLE_EQ(r.stats.mpm_t_anchor, r.t_anchor_fit.mu * sys.daf_anchor);
  EXPECT_EQ(r.realizations.size(), 10u);
}

TEST(QdMpm, BenchmarksAgainstFrequencyDomain) {
  const auto sys = default_mooring();
  for (const auto& s : benchmarks()) {
    const double phi = phi_of(s);
    const auto fd = fd_response(sys, kVessel, s, phi, FdConfig{});
    const auto qd = qd_mpm(table(), kVessel, s, phi, QdConfig{});
    EXPECT_GE(qd.mpm_offset, qd.mean_offset.norm());
    EXPECT_NEAR(fd.sigma_lf, qd.sigma_lf, 0.15 * qd.sigma_lf);
    EXPECT_NEAR(fd.mpm_offset, qd.mpm_offset, 0.20 * qd.mpm_offset);
  }
}

TEST(QdConfig, Validation) {
  QdConfig c;
  c.n_realizations = 1;
  EXPECT_THROW(c.validate(), Error);
  c = QdConfig{};
  c.dt = 0.0;
  EXPECT_THROW(c.validate(), Error);
}

}  // namespace
}  // namespace moorcast
