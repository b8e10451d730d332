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
#include "moorcast/response.hpp"

namespace moorcast {
namespace {

const VesselModel kVessel;

MetoceanState calm() {
  MetoceanState s;
  s.id = "calm";
  s.wave1 = {0.0, 8.0, 0.0};
  s.wave2 = {0.0, 12.0, 0.0};
  return s;
}

MetoceanState moderate() {
  MetoceanState s;
  s.id = "moderate";
  s.wave1 = {3.0, 8.0, 200.0, 2.0};
  s.wave2 = {1.5, 13.0, 230.0, 3.0};
  s.wind = {14.0, 190.0};
  s.current = {0.6, 250.0};
  return s;
}

double phi_of(const MetoceanState& s) {
  return solve_equilibrium_heading(kVessel, s).phi_eq;
}

TEST(MeanOffset, ZeroEnvironment) {
  const auto x = mean_equilibrium_offset(default_mooring(), kVessel, calm(), 0.0);
  EXPECT_EQ(x.x, 0.0);
  EXPECT_EQ(x.y, 0.0);
}

TEST(MeanOffset, ResidualBelowOneNewton) {
  const auto sys = default_mooring();
  const auto s = moderate();
  const double phi = phi_of(s);
  const auto x = mean_equilibrium_offset(sys, kVessel, s, phi);
  const Vec2 r = system_restoring(sys, x).force + global_mean_force(kVessel, s, phi);
  EXPECT_LT(r.norm(), 1.0);
  EXPECT_GT(x.norm(), 1.0);
}

TEST(MeanOffset, RotatesWithEnvironment) {
  // The mooring pattern repeats every 120 deg, so that is the rotation under
  // which the full problem is equivariant.
  const auto sys = default_mooring();
  const auto s = moderate();
  const double phi = phi_of(s);
  const auto a = mean_equilibrium_offset(sys, kVessel, s, phi, 1e-6);
  for (double d : {120.0, 240.0}) {
    const auto b = mean_equilibrium_offset(sys, kVessel, rotated(s, d), wrap360(phi + d), 1e-6);
    EXPECT_NEAR(b.norm(), a.norm(), 1e-6);
    EXPECT_NEAR(wrap180(bearing_of(b) - bearing_of(a) - d), 0.0, 1e-6);
  }
}

TEST(MeanOffset, ExcessiveLoadIsReported) {
  auto s = moderate();
  s.current.uc = 6.0;
  s.wind.uw = 60.0;
  s.wind.theta_w = s.current.theta_c;
  try {
    mean_equilibrium_offset(default_mooring(), kVessel, s, phi_of(s));
    FAIL();
  } catch (const Error& e) {
    EXPECT_TRUE(e.code() == "infeasible" || e.code() == "uplift") << e.code();
  }
}

TEST(LfResponse, ZeroWithoutWaves) {
  auto s = calm();
  s.current = {0.8, 45.0};
  const auto sys = default_mooring();
  const double phi = phi_of(s);
  const auto x = mean_equilibrium_offset(sys, kVessel, s, phi);
  EXPECT_EQ(lf_response_std(sys, kVessel, s, phi, x, FdConfig{}), 0.0);
}

TEST(LfResponse, WhiteNoiseDampingIdentity) {
  // Linear damping only: sigma^2 = pi S / (2 b k), so doubling b divides by sqrt 2.
  const double s_f = 3.0e10, k = 9.0e4, m = 3.2e8;
  const double a = lf_axis_std(s_f, k, m, 4.0e5, 0.0);
  const double b = lf_axis_std(s_f, k, m, 8.0e5, 0.0);
  EXPECT_NEAR(a / b, std::sqrt(2.0), 0.02 * std::sqrt(2.0));
  EXPECT_NEAR(a * a, kPi * s_f / (2.0 * 4.0e5 * k), 1e-9 * a * a);
}

TEST(LfResponse, StateLevelDampingScaling) {
  const auto sys = default_mooring();
  const auto s = moderate();
  const double phi = phi_of(s);
  const auto x = mean_equilibrium_offset(sys, kVessel, s, phi);
  FdConfig c1;
  c1.lf_quad_damping = 0.0;
  FdConfig c2 = c1;
  c2.lf_damping *= 2.0;
  const double a = lf_response_std(sys, kVessel, s, phi, x, c1);
  const double b = lf_response_std(sys, kVessel, s, phi, x, c2);
  EXPECT_GT(a, 0.0);
  EXPECT_NEAR(a / b, std::sqrt(2.0), 0.02 * std::sqrt(2.0));
}

TEST(LfResponse, QuadraticDampingReducesStd) {
  const double s_f = 3.0e10, k = 9.0e4, m = 3.2e8;
  const double lin = lf_axis_std(s_f, k, m, 4.0e5, 0.0);
  const double quad = lf_axis_std(s_f, k, m, 4.0e5, 4.0e7);
  EXPECT_LT(quad, lin);
  // Converged linearisation satisfies the balance it was solved from.
  const double c = std::sqrt(8.0 / kPi) * std::sqrt(k / m) * 4.0e7;
  EXPECT_NEAR((4.0e5 + c * quad) * quad * quad, kPi * s_f / (2.0 * k), 1e-9 * kPi * s_f / k);
}

TEST(LfResponse, NonPositiveStiffnessRejected) {
  EXPECT_THROW(lf_axis_std(1.0, 0.0, 1.0, 1.0, 0.0), Error);
  EXPECT_THROW(lf_axis_std(1.0, -5.0, 1.0, 1.0, 0.0), Error);
}

TEST(WfResponse, ZeroWithoutWaves) {
  EXPECT_EQ(wf_response_std(kVessel, calm(), 0.0, FdConfig{}), 0.0);
}

TEST(WfResponse, UnitRaoGivesSpectralStd) {
  FdConfig c;
  c.rao.corner_omega = 1e9;
  c.rao.surge_gain = c.rao.sway_gain = 1.0;
  c.spectral_points = 2000;
  const auto s = moderate();
  const double expect = std::sqrt((s.wave1.hs * s.wave1.hs + s.wave2.hs * s.wave2.hs) / 16.0);
  EXPECT_NEAR(wf_response_std(kVessel, s, 123.0, c), expect, 0.01 * expect);
}

TEST(WfResponse, LinearInWaveHeight) {
  auto s = moderate();
  const FdConfig c;
  const double a = wf_response_std(kVessel, s, 200.0, c);
  s.wave1.hs *= 2.0;
  s.wave2.hs *= 2.0;
  EXPECT_NEAR(wf_response_std(kVessel, s, 200.0, c), 2.0 * a, 1e-9 * a);
}

TEST(FdMpm, NarrowBandFactor) {
  EXPECT_NEAR(fd_mpm_offset(10.0, 1.0, 1000.0), 13.7169, 5e-4);
  EXPECT_EQ(fd_mpm_offset(7.5, 0.0, 1000.0), 7.5);
}

TEST(FdMpm, MonotoneInSigmaAndCycles) {
  double prev = 0.0;
  for (double sigma = 0.0; sigma < 5.0; sigma += 0.25) {
    const double m = fd_mpm_offset(10.0, sigma, 500.0);
    EXPECT_GE(m, prev);
    prev = m;
  }
  prev = 0.0;
  for (double n = 2.0; n < 1e5; n *= 3.0) {
    const double m = fd_mpm_offset(10.0, 1.0, n);
    EXPECT_GT(m, prev);
    prev = m;
  }
}

TEST(FdMpm, ZeroSigmaReturnsMean) {
  FdInputs in;
  in.mean_offset = {3.0, 4.0};
  const auto r = fd_mpm(default_mooring(), in, FdConfig{});
  EXPECT_EQ(r.mpm_offset, 5.0);
  EXPECT_NEAR(r.offset_dir, bearing_of({3.0, 4.0}), 1e-12);
}

TEST(FdMpm, TinyOffsetFallsBackToForceDirection) {
  FdInputs in;
  in.mean_offset = {0.001, 0.0};
  in.mean_force = {0.0, -1.0e5};
  const auto r = fd_mpm(default_mooring(), in, FdConfig{});
  EXPECT_NEAR(r.offset_dir, 180.0, 1e-9);
}

TEST(FdResponse, InvariantsOnModerateState) {
  const auto sys = default_mooring();
  const auto s = moderate();
  const auto r = fd_response(sys, kVessel, s, phi_of(s), FdConfig{});
  EXPECT_GE(r.mpm_offset, r.mean_offset.norm() * (1.0 - 1e-9));
  EXPECT_GT(r.mpm_t_fair, 0.0);
  EXPECT_GT(r.mpm_t_anchor, 0.0);
  EXPECT_GE(r.offset_dir, 0.0);
  EXPECT_LT(r.offset_dir, 360.0);
  EXPECT_GT(r.sigma_lf, 0.0);
  EXPECT_GT(r.sigma_wf, 0.0);
  EXPECT_EQ(r.source, ResponseSource::kFD);
}

TEST(FdResponse, CalmStateIsExactlyZero) {
  const auto r = fd_response(default_mooring(), kVessel, calm(), 0.0, FdConfig{});
  EXPECT_EQ(r.sigma_lf, 0.0);
  EXPECT_EQ(r.sigma_wf, 0.0);
  EXPECT_EQ(r.mpm_offset, 0.0);
}

TEST(FdResponse, RotationEquivariance) {
  const auto sys = default_mooring();
  const auto s = moderate();
  const double phi = phi_of(s);
  const auto a = fd_response(sys, kVessel, s, phi, FdConfig{});
  const auto b = fd_response(sys, kVessel, rotated(s, 120.0), wrap360(phi + 120.0), FdConfig{});
  EXPECT_NEAR(b.mpm_offset, a.mpm_offset, 1e-6 * a.mpm_offset);
  EXPECT_NEAR(wrap180(b.offset_dir - a.offset_dir - 120.0), 0.0, 1e-4);
  EXPECT_NEAR(b.mpm_t_fair, a.mpm_t_fair, 1e-6 * a.mpm_t_fair);
}

TEST(Screen, ThresholdExtremes) {
  const auto sys = default_mooring();
  std::vector<std::string> ids;
  std::vector<ResponseStatistics> fd;
  for (double hs : {1.0, 3.0, 5.0}) {
    auto s = moderate();
    s.wave1.hs = hs;
    s.id = "hs" + std::to_string(hs);
    ids.push_back(s.id);
    fd.push_back(fd_response(sys, kVessel, s, phi_of(s), FdConfig{}));
  }
  FdConfig none;
  none.tension_fraction = 1.0;
  none.offset_fraction = 1e9;
  EXPECT_TRUE(screen(sys, ids, fd, none).flagged.empty());
  FdConfig all;
  all.tension_fraction = 0.0;
  const auto r = screen(sys, ids, fd, all);
  EXPECT_EQ(r.flagged, ids);
  EXPECT_EQ(r.fraction, 1.0);
}

TEST(Screen, SizeMismatch) {
  EXPECT_THROW(screen(default_mooring(), {"a"}, {}, FdConfig{}), Error);
}

TEST(Screen, DefaultFractionOnSampledStates) {
  const auto sys = default_mooring();
  const auto states = sample_metocean(400, 77, DatasetBounds{});
  std::vector<std::string> ids;
  std::vector<ResponseStatistics> fd;
  for (const auto& s : states) {
    try {
      fd.push_back(fd_response(sys, kVessel, s, phi_of(s), FdConfig{}));
      ids.push_back(s.id);
    } catch (const Error&) {
      // extreme states beyond the mooring window are dropped upstream
    }
  }
  ASSERT_GT(fd.size(), 390u);
  const double f = screen(sys, ids, fd, FdConfig{}).fraction;
  EXPECT_GE(f, 0.01);
  EXPECT_LE(f, 0.30);
}

}  // namespace
}  // namespace moorcast
