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

#include "moorcast/vessel.hpp"

namespace moorcast {
namespace {

const VesselModel kVessel;

void expect_load_near(const PlanarLoad& a, const PlanarLoad& b, double rel) {
  const double scale = std::max({std::abs(b.fx), std::abs(b.fy), std::abs(b.mz) / 100.0, 1.0});
  EXPECT_NEAR(a.fx, b.fx, rel * scale);
  EXPECT_NEAR(a.fy, b.fy, rel * scale);
  EXPECT_NEAR(a.mz, b.mz, rel * scale * 100.0);
}

TEST(WindLoad, CalmIsZero) {
  const auto l = wind_load(kVessel, {0.0, 123.0}, 10.0);
  EXPECT_EQ(l.fx, 0.0);
  EXPECT_EQ(l.fy, 0.0);
  EXPECT_EQ(l.mz, 0.0);
}

TEST(WindLoad, HeadWindPushesAftOnly) {
  const auto l = wind_load(kVessel, {15.0, 40.0}, 40.0);
  EXPECT_LT(l.fx, 0.0);
  EXPECT_NEAR(l.fy, 0.0, 1e-9 * std::abs(l.fx));
  EXPECT_NEAR(l.mz, 0.0, 1e-9 * std::abs(l.fx) * kVessel.loa);
  // Hand value: -cx * 0.5 rho_air uw^2 A_frontal.
  EXPECT_NEAR(l.fx, -kVessel.wind.cx * 0.5 * kRhoAir * 225.0 * kVessel.wind_area_frontal, 1e-6);
}

TEST(WindLoad, QuadraticInSpeed) {
  for (double alpha : {0.0, 30.0, 95.0, 200.0}) {
    const auto a = wind_load(kVessel, {10.0, alpha}, 0.0);
    const auto b = wind_load(kVessel, {20.0, alpha}, 0.0);
    EXPECT_NEAR(b.fx, 4.0 * a.fx, 1e-9 * std::abs(a.fx) + 1e-9);
    EXPECT_NEAR(b.fy, 4.0 * a.fy, 1e-9 * std::abs(a.fy) + 1e-9);
    EXPECT_NEAR(b.mz, 4.0 * a.mz, 1e-9 * std::abs(a.mz) + 1e-9);
  }
}

TEST(CurrentLoad, BeamCurrentIsPureSwayPlusTurretLever) {
  const Current c{1.0, 90.0};
  const auto l = current_load(kVessel, c, 0.0);
  EXPECT_NEAR(l.fx, 0.0, 1e-9 * std::abs(l.fy));
  // The sin(2 alpha) term vanishes; only the turret lever of fy remains.
  EXPECT_NEAR(l.mz, -kVessel.turret_x * l.fy, 1e-9 * std::abs(l.mz));
  for (double a = 0.0; a < 360.0; a += 1.0)
    EXPECT_LE(std::abs(current_load(kVessel, {1.0, a}, 0.0).fy), std::abs(l.fy) * (1 + 1e-12));
}

TEST(CurrentLoad, CalmAndExtremeCurrent) {
  const auto zero = current_load(kVessel, {0.0, 45.0}, 0.0);
  EXPECT_EQ(zero.fy, 0.0);
  const auto big = current_load(kVessel, {4.65, 45.0}, 0.0);
  EXPECT_TRUE(std::isfinite(big.fx) && std::isfinite(big.fy) && std::isfinite(big.mz));
  EXPECT_GT(std::abs(big.mz), 0.0);
}

TEST(DriftLoad, ScalesWithHeightSquared) {
  const auto a = mean_wave_drift_load(kVessel, {1.0, 9.0, 70.0}, 10.0);
  const auto b = mean_wave_drift_load(kVessel, {2.0, 9.0, 70.0}, 10.0);
  EXPECT_NEAR(b.fx, 4.0 * a.fx, 1e-9 * std::abs(a.fx));
  EXPECT_NEAR(b.fy, 4.0 * a.fy, 1e-9 * std::abs(a.fy));
  EXPECT_NEAR(b.mz, 4.0 * a.mz, 1e-9 * std::abs(a.mz));
  const auto z = mean_wave_drift_load(kVessel, {0.0, 9.0, 70.0}, 10.0);
  EXPECT_EQ(z.fx, 0.0);
}

TEST(DriftLoad, LongPeriodsDriftLess) {
  const auto shortp = mean_wave_drift_load(kVessel, {3.0, 8.0, 20.0}, 0.0);
  const auto longp = mean_wave_drift_load(kVessel, {3.0, 15.0, 20.0}, 0.0);
  EXPECT_GT(std::hypot(shortp.fx, shortp.fy), std::hypot(longp.fx, longp.fy));
  EXPECT_NEAR(kVessel.drift_shape(16.0), 0.25, 1e-12);
  EXPECT_EQ(kVessel.drift_shape(5.0), 1.0);
}

MetoceanState mixed_state() {
  MetoceanState s;
  s.wave1 = {2.6, 8.4, 200.0};
  s.wave2 = {1.8, 13.0, 225.0};
  s.wind = {10.0, 180.0};
  s.current = {0.5, 110.0};
  return s;
}

TEST(YawMoment, CalmIsZero) {
  MetoceanState s;
  s.wave1 = {0.0, 8.0, 0.0};
  s.wave2 = {0.0, 8.0, 0.0};
  EXPECT_EQ(net_yaw_moment(kVessel, s, 33.0), 0.0);
}

TEST(YawMoment, SingleComponentIsInEquilibriumBowOn) {
  MetoceanState s;
  s.wave1 = {0.0, 8.0, 0.0};
  s.wave2 = {0.0, 8.0, 0.0};
  s.wind = {12.0, 225.0};
  EXPECT_NEAR(net_yaw_moment(kVessel, s, 225.0), 0.0, 1e-6);
}

TEST(YawMoment, IsTheSumOfComponents) {
  const auto s = mixed_state();
  for (double phi = 0.0; phi < 360.0; phi += 17.0) {
    const double sum = wind_load(kVessel, s.wind, phi).mz + current_load(kVessel, s.current, phi).mz +
                       mean_wave_drift_load(kVessel, s.wave1, phi).mz +
                       mean_wave_drift_load(kVessel, s.wave2, phi).mz;
    EXPECT_NEAR(net_yaw_moment(kVessel, s, phi), sum, 1e-12 * std::abs(sum) + 1e-6);
  }
}

TEST(YawMoment, PeriodicAndRotationEquivariant) {
  const auto s = mixed_state();
  for (double phi : {0.0, 45.0, 123.4, 300.0}) {
    expect_load_near(total_mean_load(kVessel, s, phi + 360.0), total_mean_load(kVessel, s, phi),
                     1e-12);
    expect_load_near(total_mean_load(kVessel, rotated(s, 40.0), phi + 40.0),
                     total_mean_load(kVessel, s, phi), 1e-12);
  }
}

TEST(YawMoment, BowOnIsStableForEachComponentAlone) {
  // d mz / d alpha < 0 at alpha = 0: turning the bow off the environment
  // produces a moment turning it back.
  const double h = 1e-3;
  auto slope = [&](auto load) { return (load(h) - load(-h)) / (2.0 * h); };
  EXPECT_LT(slope([&](double a) { return wind_load(kVessel, {10.0, a}, 0.0).mz; }), 0.0);
  EXPECT_LT(slope([&](double a) { return current_load(kVessel, {1.0, a}, 0.0).mz; }), 0.0);
  EXPECT_LT(slope([&](double a) { return mean_wave_drift_load(kVessel, {2.0, 9.0, a}, 0.0).mz; }),
            0.0);
}

TEST(BodyAxes, MapToCompassFrame) {
  const Vec2 bow = body_to_global(1.0, 0.0, 0.0);
  EXPECT_NEAR(bow.x, 0.0, 1e-15);
  EXPECT_NEAR(bow.y, 1.0, 1e-15);
  const Vec2 port = body_to_global(0.0, 1.0, 0.0);  // heading north, port is west
  EXPECT_NEAR(port.x, -1.0, 1e-15);
  EXPECT_NEAR(port.y, 0.0, 1e-15);
  const Vec2 east = body_to_global(1.0, 0.0, 90.0);
  EXPECT_NEAR(east.x, 1.0, 1e-15);
}

}  // namespace
}  // namespace moorcast
