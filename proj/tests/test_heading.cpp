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
#include <vector>

#include "moorcast/heading.hpp"

namespace moorcast {
namespace {

const VesselModel kVessel;

MetoceanState calm() {
  MetoceanState s;
  s.wave1 = {0.0, 8.0, 0.0};
  s.wave2 = {0.0, 8.0, 0.0};
  return s;
}

double circ(double a, double b) { return std::abs(wrap180(a - b)); }

// Argmin of V = -int M dphi on a 0.01 deg grid by the trapezoid rule.
double brute_force_argmin(const MetoceanState& s) {
  const int n = 36000;
  double v = 0.0, best = 0.0, best_phi = 0.0;
  double m_prev = heading_moment(kVessel, s, 0.0);
  for (int i = 1; i < n; ++i) {
    const double phi = 0.01 * i;
    const double m = heading_moment(kVessel, s, phi);
    v -= 0.5 * (m + m_prev) * deg2rad(0.01);
    m_prev = m;
    if (v < best) {
      best = v;
      best_phi = phi;
    }
  }
  return best_phi;
}

TEST(PotentialEnergy, CalmIsFlat) {
  std::vector<double> g;
  for (int i = 0; i <= 360; ++i) g.push_back(i);
  for (double v : potential_energy(kVessel, calm(), g)) EXPECT_EQ(v, 0.0);
}

TEST(PotentialEnergy, ClosesOverTheCircle) {
  MetoceanState s = calm();
  s.wind = {14.0, 30.0};
  s.current = {0.8, 150.0};
  s.wave1 = {3.0, 9.0, 260.0};
  std::vector<double> g;
  for (int i = 0; i <= 720; ++i) g.push_back(0.5 * i);
  const auto v = potential_energy(kVessel, s, g);
  double vmax = 0.0;
  for (double x : v) vmax = std::max(vmax, std::abs(x));
  EXPECT_EQ(v.front(), 0.0);
  EXPECT_LE(std::abs(v.back() - v.front()), 1e-6 * vmax);
}

TEST(PotentialEnergy, SingleWindMinimumAtItsDirection) {
  MetoceanState s = calm();
  s.wind = {10.0, 225.0};
  std::vector<double> g;
  for (int i = 0; i <= 360; ++i) g.push_back(i);
  const auto v = potential_energy(kVessel, s, g);
  const auto k = std::min_element(v.begin(), v.end()) - v.begin();
  EXPECT_NEAR(g[static_cast<std::size_t>(k)], 225.0, 1.0);
}

TEST(PotentialEnergy, SlopeMatchesMomentAndConverges) {
  MetoceanState s = calm();
  s.wind = {14.0, 30.0};
  s.current = {0.8, 150.0};
  auto max_err = [&](double step) {
    std::vector<double> g;
    const int n = static_cast<int>(std::lround(360.0 / step));
    for (int i = 0; i <= n; ++i) g.push_back(step * i);
    const auto v = potential_energy(kVessel, s, g);
    double e = 0.0;
    for (int i = 1; i <= n; ++i) {
      const double mid = 0.5 * (g[i] + g[i - 1]);
      const double dv = (v[i] - v[i - 1]) / deg2rad(step);
      e = std::max(e, std::abs(dv + heading_moment(kVessel, s, mid)));
    }
    return e;
  };
  const double e1 = max_err(1.0), e2 = max_err(0.5);
  EXPECT_LT(e2, 0.3 * e1);  // second order: ratio about 1/4
}

TEST(PotentialEnergy, RejectsPartialGrid) {
  EXPECT_THROW(potential_energy(kVessel, calm(), std::vector<double>{0.0, 1.0, 2.0}), Error);
}

TEST(Heading, SingleWind) {
  MetoceanState s = calm();
  s.wind = {10.0, 225.0};
  const auto h = solve_equilibrium_heading(kVessel, s);
  EXPECT_NEAR(h.phi_eq, 225.0, 0.05);
  EXPECT_FALSE(h.degenerate);
}

TEST(Heading, CalmFallsBackToNorth) {
  const auto h = solve_equilibrium_heading(kVessel, calm());
  EXPECT_TRUE(h.degenerate);
  EXPECT_EQ(h.phi_eq, 0.0);
}

TEST(Heading, CrossedWindAndCurrentMatchBruteForce) {
  MetoceanState s = calm();
  s.wind = {10.0, 0.0};
  // Current speed chosen so its turret moment amplitude equals the wind's.
  const double wind_amp = kVessel.wind.cy * 0.5 * kRhoAir * 100.0 * kVessel.wind_area_lateral;
  const double uc = std::sqrt(wind_amp / (kVessel.current.cy * 0.5 * kRhoWater *
                                          kVessel.current_area_lateral));
  s.current = {uc, 90.0};
  const auto h = solve_equilibrium_heading(kVessel, s);
  EXPECT_LE(circ(h.phi_eq, brute_force_argmin(s)), 0.05);
}

TEST(Heading, WindFromNinetyHasOneStableAndOneUnstable) {
  MetoceanState s = calm();
  s.wind = {10.0, 90.0};
  const auto eq = find_equilibria(kVessel, s);
  ASSERT_EQ(eq.size(), 2u);
  EXPECT_NEAR(eq[0].phi, 90.0, 0.01);
  EXPECT_TRUE(eq[0].stable);
  EXPECT_NEAR(eq[1].phi, 270.0, 0.01);
  EXPECT_FALSE(eq[1].stable);
}

TEST(Heading, OpposedEqualLoadsGiveTiedMinima) {
  MetoceanState s = calm();
  // Same dynamic-pressure-times-coefficient for wind from 0 and 180 would
  // need identical harmonics; two identical wave systems do it exactly.
  s.wave1 = {2.0, 9.0, 0.0};
  s.wave2 = {2.0, 9.0, 180.0};
  const auto eq = find_equilibria(kVessel, s);
  std::vector<Equilibrium> stable;
  for (const auto& e : eq)
    if (e.stable) stable.push_back(e);
  ASSERT_GE(stable.size(), 2u);
  double vmax = 0.0;
  for (const auto& e : eq) vmax = std::max(vmax, std::abs(e.v));
  EXPECT_NEAR(stable[0].v, stable[1].v, 1e-6 * vmax);
  // Tie goes to the smallest heading.
  EXPECT_NEAR(solve_equilibrium_heading(kVessel, s).phi_eq, stable[0].phi, 0.05);
}

class RandomStates : public ::testing::Test {
 protected:
  static std::vector<MetoceanState> states() { return sample_metocean(200, 2024, {}); }
};

TEST_F(RandomStates, GlobalMinimumMatchesBruteForce) {
  for (const auto& s : states()) {
    const auto h = solve_equilibrium_heading(kVessel, s);
    EXPECT_LE(circ(h.phi_eq, brute_force_argmin(s)), 0.05) << s.id;
  }
}

TEST_F(RandomStates, RotationEquivariant) {
  CounterRng rng(5);
  for (const auto& s : states()) {
    const double d = rng.uniform(0.0, 360.0);
    const auto a = solve_equilibrium_heading(kVessel, s);
    const auto b = solve_equilibrium_heading(kVessel, rotated(s, d));
    EXPECT_LE(circ(b.phi_eq, a.phi_eq + d), 0.05) << s.id << " delta " << d;
  }
}

TEST_F(RandomStates, StabilityAgreesWithMomentSlope) {
  for (const auto& s : states()) {
    const auto h = solve_equilibrium_heading(kVessel, s);
    bool found = false;
    for (const auto& e : h.equilibria) {
      const double dm = heading_moment(kVessel, s, e.phi + 1e-3) -
                        heading_moment(kVessel, s, e.phi - 1e-3);
      EXPECT_EQ(e.stable, dm < 0.0) << s.id << " phi " << e.phi;
      if (e.stable && circ(e.phi, h.phi_eq) < 0.05) found = true;
    }
    EXPECT_TRUE(found) << s.id;
  }
}

TEST_F(RandomStates, EquilibriaCountMatchesSignChanges) {
  for (const auto& s : states()) {
    int changes = 0;
    double prev = heading_moment(kVessel, s, 0.0);
    for (int i = 1; i <= 3600; ++i) {
      const double m = heading_moment(kVessel, s, 0.1 * i);
      if ((m > 0.0) != (prev > 0.0)) ++changes;
      prev = m;
    }
    EXPECT_EQ(static_cast<int>(find_equilibria(kVessel, s).size()), changes) << s.id;
  }
}

TEST(Heading, Deterministic) {
  const auto s = sample_metocean(1, 99, {}).front();
  EXPECT_EQ(solve_equilibrium_heading(kVessel, s).phi_eq,
            solve_equilibrium_heading(kVessel, s).phi_eq);
}

}  // namespace
}  // namespace moorcast
