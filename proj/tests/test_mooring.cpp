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

#include "moorcast/mooring.hpp"

namespace moorcast {
namespace {

// Inextensible line with a = h/w = 1000 m at h = 1 MN.
LineSpec rigid_line() {
  LineSpec l;
  l.length = 2000.0;
  l.w = 1000.0;
  l.ea = 1e30;
  l.anchor_radius = 1900.0;
  return l;
}

double span_for(const LineSpec& l, double depth, double h) {
  const double a = h / l.w;
  const double xs = a * std::acosh(1.0 + depth / a);
  const double s = a * std::sinh(xs / a);
  return l.length - s + xs + h * l.length / l.ea;
}

TEST(SolveLine, ClosedFormCatenary) {
  const auto l = rigid_line();
  const double xs = 1000.0 * std::acosh(1.4);
  const double s = 1000.0 * std::sqrt(1.4 * 1.4 - 1.0);
  EXPECT_NEAR(xs, 867.01, 0.005);
  EXPECT_NEAR(s, 979.80, 0.005);
  const auto sol = solve_line(l, l.length - s + xs, 400.0);
  EXPECT_NEAR(sol.h, 1.0e6, 1e-4);
  EXPECT_NEAR(sol.s_susp, 979.80, 0.005);
  EXPECT_NEAR(sol.t_fair, 1.4e6, 1e-3);
  EXPECT_TRUE(sol.grounded);
  EXPECT_DOUBLE_EQ(sol.t_anchor, sol.h);
}

TEST(SolveLine, FairleadMinusHorizontalIsWeightTimesDepth) {
  const LineSpec l;
  const auto win = line_span_window(l, 400.0);
  for (int k = 1; k < 20; ++k) {
    const double span = win.min + (win.max - win.min) * k / 20.0;
    const auto sol = solve_line(l, span, 400.0);
    // Exact up to one rounding of the sum.
    EXPECT_NEAR(sol.t_fair - sol.h, l.w * 400.0, 1e-15 * sol.t_fair);
    EXPECT_GE(sol.t_fair, sol.h);
    EXPECT_LE(sol.s_susp, l.length);
  }
}

TEST(SolveLine, SpanResidualBelowTolerance) {
  const LineSpec l;
  const auto win = line_span_window(l, 400.0);
  for (int k = 1; k < 50; ++k) {
    const double span = win.min + (win.max - win.min) * k / 50.0;
    const auto sol = solve_line(l, span, 400.0);
    EXPECT_NEAR(span_for(l, 400.0, sol.h), span, 1e-8);
  }
}

TEST(SolveLine, HorizontalTensionMonotoneInSpan) {
  const LineSpec l;
  const auto win = line_span_window(l, 400.0);
  double prev = 0.0;
  for (int k = 1; k < 100; ++k) {
    const double h = solve_line(l, win.min + (win.max - win.min) * k / 100.0, 400.0).h;
    EXPECT_GT(h, prev);
    prev = h;
  }
}

TEST(SolveLine, SlackAndUpliftErrors) {
  const LineSpec l;
  const auto win = line_span_window(l, 400.0);
  try {
    solve_line(l, win.min - 1.0, 400.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "slack");
  }
  try {
    solve_line(l, win.max + 1.0, 400.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "uplift");
  }
}

TEST(SolveLine, StretchLengthensSpan) {
  LineSpec soft;
  soft.ea = 2e8;
  LineSpec stiff = soft;
  stiff.ea = 1e30;
  const double span = 1340.0;
  EXPECT_LT(solve_line(soft, span, 400.0).h, solve_line(stiff, span, 400.0).h);
}

TEST(SystemRestoring, ZeroAtCentre) {
  const auto sys = default_mooring();
  const auto r = system_restoring(sys, {0.0, 0.0});
  EXPECT_LE(r.force.norm(), 1e-9 * r.lines.front().h);
  ASSERT_EQ(r.lines.size(), 9u);
}

TEST(SystemRestoring, EastOffsetPullsWest) {
  const auto sys = default_mooring();
  const auto f = system_restoring(sys, {10.0, 0.0}).force;
  EXPECT_NEAR(bearing_of(f), 270.0, 0.1);
}

TEST(SystemRestoring, PatternRotationInvariance) {
  const auto sys = default_mooring();
  auto rot = sys;
  for (auto& l : rot.lines) l.psi = wrap360(l.psi + 120.0);
  const Vec2 off{6.0, -3.0};
  const double c = std::cos(deg2rad(120.0));
  const double s = std::sin(deg2rad(120.0));
  // Clockwise rotation in east/north.
  const Vec2 off_r{off.x * c + off.y * s, -off.x * s + off.y * c};
  const double a = system_restoring(sys, off).force.norm();
  const double b = system_restoring(rot, off_r).force.norm();
  EXPECT_NEAR(a, b, 1e-9 * a);
}

TEST(SystemRestoring, ReflectionOddness) {
  // The pattern is symmetric about the 90-270 axis, so reflecting the offset
  // north-south reflects the force.
  const auto sys = default_mooring();
  for (const Vec2 off : {Vec2{3.0, 4.0}, Vec2{-7.0, 2.0}, Vec2{0.0, 9.0}}) {
    const auto a = system_restoring(sys, off).force;
    const auto b = system_restoring(sys, {off.x, -off.y}).force;
    EXPECT_NEAR(a.x, b.x, 1e-9 * a.norm());
    EXPECT_NEAR(a.y, -b.y, 1e-9 * a.norm());
  }
}

TEST(SystemRestoring, MagnitudeGrowsAlongRays) {
  const auto sys = default_mooring();
  for (double dir = 0.0; dir < 360.0; dir += 22.5) {
    double prev = 0.0;
    for (double r = 1.0; r <= 40.0; r += 1.0) {
      const double f = system_restoring(sys, bearing_vector(dir) * r).force.norm();
      EXPECT_GT(f, prev) << dir << " " << r;
      prev = f;
    }
  }
}

TEST(SystemRestoring, LineErrorCarriesIndex) {
  const auto sys = default_mooring();
  try {
    system_restoring(sys, bearing_vector(210.0) * 400.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "uplift");
    EXPECT_NE(std::string(e.what()).find("line "), std::string::npos);
  }
}

TEST(Stiffness, IsotropicAtCentre) {
  const auto k = linearized_stiffness(default_mooring(), {0.0, 0.0});
  EXPECT_NEAR(k[0], k[3], 0.01 * k[0]);
  EXPECT_LE(std::abs(k[1]), 0.01 * k[0]);
  EXPECT_LE(std::abs(k[2]), 0.01 * k[0]);
  EXPECT_GT(k[0], 0.0);
}

TEST(Stiffness, SymmetricNearCentre) {
  const auto sys = default_mooring();
  for (const Vec2 off : {Vec2{3.0, 4.0}, Vec2{-2.0, 1.0}, Vec2{0.0, -5.0}}) {
    const auto k = linearized_stiffness(sys, off);
    EXPECT_NEAR(k[1], k[2], 0.01 * std::max(k[0], k[3]));
  }
}

TEST(Stiffness, HardensWithOffset) {
  const auto sys = default_mooring();
  double prev = 0.0;
  for (double r = 0.0; r <= 40.0; r += 5.0) {
    const auto k = linearized_stiffness(sys, bearing_vector(90.0) * r);
    EXPECT_GT(k[0], prev);
    prev = k[0];
  }
}

TEST(Stiffness, StepConvergence) {
  const auto sys = default_mooring();
  const Vec2 off{8.0, -6.0};
  const auto a = linearized_stiffness(sys, off, 0.01);
  const auto b = linearized_stiffness(sys, off, 0.005);
  const double scale = std::max(a[0], a[3]);
  for (int i = 0; i < 4; ++i) EXPECT_LE(std::abs(a[i] - b[i]), 0.005 * scale);
}

TEST(ExtremeTensions, GoverningLineOpposesOffset) {
  const auto sys = default_mooring();
  // Toward cluster 1 (lines 0..2): its lines slacken, the others stretch.
  const auto e = extreme_line_tensions(sys, bearing_vector(30.0) * 25.0);
  EXPECT_GE(e.fair_line, 3u);
  const auto e2 = extreme_line_tensions(sys, bearing_vector(210.0) * 25.0);
  EXPECT_LT(e2.fair_line, 3u);
}

TEST(ExtremeTensions, DafScaling) {
  auto sys = default_mooring();
  const Vec2 off{12.0, 5.0};
  sys.daf_fairlead = sys.daf_anchor = 1.0;
  const auto raw = system_restoring(sys, off);
  const auto e1 = extreme_line_tensions(sys, off);
  double mf = 0.0, ma = 0.0;
  for (const auto& l : raw.lines) {
    mf = std::max(mf, l.t_fair);
    ma = std::max(ma, l.t_anchor);
  }
  EXPECT_EQ(e1.t_fair, mf);
  EXPECT_EQ(e1.t_anchor, ma);
  sys.daf_fairlead = sys.daf_anchor = 1.2;
  const auto e2 = extreme_line_tensions(sys, off);
  EXPECT_DOUBLE_EQ(e2.t_fair, 1.2 * e1.t_fair);
  EXPECT_DOUBLE_EQ(e2.t_anchor, 1.2 * e1.t_anchor);
  EXPECT_EQ(e2.fair_line, e1.fair_line);
}

TEST(LineTable, MatchesSolver) {
  const LineSpec l;
  const LineTable t(l, 400.0);
  for (double span = t.min_span() + 0.013; span < t.max_span(); span += 3.7) {
    const double h = solve_line(l, span, 400.0).h;
    EXPECT_NEAR(t.h(span), h, 1e-6 * h + 1.0) << span;
  }
}

}  // namespace
}  // namespace moorcast
