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

// Passive weathervaning equilibrium.
//
// The yaw moment is treated as a conservative field over heading. With
// M(phi) the moment acting to increase the compass heading (the negative of
// the counterclockwise body moment), the potential is
//
//   V(phi) = -integral_0^phi M(phi') dphi'      (phi' in radians)
//
// and the equilibrium heading is its global minimiser on the circle.
// Equilibria are the zeros of M; a zero is stable when dM/dphi < 0.

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "moorcast/common.hpp"
#include "moorcast/metocean.hpp"
#include "moorcast/vessel.hpp"

namespace moorcast {

struct Equilibrium {
  double phi = 0.0;  // deg
  bool stable = false;
  double v = 0.0;  // J
};

struct HeadingSolution {
  double phi_eq = 0.0;
  double v_min = 0.0;
  std::vector<Equilibrium> equilibria;  // sorted by phi
  bool degenerate = false;
};

struct HeadingOptions {
  double scan_step_deg = 0.1;
  double refine_tol_deg = 1e-5;
  double root_tol_deg = 1e-7;
};

// Moment tending to increase the compass heading, N m.
inline double heading_moment(const VesselModel& v, const MetoceanState& s,
                             double phi) {
  return -net_yaw_moment(v, s, phi);
}

// Trapezoidal V on a caller grid covering [0, 360] with steps <= 1 deg.
inline std::vector<double> potential_energy(const VesselModel& v,
                                            const MetoceanState& s,
                                            std::span<const double> phi_grid) {
  if (phi_grid.size() < 2 || std::abs(phi_grid.front()) > 1e-9 ||
      std::abs(phi_grid.back() - 360.0) > 1e-9)
    throw Error("bad_grid", "potential_energy: grid must cover [0, 360]");
  for (std::size_t i = 1; i < phi_grid.size(); ++i) {
    const double step = phi_grid[i] - phi_grid[i - 1];
    if (!(step > 0.0) || step > 1.0 + 1e-12)
      throw Error("bad_grid",
                  "potential_energy: grid must ascend in steps <= 1 deg");
  }
  std::vector<double> out(phi_grid.size(), 0.0);
  double m_prev = heading_moment(v, s, phi_grid[0]);
  for (std::size_t i = 1; i < phi_grid.size(); ++i) {
    const double m = heading_moment(v, s, phi_grid[i]);
    out[i] = out[i - 1] -
             0.5 * (m_prev + m) * deg2rad(phi_grid[i] - phi_grid[i - 1]);
    m_prev = m;
  }
  return out;
}

namespace detail {

// -integral_a^b M dphi by 5-point Gauss-Legendre (a, b in degrees).
inline double energy_increment(const VesselModel& v, const MetoceanState& s,
                               double a, double b) {
  static constexpr std::array<double, 5> x{
      0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
      0.9061798459386640};
  static constexpr std::array<double, 5> w{
      0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
      0.2369268850561891, 0.2369268850561891};
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k)
    sum += w[k] * heading_moment(v, s, mid + half * x[k]);
  return -sum * deg2rad(half);
}

// Scan of M and V on a uniform grid over [0, 360], V accumulated with
// Gauss-Legendre so basins can be compared accurately.
struct HeadingScan {
  double step = 0.0;
  std::vector<double> phi;
  std::vector<double> m;
  std::vector<double> v;
};

inline HeadingScan scan_heading(const VesselModel& vm, const MetoceanState& s,
                                double step_deg) {
  HeadingScan sc;
  const auto n = static_cast<std::size_t>(std::llround(360.0 / step_deg));
  sc.step = 360.0 / static_cast<double>(n);
  sc.phi.resize(n + 1);
  sc.m.resize(n + 1);
  sc.v.resize(n + 1);
  // Simpson per interval with one extra midpoint evaluation.
  const double h = deg2rad(sc.step);
  for (std::size_t i = 0; i <= n; ++i) {
    sc.phi[i] = sc.step * static_cast<double>(i);
    sc.m[i] = heading_moment(vm, s, sc.phi[i]);
    if (i == 0) {
      sc.v[i] = 0.0;
    } else {
      const double mid = heading_moment(vm, s, sc.phi[i] - 0.5 * sc.step);
      sc.v[i] = sc.v[i - 1] - h * (sc.m[i - 1] + 4.0 * mid + sc.m[i]) / 6.0;
    }
  }
  return sc;
}

inline double bisect_root(const VesselModel& vm, const MetoceanState& s,
                          double a, double b, double ma, double tol) {
  while (b - a > tol) {
    const double c = 0.5 * (a + b);
    const double mc = heading_moment(vm, s, c);
    if (mc == 0.0) return c;
    if ((mc > 0.0) == (ma > 0.0)) {
      a = c;
      ma = mc;
    } else {
      b = c;
    }
  }
  return 0.5 * (a + b);
}

inline bool is_flat(const HeadingScan& sc) {
  for (double m : sc.m)
    if (std::abs(m) > 1e-6) return false;
  return true;
}

}  // namespace detail

namespace detail {

inline std::vector<Equilibrium> equilibria_from_scan(const VesselModel& vm,
                                                     const MetoceanState& s,
                                                     const HeadingScan& sc,
                                                     const HeadingOptions& opt) {
  std::vector<Equilibrium> out;
  if (detail::is_flat(sc)) return out;
  const std::size_t n = sc.phi.size() - 1;
  for (std::size_t i = 0; i < n; ++i) {
    const double ma = sc.m[i];
    const double mb = sc.m[i + 1];
    double root;
    bool stable;
    if (ma == 0.0) {
      // Exact zero at a node; classify from neighbours.
      const double before = sc.m[i == 0 ? n - 1 : i - 1];
      if ((before > 0.0) == (mb > 0.0) || mb == 0.0) continue;
      root = sc.phi[i];
      stable = before > 0.0;
    } else if (mb != 0.0 && (ma > 0.0) != (mb > 0.0)) {
      root = detail::bisect_root(vm, s, sc.phi[i], sc.phi[i + 1], ma,
                                 opt.root_tol_deg);
      stable = ma > 0.0;
    } else {
      continue;
    }
    const double v = sc.v[i] + detail::energy_increment(vm, s, sc.phi[i], root);
    out.push_back({wrap360(root), stable, v});
  }
  std::sort(out.begin(), out.end(),
            [](const Equilibrium& a, const Equilibrium& b) { return a.phi < b.phi; });
  return out;
}

}  // namespace detail

// Zeros of M on the scan grid refined by bisection; stable iff M changes
// sign from + to - with increasing heading.
inline std::vector<Equilibrium> find_equilibria(const VesselModel& vm,
                                                const MetoceanState& s,
                                                const HeadingOptions& opt = {}) {
  require_valid(s);
  return detail::equilibria_from_scan(
      vm, s, detail::scan_heading(vm, s, opt.scan_step_deg), opt);
}

// Global minimiser of V: every local minimum of the scanned V is refined by
// golden-section search and the lowest wins; near-ties (1e-9 J or 1e-12 of
// the V range) go to the smallest heading. A flat V (no environment) gives
// phi_eq = 0 with `degenerate` set.
inline HeadingSolution solve_equilibrium_heading(const VesselModel& vm,
                                                 const MetoceanState& s,
                                                 const HeadingOptions& opt = {}) {
  require_valid(s);
  const auto sc = detail::scan_heading(vm, s, opt.scan_step_deg);
  HeadingSolution sol;
  if (detail::is_flat(sc)) {
    sol.degenerate = true;
    sol.equilibria.push_back({0.0, true, 0.0});
    return sol;
  }
  const std::size_t n = sc.phi.size() - 1;  // node n duplicates node 0
  double vrange = 0.0;
  for (double x : sc.v) vrange = std::max(vrange, std::abs(x));
  const double tie = std::max(1e-9, 1e-12 * vrange);

  auto energy_at = [&](std::size_t anchor, double phi) {
    return sc.v[anchor] + detail::energy_increment(vm, s, sc.phi[anchor], phi);
  };

  bool have = false;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t prev = i == 0 ? n - 1 : i - 1;
    const double vi = sc.v[i];
    const double vp = sc.v[prev];
    const double vn = sc.v[i + 1];
    if (!(vi <= vp && vi < vn)) continue;
    // Golden-section on [phi_i - step, phi_i + step]; V measured from node i.
    constexpr double inv_phi = 0.6180339887498949;
    double a = sc.phi[i] - sc.step;
    double b = sc.phi[i] + sc.step;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = energy_at(i, c);
    double fd = energy_at(i, d);
    while (b - a > opt.refine_tol_deg) {
      if (fc <= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - inv_phi * (b - a);
        fc = energy_at(i, c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + inv_phi * (b - a);
        fd = energy_at(i, d);
      }
    }
    const double phi = wrap360(0.5 * (a + b));
    const double vmin = energy_at(i, 0.5 * (a + b));
    if (!have || vmin < sol.v_min - tie ||
        (std::abs(vmin - sol.v_min) <= tie && phi < sol.phi_eq)) {
      sol.phi_eq = phi;
      sol.v_min = vmin;
      have = true;
    }
  }
  sol.equilibria = detail::equilibria_from_scan(vm, s, sc, opt);
  return sol;
}

}  // namespace moorcast
