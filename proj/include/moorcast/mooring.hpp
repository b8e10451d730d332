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

// Elastic catenary statics with seabed touchdown, and the turret mooring
// pattern built from them.
//
// For horizontal tension h and submerged weight w per length, a = h / w.
// The suspended part spans horizontal distance xs and arc length s with
//
//   depth = a (cosh(xs / a) - 1),   s = a sinh(xs / a) = sqrt(d^2 + 2 a d)
//
// and the anchor-to-fairlead span is (length - s) + xs + h length / EA, the
// last term being the stretch of a taut segment at tension h. A grounded
// line has t_anchor = h and t_fair = h + w depth.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "moorcast/common.hpp"

namespace moorcast {

struct LineSpec {
  double length = 1500.0;      // m
  double w = 2000.0;           // submerged weight, N/m
  double ea = 1.5e9;           // N
  double anchor_radius = 1349.0;  // m from the mooring centre
  double psi = 0.0;            // anchor azimuth, compass deg
  double capacity_mbl = 8.0e6;  // N
};

struct MooringSystem {
  double depth = 400.0;
  std::vector<LineSpec> lines;
  double turret_radius = 0.0;  // folded into anchor_radius
  double daf_fairlead = 1.0;
  double daf_anchor = 1.0;
};

struct LineSolution {
  double h = 0.0;
  double t_fair = 0.0;
  double t_anchor = 0.0;
  double s_susp = 0.0;
  bool grounded = true;
};

// Three clusters of `per_cluster` lines; cluster centres `cluster_azimuths`,
// lines within a cluster `separation` degrees apart.
inline MooringSystem make_spread_mooring(const LineSpec& proto, double depth,
                                         std::array<double, 3> cluster_azimuths,
                                         double separation, int per_cluster = 3) {
  MooringSystem sys;
  sys.depth = depth;
  for (double c : cluster_azimuths) {
    for (int k = 0; k < per_cluster; ++k) {
      LineSpec l = proto;
      l.psi = wrap360(c + separation * (k - 0.5 * (per_cluster - 1)));
      sys.lines.push_back(l);
    }
  }
  return sys;
}

inline MooringSystem default_mooring() {
  MooringSystem sys = make_spread_mooring(LineSpec{}, 400.0, {30.0, 150.0, 270.0}, 5.0);
  sys.daf_fairlead = 1.15;
  sys.daf_anchor = 1.05;
  return sys;
}

namespace detail {

// Suspended arc length and horizontal extent for horizontal tension h.
struct CatenaryShape {
  double s = 0.0;
  double xs = 0.0;
};

inline CatenaryShape catenary_shape(double h, double w, double depth) {
  const double a = h / w;
  return {std::sqrt(depth * depth + 2.0 * a * depth),
          a * std::acosh(1.0 + depth / a)};
}

inline double span_of_h(const LineSpec& l, double depth, double h) {
  const auto c = catenary_shape(h, l.w, depth);
  return l.length - c.s + c.xs + h * l.length / l.ea;
}

inline double dspan_dh(const LineSpec& l, double depth, double h) {
  const auto c = catenary_shape(h, l.w, depth);
  return (std::acosh(1.0 + depth * l.w / h) - 2.0 * depth / c.s) / l.w +
         l.length / l.ea;
}

// Horizontal tension at which the whole line is lifted off the seabed.
inline double uplift_tension(const LineSpec& l, double depth) {
  return l.w * (l.length * l.length - depth * depth) / (2.0 * depth);
}

}  // namespace detail

// Horizontal span range [slack, uplift] over which solve_line succeeds.
struct SpanWindow {
  double min = 0.0;
  double max = 0.0;
};

inline SpanWindow line_span_window(const LineSpec& l, double depth) {
  return {l.length - depth, detail::span_of_h(l, depth, detail::uplift_tension(l, depth))};
}

// Solves the touchdown catenary for a given horizontal span.
inline LineSolution solve_line(const LineSpec& l, double span, double depth) {
  if (!(l.length > depth) || !(l.w > 0.0) || !(l.ea > 0.0) || !(depth > 0.0))
    throw Error("bad_line", "solve_line: invalid line properties");
  if (!std::isfinite(span)) throw Error("non_finite", "solve_line: span not finite");
  const auto win = line_span_window(l, depth);
  if (span <= win.min)
    throw Error("slack", "solve_line: span " + std::to_string(span) +
                             " m leaves the line slack");
  if (span > win.max)
    throw Error("uplift", "solve_line: span " + std::to_string(span) +
                              " m lifts the anchor");
  double lo = 0.0;
  double hi = detail::uplift_tension(l, depth);
  // Start from the inextensible small-sag guess, then safeguarded Newton.
  double h = std::clamp(0.5 * hi, 1e-12 * hi, hi);
  for (int it = 0; it < 200; ++it) {
    const double f = detail::span_of_h(l, depth, h) - span;
    if (f > 0.0)
      hi = h;
    else
      lo = h;
    const double step = f / detail::dspan_dh(l, depth, h);
    double next = h - step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - h) <= 1e-12 * h) {
      h = next;
      break;
    }
    h = next;
  }
  const auto c = detail::catenary_shape(h, l.w, depth);
  LineSolution sol;
  sol.h = h;
  sol.s_susp = c.s;
  sol.grounded = c.s < l.length;
  sol.t_anchor = h;
  sol.t_fair = h + l.w * depth;
  return sol;
}

inline Vec2 anchor_position(const LineSpec& l) {
  return bearing_vector(l.psi) * l.anchor_radius;
}

struct RestoringResult {
  Vec2 force;  // on the vessel, global axes, N
  std::vector<LineSolution> lines;
};

// Net horizontal mooring force on the turret displaced to `offset`.
inline RestoringResult system_restoring(const MooringSystem& sys,
                                        const Vec2& offset) {
  RestoringResult r;
  r.lines.reserve(sys.lines.size());
  for (std::size_t i = 0; i < sys.lines.size(); ++i) {
    const Vec2 d = anchor_position(sys.lines[i]) - offset;
    const double span = d.norm();
    try {
      r.lines.push_back(solve_line(sys.lines[i], span, sys.depth));
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(i) + ": " + e.what(),
                  {{"line", e.what(), static_cast<double>(i), 0.0}});
    }
    r.force += d * (r.lines.back().h / span);
  }
  return r;
}

// K = -dF/dx by central differences, row-major {kxx, kxy, kyx, kyy}, N/m.
inline std::array<double, 4> linearized_stiffness(const MooringSystem& sys,
                                                  const Vec2& offset,
                                                  double step = 0.01) {
  const Vec2 fxp = system_restoring(sys, offset + Vec2{step, 0.0}).force;
  const Vec2 fxm = system_restoring(sys, offset - Vec2{step, 0.0}).force;
  const Vec2 fyp = system_restoring(sys, offset + Vec2{0.0, step}).force;
  const Vec2 fym = system_restoring(sys, offset - Vec2{0.0, step}).force;
  const double inv = 1.0 / (2.0 * step);
  return {-(fxp.x - fxm.x) * inv, -(fyp.x - fym.x) * inv,
          -(fxp.y - fxm.y) * inv, -(fyp.y - fym.y) * inv};
}

struct ExtremeTensions {
  double t_fair = 0.0;
  std::size_t fair_line = 0;
  double t_anchor = 0.0;
  std::size_t anchor_line = 0;
};

// Largest DAF-scaled fairlead and anchor tensions over all lines. Ties go to
// the lowest line index.
inline ExtremeTensions extreme_line_tensions(const MooringSystem& sys,
                                             const Vec2& offset) {
  const auto r = system_restoring(sys, offset);
  ExtremeTensions e;
  for (std::size_t i = 0; i < r.lines.size(); ++i) {
    if (r.lines[i].t_fair > e.t_fair) {
      e.t_fair = r.lines[i].t_fair;
      e.fair_line = i;
    }
    if (r.lines[i].t_anchor > e.t_anchor) {
      e.t_anchor = r.lines[i].t_anchor;
      e.anchor_line = i;
    }
  }
  e.t_fair *= sys.daf_fairlead;
  e.t_anchor *= sys.daf_anchor;
  return e;
}

// Per-line lookup of h(span) by cubic Hermite interpolation on a uniform
// span grid, using the exact slope dh/dspan. Used where the restoring force
// is evaluated millions of times (time-domain simulation).
class LineTable {
 public:
  LineTable() = default;
  LineTable(const LineSpec& l, double depth, double spacing = 0.05)
      : w_depth_(l.w * depth) {
    const auto win = line_span_window(l, depth);
    // Stay clear of the logarithmic slack singularity.
    lo_ = win.min + std::min(1.0, 0.01 * (win.max - win.min));
    const auto n = static_cast<std::size_t>(std::ceil((win.max - lo_) / spacing));
    dx_ = (win.max - lo_) / static_cast<double>(n);
    hi_ = win.max;
    h_.resize(n + 1);
    dh_.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      const double x = std::min(lo_ + dx_ * static_cast<double>(i), hi_);
      h_[i] = i == n ? detail::uplift_tension(l, depth) : solve_line(l, x, depth).h;
      dh_[i] = 1.0 / detail::dspan_dh(l, depth, h_[i]);
    }
  }

  bool contains(double span) const { return span >= lo_ && span <= hi_; }
  double min_span() const { return lo_; }
  double max_span() const { return hi_; }
  double w_depth() const { return w_depth_; }

  double h(double span) const {
    const double u = (span - lo_) / dx_;
    auto i = static_cast<std::size_t>(u);
    if (i >= h_.size() - 1) i = h_.size() - 2;
    const double t = u - static_cast<double>(i);
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * h_[i] + (t3 - 2 * t2 + t) * dx_ * dh_[i] +
           (-2 * t3 + 3 * t2) * h_[i + 1] + (t3 - t2) * dx_ * dh_[i + 1];
  }

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
  double dx_ = 1.0;
  double w_depth_ = 0.0;
  std::vector<double> h_;
  std::vector<double> dh_;
};

}  // namespace moorcast
