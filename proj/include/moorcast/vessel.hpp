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

// Planar environmental loads on a turret-moored hull.
//
// Body axes: x toward the bow, y to port, yaw moment positive
// counterclockwise seen from above, taken about the turret. The relative
// incidence of an environment "from" direction theta on a vessel heading phi
// is alpha = (theta - phi) mod 360, alpha = 0 on the bow, alpha = 90 from
// starboard. Every component uses the same low-order harmonic form
//
//   fx = -cx q Ax cos(alpha)
//   fy =  cy q Ay sin(alpha)
//   mz = -cm q Ay L sin(2 alpha) - x_turret fy
//
// where q is the component's dynamic pressure scale. The second term of mz
// is the lever of the sway force about a turret placed x_turret forward of
// the load centre; it makes bow-on the single stable heading for any one
// component acting alone, provided x_turret cy > 2 cm L.

#include <cmath>

#include "moorcast/common.hpp"
#include "moorcast/metocean.hpp"

namespace moorcast {

struct PlanarLoad {
  double fx = 0.0;
  double fy = 0.0;
  double mz = 0.0;

  PlanarLoad operator+(const PlanarLoad& o) const {
    return {fx + o.fx, fy + o.fy, mz + o.mz};
  }
  PlanarLoad& operator+=(const PlanarLoad& o) {
    fx += o.fx;
    fy += o.fy;
    mz += o.mz;
    return *this;
  }
};

struct HarmonicCoefficients {
  double cx = 0.0;
  double cy = 0.0;
  double cm = 0.0;
};

struct VesselModel {
  double loa = 335.0;
  double beam = 58.0;
  double draft = 22.0;
  double turret_x = 100.0;  // turret forward of the load centre, m

  double wind_area_frontal = 1200.0;
  double wind_area_lateral = 5500.0;
  double current_area_frontal = 58.0 * 22.0;
  double current_area_lateral = 335.0 * 22.0;

  HarmonicCoefficients wind{2.0, 2.0, 0.18};
  HarmonicCoefficients current{0.42, 1.4, 0.115};
  // Mean drift: fx amplitude cx rho g hs^2 beam D(tp), fy amplitude
  // cy rho g hs^2 loa D(tp), cm scales rho g hs^2 loa^2 D(tp).
  HarmonicCoefficients drift{0.115, 0.07, 0.007};

  // D(tp) = 1 for tp <= drift_tp_ref, (drift_tp_ref / tp)^drift_decay above.
  double drift_tp_ref = 8.0;
  double drift_decay = 2.0;

  double drift_shape(double tp) const {
    if (tp <= drift_tp_ref) return 1.0;
    return std::pow(drift_tp_ref / tp, drift_decay);
  }
};

namespace detail {

inline PlanarLoad harmonic_load(double ax_scale, double ay_scale,
                                double mz_scale, double turret_x,
                                const HarmonicCoefficients& c, double theta,
                                double phi) {
  const double a = deg2rad(theta - phi);
  const double ca = std::cos(a);
  const double sa = std::sin(a);
  PlanarLoad l;
  l.fx = -c.cx * ax_scale * ca;
  l.fy = c.cy * ay_scale * sa;
  l.mz = -c.cm * mz_scale * 2.0 * sa * ca - turret_x * l.fy;
  return l;
}

}  // namespace detail

inline PlanarLoad wind_load(const VesselModel& v, const Wind& w, double phi) {
  const double q = 0.5 * kRhoAir * w.uw * w.uw;
  return detail::harmonic_load(q * v.wind_area_frontal,
                               q * v.wind_area_lateral,
                               q * v.wind_area_lateral * v.loa, v.turret_x,
                               v.wind, w.theta_w, phi);
}

inline PlanarLoad current_load(const VesselModel& v, const Current& c,
                               double phi) {
  const double q = 0.5 * kRhoWater * c.uc * c.uc;
  return detail::harmonic_load(q * v.current_area_frontal,
                               q * v.current_area_lateral,
                               q * v.current_area_lateral * v.loa, v.turret_x,
                               v.current, c.theta_c, phi);
}

inline PlanarLoad mean_wave_drift_load(const VesselModel& v,
                                       const WaveSystem& w, double phi) {
  const double q = kRhoWater * kGravity * w.hs * w.hs * v.drift_shape(w.tp);
  return detail::harmonic_load(q * v.beam, q * v.loa, q * v.loa * v.loa,
                               v.turret_x, v.drift, w.theta_p, phi);
}

// Total mean environmental load in body axes.
inline PlanarLoad total_mean_load(const VesselModel& v, const MetoceanState& s,
                                  double phi) {
  return wind_load(v, s.wind, phi) + current_load(v, s.current, phi) +
         mean_wave_drift_load(v, s.wave1, phi) +
         mean_wave_drift_load(v, s.wave2, phi);
}

inline double net_yaw_moment(const VesselModel& v, const MetoceanState& s,
                             double phi) {
  return total_mean_load(v, s, phi).mz;
}

// Body-axis force to global (east, north) for compass heading phi.
inline Vec2 body_to_global(double fx, double fy, double phi) {
  const Vec2 bow = bearing_vector(phi);
  const Vec2 port = bearing_vector(phi - 90.0);
  return bow * fx + port * fy;
}

}  // namespace moorcast
