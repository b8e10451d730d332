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

// Frequency-domain screening model.
//
// The turret offset is split into a static mean, a low-frequency (LF)
// resonant part driven by slow wave drift, and a wave-frequency (WF) part.
// Slow drift follows the squared-envelope form: the drift force of a wave
// system is its mean drift load scaled by |E(t)|^2 / (2 m0), where E is the
// complex envelope of the sea. For a Gaussian sea the fluctuating part has
// the one-sided spectrum
//
//   S_F(mu) = 2 |F_mean|^2 / m0^2 * integral S(w) S(w + mu) dw.
//
// The LF response per horizontal axis uses the white-noise approximation
// sigma^2 = pi S_F(w_n) / (2 b_eff k), with quadratic damping linearised as
// b_eff = b + sqrt(8/pi) sigma_v bq.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "moorcast/common.hpp"
#include "moorcast/metocean.hpp"
#include "moorcast/mooring.hpp"
#include "moorcast/vessel.hpp"

namespace moorcast {

enum class ResponseSource { kFD, kQD };

inline const char* to_string(ResponseSource s) {
  return s == ResponseSource::kFD ? "FD" : "QD";
}

struct ResponseStatistics {
  double phi_eq = 0.0;
  Vec2 mean_offset;
  double mpm_offset = 0.0;   // m
  double offset_dir = 0.0;   // compass bearing of the displacement, deg
  double mpm_t_fair = 0.0;   // N
  double mpm_t_anchor = 0.0; // N
  double sigma_lf = 0.0;
  double sigma_wf = 0.0;
  ResponseSource source = ResponseSource::kFD;
  bool daf_applied = true;

  bool operator==(const ResponseStatistics&) const = default;
};

// Parametric WF motion RAO: unit gain up to the corner frequency, rolling
// off as (corner / w)^2 above it; directional gains along surge and sway.
struct RaoParams {
  double corner_omega = 0.35;  // rad/s
  double surge_gain = 0.8;
  double sway_gain = 1.0;

  double gain_squared(double omega, double alpha_deg) const {
    const double r = omega <= corner_omega ? 1.0 : std::pow(corner_omega / omega, 2.0);
    const double a = deg2rad(alpha_deg);
    const double c = std::cos(a);
    const double s = std::sin(a);
    return r * r * (c * c * surge_gain * surge_gain + s * s * sway_gain * sway_gain);
  }
};

struct FdConfig {
  double duration = 10800.0;   // s
  double lf_mass = 3.2e8;      // kg, including added mass
  double lf_damping = 4.0e5;   // N s/m
  double lf_quad_damping = 4.0e7;  // N s^2/m^2
  RaoParams rao;
  double tension_fraction = 0.6;   // screening threshold, fraction of MBL
  double offset_fraction = 0.10;   // screening threshold, fraction of depth
  std::size_t spectral_points = 400;
};

inline Vec2 global_mean_force(const VesselModel& v, const MetoceanState& s,
                              double phi) {
  const PlanarLoad l = total_mean_load(v, s, phi);
  return body_to_global(l.fx, l.fy, phi);
}

inline Vec2 global_drift_force(const VesselModel& v, const WaveSystem& w,
                               double phi) {
  const PlanarLoad l = mean_wave_drift_load(v, w, phi);
  return body_to_global(l.fx, l.fy, phi);
}

// ---------------------------------------------------------------------------
// Mean offset

// Newton iteration on R(x) + F = 0 with the finite-difference stiffness as
// Jacobian. Steps that leave the feasible window are halved.
inline Vec2 mean_equilibrium_offset(const MooringSystem& sys,
                                    const VesselModel& v,
                                    const MetoceanState& s, double phi_eq,
                                    double tol_newton = 1.0) {
  const Vec2 load = global_mean_force(v, s, phi_eq);
  Vec2 x{0.0, 0.0};
  Vec2 res = system_restoring(sys, x).force + load;
  for (int it = 0; it < 100; ++it) {
    if (res.norm() < tol_newton) return x;
    const auto k = linearized_stiffness(sys, x);
    const double det = k[0] * k[3] - k[1] * k[2];
    if (!(det > 0.0))
      throw Error("non_positive_stiffness", "mean offset: singular stiffness");
    // K dx = res
    Vec2 dx{(k[3] * res.x - k[1] * res.y) / det,
            (-k[2] * res.x + k[0] * res.y) / det};
    bool moved = false;
    for (int half = 0; half < 40; ++half) {
      try {
        const Vec2 xn = x + dx;
        const Vec2 rn = system_restoring(sys, xn).force + load;
        if (rn.norm() < res.norm() || half == 39) {
          x = xn;
          res = rn;
          moved = true;
          break;
        }
      } catch (const Error& e) {
        if (e.code() != "uplift" && e.code() != "slack") throw;
      }
      dx = dx * 0.5;
    }
    if (!moved)
      throw Error("infeasible", "mean offset: load exceeds mooring capacity");
  }
  if (res.norm() < tol_newton) return x;
  throw Error("no_convergence", "mean offset: Newton did not converge");
}

// ---------------------------------------------------------------------------
// Slow drift forcing

// integral S(w) S(w + mu) dw over the analysis band, trapezoid on n points.
inline double spectral_overlap(const Jonswap& spec, double mu, std::size_t n) {
  if (spec.wave().hs == 0.0) return 0.0;
  const double h = (kSpectrumOmegaMax - kSpectrumOmegaMin) / static_cast<double>(n - 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = kSpectrumOmegaMin + h * static_cast<double>(i);
    const double f = w + mu <= kSpectrumOmegaMax ? spec(w) * spec(w + mu) : 0.0;
    sum += (i == 0 || i == n - 1) ? 0.5 * f : f;
  }
  return sum * h;
}

inline double spectral_overlap(const WaveSystem& w, double mu, std::size_t n) {
  return spectral_overlap(Jonswap(w), mu, n);
}

// One-sided slow-drift force spectrum along unit axis u at frequency mu.
inline double slow_drift_force_spectrum(const VesselModel& v,
                                        const MetoceanState& s, double phi,
                                        const Vec2& u, double mu,
                                        std::size_t n = 400) {
  double total = 0.0;
  for (const WaveSystem* w : {&s.wave1, &s.wave2}) {
    if (w->hs == 0.0) continue;
    const double m0 = w->hs * w->hs / 16.0;
    const double f = global_drift_force(v, *w, phi).dot(u);
    if (f == 0.0) continue;
    total += 2.0 * f * f / (m0 * m0) * spectral_overlap(*w, mu, n);
  }
  return total;
}

// ---------------------------------------------------------------------------
// LF response

// Std of a linear oscillator with linearised quadratic damping under
// white-noise forcing of level s_f: solves b s^2 + c s^3 = pi s_f / (2 k),
// c = sqrt(8/pi) w_n bq.
inline double lf_axis_std(double s_f, double k, double mass, double b,
                          double bq) {
  if (!(k > 0.0))
    throw Error("non_positive_stiffness", "lf response: stiffness must be > 0");
  if (s_f <= 0.0) return 0.0;
  if (!(b > 0.0) && !(bq > 0.0))
    throw Error("no_damping", "lf response: damping must be > 0");
  const double wn = std::sqrt(k / mass);
  const double rhs = kPi * s_f / (2.0 * k);
  const double c = std::sqrt(8.0 / kPi) * wn * bq;
  auto f = [&](double x) { return b * x * x + c * x * x * x - rhs; };
  double lo = 0.0;
  double hi = b > 0.0 ? std::sqrt(rhs / b) : std::cbrt(rhs / c);
  if (c > 0.0) hi = std::min(hi, std::cbrt(rhs / c));
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

struct LfResponse {
  double sigma = 0.0;
  double sigma_along = 0.0;
  double sigma_across = 0.0;
  double omega_along = 0.0;
  double omega_across = 0.0;
  Vec2 along{0.0, 1.0};
};

// Radial LF std combined from axes along and across the total mean drift.
inline LfResponse lf_response(const MooringSystem& sys, const VesselModel& v,
                              const MetoceanState& s, double phi_eq,
                              const Vec2& mean_offset, const FdConfig& cfg) {
  LfResponse r;
  const Vec2 drift = global_drift_force(v, s.wave1, phi_eq) +
                     global_drift_force(v, s.wave2, phi_eq);
  if (drift.norm() > 0.0) r.along = drift * (1.0 / drift.norm());
  const Vec2 across{-r.along.y, r.along.x};
  const auto k = linearized_stiffness(sys, mean_offset);
  auto axis = [&](const Vec2& u, double& sigma, double& wn) {
    const double ku = u.x * (k[0] * u.x + k[1] * u.y) + u.y * (k[2] * u.x + k[3] * u.y);
    if (!(ku > 0.0))
      throw Error("non_positive_stiffness", "lf response: stiffness must be > 0");
    wn = std::sqrt(ku / cfg.lf_mass);
    const double sf = slow_drift_force_spectrum(v, s, phi_eq, u, wn, cfg.spectral_points);
    sigma = lf_axis_std(sf, ku, cfg.lf_mass, cfg.lf_damping, cfg.lf_quad_damping);
  };
  axis(r.along, r.sigma_along, r.omega_along);
  axis(across, r.sigma_across, r.omega_across);
  r.sigma = std::hypot(r.sigma_along, r.sigma_across);
  return r;
}

inline double lf_response_std(const MooringSystem& sys, const VesselModel& v,
                              const MetoceanState& s, double phi_eq,
                              const Vec2& mean_offset, const FdConfig& cfg) {
  return lf_response(sys, v, s, phi_eq, mean_offset, cfg).sigma;
}

// ---------------------------------------------------------------------------
// WF response

struct WfResponse {
  double sigma = 0.0;
  double tz = 0.0;  // zero up-crossing period of the response, s
};

inline WfResponse wf_response(const VesselModel& /*v*/, const MetoceanState& s,
                              double phi_eq, const FdConfig& cfg) {
  const std::size_t n = cfg.spectral_points;
  const auto grid = default_omega_grid(n);
  const double h = grid[1] - grid[0];
  double m0 = 0.0;
  double m2 = 0.0;
  for (const WaveSystem* w : {&s.wave1, &s.wave2}) {
    if (w->hs == 0.0) continue;
    const auto spec = jonswap_spectrum(*w, grid);
    const double alpha = w->theta_p - phi_eq;
    for (std::size_t i = 0; i < n; ++i) {
      const double f = spec[i] * cfg.rao.gain_squared(grid[i], alpha);
      const double wt = (i == 0 || i == n - 1) ? 0.5 * h : h;
      m0 += wt * f;
      m2 += wt * f * grid[i] * grid[i];
    }
  }
  WfResponse r;
  r.sigma = std::sqrt(m0);
  r.tz = m0 > 0.0 ? 2.0 * kPi * std::sqrt(m0 / m2) : 0.0;
  return r;
}

inline double wf_response_std(const VesselModel& v, const MetoceanState& s,
                              double phi_eq, const FdConfig& cfg) {
  return wf_response(v, s, phi_eq, cfg).sigma;
}

// ---------------------------------------------------------------------------
// MPM

// Narrow-band most probable maximum over n_cycles cycles.
inline double fd_mpm_offset(double mean_norm, double sigma_total,
                            double n_cycles) {
  if (sigma_total == 0.0) return mean_norm;
  return mean_norm + std::sqrt(2.0 * std::log(std::max(n_cycles, 1.0))) * sigma_total;
}

struct FdInputs {
  double phi_eq = 0.0;
  Vec2 mean_offset;
  Vec2 mean_force;  // direction fallback for tiny offsets
  LfResponse lf;
  WfResponse wf;
};

inline ResponseStatistics fd_mpm(const MooringSystem& sys, const FdInputs& in,
                                 const FdConfig& cfg) {
  if (!std::isfinite(in.lf.sigma) || !std::isfinite(in.wf.sigma))
    throw Error("non_finite", "fd_mpm: non-finite response std");
  ResponseStatistics r;
  r.phi_eq = in.phi_eq;
  r.mean_offset = in.mean_offset;
  r.sigma_lf = in.lf.sigma;
  r.sigma_wf = in.wf.sigma;
  r.source = ResponseSource::kFD;
  r.daf_applied = true;
  const double sigma_total = std::hypot(in.lf.sigma, in.wf.sigma);
  double tz;
  if (in.lf.sigma >= in.wf.sigma) {
    const double wn = in.lf.sigma_along >= in.lf.sigma_across ? in.lf.omega_along
                                                              : in.lf.omega_across;
    tz = wn > 0.0 ? 2.0 * kPi / wn : cfg.duration;
  } else {
    tz = in.wf.tz;
  }
  const double mean_norm = in.mean_offset.norm();
  r.mpm_offset = fd_mpm_offset(mean_norm, sigma_total, cfg.duration / tz);
  if (mean_norm >= 0.01)
    r.offset_dir = bearing_of(in.mean_offset);
  else if (in.mean_force.norm() > 0.0)
    r.offset_dir = bearing_of(in.mean_force);
  else
    r.offset_dir = 0.0;
  const auto ext = extreme_line_tensions(sys, bearing_vector(r.offset_dir) * r.mpm_offset);
  r.mpm_t_fair = ext.t_fair;
  r.mpm_t_anchor = ext.t_anchor;
  return r;
}

// Full FD evaluation of one state at a given equilibrium heading.
inline ResponseStatistics fd_response(const MooringSystem& sys,
                                      const VesselModel& v,
                                      const MetoceanState& s, double phi_eq,
                                      const FdConfig& cfg) {
  FdInputs in;
  in.phi_eq = phi_eq;
  in.mean_offset = mean_equilibrium_offset(sys, v, s, phi_eq);
  in.mean_force = global_mean_force(v, s, phi_eq);
  in.lf = lf_response(sys, v, s, phi_eq, in.mean_offset, cfg);
  in.wf = wf_response(v, s, phi_eq, cfg);
  return fd_mpm(sys, in, cfg);
}

// ---------------------------------------------------------------------------
// Screening

struct ScreenResult {
  std::vector<std::string> flagged;
  double fraction = 0.0;
};

inline bool is_critical(const MooringSystem& sys, const ResponseStatistics& r,
                        const FdConfig& cfg) {
  double mbl = sys.lines.empty() ? 0.0 : sys.lines.front().capacity_mbl;
  for (const auto& l : sys.lines) mbl = std::min(mbl, l.capacity_mbl);
  return r.mpm_t_fair > cfg.tension_fraction * mbl ||
         r.mpm_offset > cfg.offset_fraction * sys.depth;
}

inline ScreenResult screen(const MooringSystem& sys,
                           const std::vector<std::string>& ids,
                           const std::vector<ResponseStatistics>& fd,
                           const FdConfig& cfg) {
  if (ids.size() != fd.size())
    throw Error("size_mismatch", "screen: ids and results differ in length");
  ScreenResult out;
  for (std::size_t i = 0; i < fd.size(); ++i)
    if (is_critical(sys, fd[i], cfg)) out.flagged.push_back(ids[i]);
  out.fraction = fd.empty() ? 0.0
                            : static_cast<double>(out.flagged.size()) /
                                  static_cast<double>(fd.size());
  return out;
}

}  // namespace moorcast
