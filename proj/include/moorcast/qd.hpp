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

// Quasi-dynamic time-domain simulation of the turret in the horizontal
// plane, at fixed heading:
//
//   m x'' + b x' + bq |x'| x' = R(x) + F_static + r(t) F_slow(t)
//
// R is the catenary restoring force, F_static the mean wind, current and
// wave drift load, F_slow the zero-mean slow-drift fluctuation and r(t) a
// linear 0 -> 1 ramp. The vessel starts at rest at the static equilibrium.
// Wave-frequency motion is not integrated; an independent Gaussian process
// with the WF response spectrum is added to the LF position before extremes
// are taken.
//
// Forcing is synthesised on a fixed frequency comb of spacing 2 pi / P, P
// a power-of-two multiple of dt/2 covering the record, so halving dt only
// refines the sampling of the same continuous realisation.

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "moorcast/common.hpp"
#include "moorcast/metocean.hpp"
#include "moorcast/mooring.hpp"
#include "moorcast/random.hpp"
#include "moorcast/response.hpp"
#include "moorcast/vessel.hpp"

namespace moorcast {

struct QdConfig {
  int n_realizations = 10;
  double duration = 10800.0;  // recorded, s
  double ramp = 1800.0;       // before the record, s
  double dt = 0.5;
  double lf_mass = 3.2e8;
  double lf_damping = 4.0e5;
  double lf_quad_damping = 4.0e7;
  RaoParams rao;
  std::uint64_t seed = 1;
  bool include_wf = true;
  // Start here instead of at the static equilibrium (decay checks).
  std::optional<Vec2> initial_offset;

  void validate() const {
    if (!(dt > 0.0) || !(ramp >= 0.0) || !(duration > 0.0) || n_realizations < 2)
      throw Error("bad_config", "qd: need dt > 0, duration > 0, n_realizations >= 2");
  }
};

struct RealizationExtremes {
  double max_offset = 0.0;
  double direction = 0.0;  // bearing of the displacement at max_offset
  double t_max_offset = 0.0;
  double max_t_fair = 0.0;
  double t_max_t_fair = 0.0;
  double max_t_anchor = 0.0;
  double t_max_t_anchor = 0.0;
  double lf_std = 0.0;  // radial std of the LF position about its mean
  double wf_std = 0.0;
  std::uint64_t seed = 0;
};

struct TracePoint {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double t_fair = 0.0;
};

struct GumbelFit {
  double mu = 0.0;
  double beta = 0.0;
};

inline constexpr double kEulerGamma = 0.5772156649015329;

// Method of moments: beta = s sqrt(6) / pi, mu = mean - gamma_E beta.
inline GumbelFit gumbel_fit(const std::vector<double>& maxima) {
  if (maxima.size() < 2) throw Error("too_few", "gumbel_fit: need >= 2 values");
  double mean = 0.0;
  for (double x : maxima) mean += x;
  mean /= static_cast<double>(maxima.size());
  double ss = 0.0;
  for (double x : maxima) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(maxima.size() - 1));
  if (!(sd > 0.0)) throw Error("degenerate", "gumbel_fit: all values identical");
  GumbelFit g;
  g.beta = sd * std::sqrt(6.0) / kPi;
  g.mu = mean - kEulerGamma * g.beta;
  return g;
}

// ---------------------------------------------------------------------------
// Mooring lookup

// Anchor geometry plus one h(span) table per line.
class TableMooring {
 public:
  explicit TableMooring(const MooringSystem& sys) : sys_(sys) {
    for (const auto& l : sys.lines) {
      anchors_.push_back(anchor_position(l));
      tables_.emplace_back(l, sys.depth);
    }
  }

  const MooringSystem& system() const { return sys_; }

  // Restoring force; nullopt when any line leaves its table range.
  std::optional<Vec2> force(const Vec2& p) const {
    Vec2 f;
    for (std::size_t i = 0; i < tables_.size(); ++i) {
      const Vec2 d = anchors_[i] - p;
      const double span = d.norm();
      if (!tables_[i].contains(span)) return std::nullopt;
      f += d * (tables_[i].h(span) / span);
    }
    return f;
  }

  // Max fairlead and anchor tension (no DAF); false when out of range.
  bool max_tensions(const Vec2& p, double& t_fair, double& t_anchor) const {
    t_fair = 0.0;
    t_anchor = 0.0;
    for (std::size_t i = 0; i < tables_.size(); ++i) {
      const double span = (anchors_[i] - p).norm();
      if (!tables_[i].contains(span)) return false;
      const double h = tables_[i].h(span);
      t_fair = std::max(t_fair, h + tables_[i].w_depth());
      t_anchor = std::max(t_anchor, h);
    }
    return true;
  }

  // Static equilibrium under a constant load, Newton with FD Jacobian.
  Vec2 equilibrium(const Vec2& load) const {
    Vec2 x;
    auto residual = [&](const Vec2& p) {
      auto f = force(p);
      if (!f) throw Error("infeasible", "qd statics: outside mooring window");
      return *f + load;
    };
    Vec2 r = residual(x);
    for (int it = 0; it < 100 && r.norm() > 1e-3; ++it) {
      constexpr double e = 0.01;
      const Vec2 rx = (residual(x + Vec2{e, 0}) - residual(x - Vec2{e, 0})) * (0.5 / e);
      const Vec2 ry = (residual(x + Vec2{0, e}) - residual(x - Vec2{0, e})) * (0.5 / e);
      const double det = rx.x * ry.y - ry.x * rx.y;
      if (det == 0.0) throw Error("non_positive_stiffness", "qd statics: singular");
      Vec2 dx{-(ry.y * r.x - ry.x * r.y) / det, -(-rx.y * r.x + rx.x * r.y) / det};
      for (int half = 0; half < 40; ++half) {
        auto f = force(x + dx);
        if (f && (*f + load).norm() < r.norm()) break;
        dx = dx * 0.5;
      }
      x += dx;
      r = residual(x);
    }
    return x;
  }

 private:
  MooringSystem sys_;
  std::vector<Vec2> anchors_;
  std::vector<LineTable> tables_;
};

// ---------------------------------------------------------------------------
// Forcing synthesis

namespace detail {

// Backward complex FFT of length n (power of two), FFTW_ESTIMATE plan.
class BackwardFft {
 public:
  explicit BackwardFft(std::size_t n) : n_(n) {
    buf_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan_ = fftw_plan_dft_1d(static_cast<int>(n), buf_, buf_, FFTW_BACKWARD,
                             FFTW_ESTIMATE);
  }
  ~BackwardFft() {
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      fftw_destroy_plan(plan_);
    }
    fftw_free(buf_);
  }
  BackwardFft(const BackwardFft&) = delete;
  BackwardFft& operator=(const BackwardFft&) = delete;

  std::complex<double>* data() {
    return reinterpret_cast<std::complex<double>*>(buf_);
  }
  void execute() { fftw_execute(plan_); }
  std::size_t size() const { return n_; }

 private:
  static std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
  }
  std::size_t n_;
  fftw_complex* buf_ = nullptr;
  fftw_plan plan_ = nullptr;
};

struct Comb {
  std::size_t n = 0;     // samples
  double sample_dt = 0;  // dt / 2
  double domega = 0;
  std::size_t k_lo = 0;
  std::size_t k_hi = 0;
};

inline Comb make_comb(const QdConfig& cfg) {
  Comb c;
  c.sample_dt = 0.5 * cfg.dt;
  const double total = cfg.ramp + cfg.duration;
  std::size_t n = 1;
  while (static_cast<double>(n) * c.sample_dt < total + cfg.dt) n <<= 1;
  c.n = n;
  c.domega = 2.0 * kPi / (static_cast<double>(n) * c.sample_dt);
  c.k_lo = static_cast<std::size_t>(std::ceil(kSpectrumOmegaMin / c.domega));
  c.k_hi = static_cast<std::size_t>(std::floor(kSpectrumOmegaMax / c.domega));
  return c;
}

// |E(t)|^2 / sum a_k^2 on the sample grid; unit mean over the comb period.
inline std::vector<double> envelope_power(const WaveSystem& w, const Comb& c,
                                          std::uint64_t key, BackwardFft& fft) {
  std::vector<double> out(c.n, 0.0);
  if (w.hs == 0.0) return out;
  const Jonswap spec(w);
  CounterRng rng(key);
  auto* x = fft.data();
  std::fill(x, x + c.n, std::complex<double>(0.0, 0.0));
  double total = 0.0;
  for (std::size_t k = c.k_lo; k <= c.k_hi; ++k) {
    const double a2 = 2.0 * spec(c.domega * static_cast<double>(k)) * c.domega;
    const double phase = 2.0 * kPi * rng.uniform();
    x[k - c.k_lo] = std::polar(std::sqrt(a2), phase);
    total += a2;
  }
  fft.execute();
  if (total <= 0.0) return out;
  for (std::size_t j = 0; j < c.n; ++j) out[j] = std::norm(x[j]) / total;
  return out;
}

// Zero-mean Gaussian WF displacement along a fixed unit axis.
inline std::vector<double> wf_process(const WaveSystem& w, double alpha_deg,
                                      const RaoParams& rao, const Comb& c,
                                      std::uint64_t key, BackwardFft& fft) {
  std::vector<double> out(c.n, 0.0);
  if (w.hs == 0.0) return out;
  const Jonswap spec(w);
  CounterRng rng(key);
  auto* x = fft.data();
  std::fill(x, x + c.n, std::complex<double>(0.0, 0.0));
  for (std::size_t k = c.k_lo; k <= c.k_hi; ++k) {
    const double om = c.domega * static_cast<double>(k);
    const double b2 = 2.0 * spec(om) * rao.gain_squared(om, alpha_deg) * c.domega;
    x[k] = std::polar(std::sqrt(b2), 2.0 * kPi * rng.uniform());
  }
  fft.execute();
  for (std::size_t j = 0; j < c.n; ++j) out[j] = x[j].real();
  return out;
}

// Body direction of WF motion for incidence alpha, as a global unit vector.
inline Vec2 wf_axis(double alpha_deg, double phi, const RaoParams& rao) {
  const double a = deg2rad(alpha_deg);
  const double fx = rao.surge_gain * std::cos(a);
  const double fy = rao.sway_gain * std::sin(a);
  const Vec2 g = body_to_global(fx, fy, phi);
  const double n = g.norm();
  return n > 0.0 ? g * (1.0 / n) : Vec2{0.0, 0.0};
}

}  // namespace detail

// Slow-drift force series (global axes) at the sample spacing dt/2,
// including the mean drift. Exposed for inspection and testing.
struct DriftForceSeries {
  double sample_dt = 0.0;
  std::vector<Vec2> force;
};

inline DriftForceSeries synthesize_drift_force(const VesselModel& v,
                                               const WaveSystem& w,
                                               double phi_eq,
                                               std::uint64_t seed,
                                               const QdConfig& cfg) {
  const auto comb = detail::make_comb(cfg);
  detail::BackwardFft fft(comb.n);
  const auto p = detail::envelope_power(w, comb, seed, fft);
  const Vec2 mean = global_drift_force(v, w, phi_eq);
  DriftForceSeries out;
  out.sample_dt = comb.sample_dt;
  out.force.resize(comb.n);
  for (std::size_t j = 0; j < comb.n; ++j) out.force[j] = mean * p[j];
  return out;
}

// ---------------------------------------------------------------------------
// Integration

inline RealizationExtremes simulate_realization(
    const TableMooring& moor, const VesselModel& v, const MetoceanState& s,
    double phi_eq, std::uint64_t seed, const QdConfig& cfg,
    std::vector<TracePoint>* trace = nullptr, std::size_t trace_every = 20) {
  cfg.validate();
  const auto comb = detail::make_comb(cfg);
  detail::BackwardFft fft(comb.n);
  const WaveSystem* waves[2] = {&s.wave1, &s.wave2};

  const Vec2 f_static = global_mean_force(v, s, phi_eq);
  Vec2 drift_mean[2];
  std::vector<double> env[2];
  for (int k = 0; k < 2; ++k) {
    drift_mean[k] = global_drift_force(v, *waves[k], phi_eq);
    env[k] = detail::envelope_power(*waves[k], comb, derive_seed(seed, k), fft);
  }
  std::vector<Vec2> wf(comb.n);
  if (cfg.include_wf) {
    for (int k = 0; k < 2; ++k) {
      const double alpha = waves[k]->theta_p - phi_eq;
      const auto xi = detail::wf_process(*waves[k], alpha, cfg.rao, comb,
                                         derive_seed(seed, 2 + k), fft);
      const Vec2 axis = detail::wf_axis(alpha, phi_eq, cfg.rao);
      for (std::size_t j = 0; j < comb.n; ++j) wf[j] += axis * xi[j];
    }
  }

  auto excitation = [&](std::size_t j, double t) {
    const double r = cfg.ramp > 0.0 ? std::min(t / cfg.ramp, 1.0) : 1.0;
    Vec2 f = f_static;
    for (int k = 0; k < 2; ++k)
      if (!env[k].empty() && drift_mean[k].norm() > 0.0)
        f += drift_mean[k] * (r * (env[k][j] - 1.0));
    return f;
  };

  const double m = cfg.lf_mass;
  const double b = cfg.lf_damping;
  const double bq = cfg.lf_quad_damping;
  std::size_t step_index = 0;
  auto accel = [&](const Vec2& x, const Vec2& u, const Vec2& f) {
    auto r = moor.force(x);
    if (!r)
      throw Error("blow_up", "qd: position left the mooring window at step " +
                                 std::to_string(step_index));
    const double speed = u.norm();
    return (*r + f - u * b - u * (bq * speed)) * (1.0 / m);
  };

  const Vec2 x_static = moor.equilibrium(f_static);
  Vec2 x = cfg.initial_offset.value_or(x_static);
  Vec2 u;
  RealizationExtremes ex;
  ex.seed = seed;
  const auto n_steps = static_cast<std::size_t>(
      std::llround((cfg.ramp + cfg.duration) / cfg.dt));
  const double dt = cfg.dt;
  double sx = 0, sy = 0, sxx = 0, syy = 0, swf = 0;
  std::size_t nrec = 0;
  for (step_index = 0; step_index < n_steps; ++step_index) {
    const double t = static_cast<double>(step_index) * dt;
    const std::size_t j = 2 * step_index;
    const Vec2 f0 = excitation(j, t);
    const Vec2 fh = excitation(j + 1, t + 0.5 * dt);
    const Vec2 f1 = excitation(j + 2, t + dt);
    const Vec2 k1x = u;
    const Vec2 k1u = accel(x, u, f0);
    const Vec2 k2x = u + k1u * (0.5 * dt);
    const Vec2 k2u = accel(x + k1x * (0.5 * dt), k2x, fh);
    const Vec2 k3x = u + k2u * (0.5 * dt);
    const Vec2 k3u = accel(x + k2x * (0.5 * dt), k3x, fh);
    const Vec2 k4x = u + k3u * dt;
    const Vec2 k4u = accel(x + k3x * dt, k4x, f1);
    x += (k1x + k2x * 2.0 + k3x * 2.0 + k4x) * (dt / 6.0);
    u += (k1u + k2u * 2.0 + k3u * 2.0 + k4u) * (dt / 6.0);
    if (!std::isfinite(x.x) || !std::isfinite(x.y) || !std::isfinite(u.x) ||
        !std::isfinite(u.y))
      throw Error("blow_up", "qd: non-finite state at step " +
                                 std::to_string(step_index));
    const double t1 = t + dt;
    if (t1 <= cfg.ramp) continue;
    const Vec2 p = x + wf[j + 2];
    const double r = p.norm();
    double tf = 0.0, ta = 0.0;
    if (!moor.max_tensions(p, tf, ta))
      throw Error("blow_up", "qd: position left the mooring window at step " +
                                 std::to_string(step_index));
    if (r > ex.max_offset || nrec == 0) {
      ex.max_offset = r;
      ex.direction = bearing_of(p);
      ex.t_max_offset = t1;
    }
    if (tf > ex.max_t_fair) {
      ex.max_t_fair = tf;
      ex.t_max_t_fair = t1;
    }
    if (ta > ex.max_t_anchor) {
      ex.max_t_anchor = ta;
      ex.t_max_t_anchor = t1;
    }
    const Vec2 d = x - x_static;
    sx += d.x;
    sy += d.y;
    sxx += d.x * d.x;
    syy += d.y * d.y;
    swf += wf[j + 2].dot(wf[j + 2]);
    ++nrec;
    if (trace && (nrec - 1) % trace_every == 0) trace->push_back({t1, p.x, p.y, tf});
  }
  if (nrec > 0) {
    const double nn = static_cast<double>(nrec);
    const double vx = sxx / nn - (sx / nn) * (sx / nn);
    const double vy = syy / nn - (sy / nn) * (sy / nn);
    ex.lf_std = std::sqrt(std::max(0.0, vx + vy));
    ex.wf_std = std::sqrt(swf / nn);
  }
  return ex;
}

inline RealizationExtremes simulate_realization(const MooringSystem& sys,
                                                const VesselModel& v,
                                                const MetoceanState& s,
                                                double phi_eq, std::uint64_t seed,
                                                const QdConfig& cfg) {
  return simulate_realization(TableMooring(sys), v, s, phi_eq, seed, cfg);
}

struct QdResult {
  ResponseStatistics stats;
  std::vector<RealizationExtremes> realizations;
  GumbelFit offset_fit;
  GumbelFit t_fair_fit;
  GumbelFit t_anchor_fit;
};

namespace detail {

// Gumbel mode of the maxima; identical maxima (deterministic forcing) give
// that common value with beta = 0.
inline GumbelFit gumbel_or_constant(const std::vector<double>& x) {
  const bool all_same = std::all_of(x.begin(), x.end(), [&](double v) {
    return std::abs(v - x.front()) <= 1e-12 * std::max(1.0, std::abs(x.front()));
  });
  if (all_same) return {x.front(), 0.0};
  return gumbel_fit(x);
}

}  // namespace detail

// Ten-realisation (by default) extreme-value estimate. Realisation r uses
// seed derive_seed(cfg.seed, r); results are reduced in realisation order.
inline QdResult qd_run(const TableMooring& moor, const VesselModel& v,
                       const MetoceanState& s, double phi_eq,
                       const QdConfig& cfg) {
  cfg.validate();
  require_valid(s);
  QdResult out;
  out.realizations.resize(static_cast<std::size_t>(cfg.n_realizations));
  for (int r = 0; r < cfg.n_realizations; ++r)
    out.realizations[static_cast<std::size_t>(r)] = simulate_realization(
        moor, v, s, phi_eq, derive_seed(cfg.seed, static_cast<std::uint64_t>(r)), cfg);

  std::vector<double> off, tf, ta;
  double cx = 0.0, cy = 0.0, lf2 = 0.0, wf2 = 0.0;
  for (const auto& e : out.realizations) {
    off.push_back(e.max_offset);
    tf.push_back(e.max_t_fair);
    ta.push_back(e.max_t_anchor);
    const Vec2 d = bearing_vector(e.direction);
    cx += d.x;
    cy += d.y;
    lf2 += e.lf_std * e.lf_std;
    wf2 += e.wf_std * e.wf_std;
  }
  out.offset_fit = detail::gumbel_or_constant(off);
  out.t_fair_fit = detail::gumbel_or_constant(tf);
  out.t_anchor_fit = detail::gumbel_or_constant(ta);

  const double nr = static_cast<double>(cfg.n_realizations);
  const auto& sys = moor.system();
  ResponseStatistics& st = out.stats;
  st.phi_eq = phi_eq;
  st.mean_offset = moor.equilibrium(global_mean_force(v, s, phi_eq));
  st.mpm_offset = out.offset_fit.mu;
  st.offset_dir = bearing_of({cx, cy});
  st.mpm_t_fair = out.t_fair_fit.mu * sys.daf_fairlead;
  st.mpm_t_anchor = out.t_anchor_fit.mu * sys.daf_anchor;
  st.sigma_lf = std::sqrt(lf2 / nr);
  st.sigma_wf = std::sqrt(wf2 / nr);
  st.source = ResponseSource::kQD;
  st.daf_applied = true;
  return out;
}

inline ResponseStatistics qd_mpm(const TableMooring& moor, const VesselModel& v,
                                 const MetoceanState& s, double phi_eq,
                                 const QdConfig& cfg) {
  return qd_run(moor, v, s, phi_eq, cfg).stats;
}

inline ResponseStatistics qd_mpm(const MooringSystem& sys, const VesselModel& v,
                                 const MetoceanState& s, double phi_eq,
                                 const QdConfig& cfg) {
  return qd_mpm(TableMooring(sys), v, s, phi_eq, cfg);
}

}  // namespace moorcast
