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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "moorcast/common.hpp"
#include "moorcast/random.hpp"

namespace moorcast {

// One JONSWAP wave system. Directions are compass degrees "from".
struct WaveSystem {
  double hs = 0.0;       // significant wave height, m
  double tp = 8.0;       // peak period, s
  double theta_p = 0.0;  // deg
  double gamma = 3.3;    // peak shape
  double sigma_a = 0.07;
  double sigma_b = 0.09;

  bool operator==(const WaveSystem&) const = default;
};

struct Wind {
  double uw = 0.0;  // 1-hour mean at 10 m, m/s
  double theta_w = 0.0;

  bool operator==(const Wind&) const = default;
};

struct Current {
  double uc = 0.0;  // surface speed, m/s
  double theta_c = 0.0;

  bool operator==(const Current&) const = default;
};

struct MetoceanState {
  std::string id;
  WaveSystem wave1;  // wind sea
  WaveSystem wave2;  // swell
  Wind wind;
  Current current;

  bool operator==(const MetoceanState&) const = default;
};

// Returns a copy with every environment direction rotated by `delta` deg.
inline MetoceanState rotated(MetoceanState s, double delta) {
  s.wave1.theta_p = wrap360(s.wave1.theta_p + delta);
  s.wave2.theta_p = wrap360(s.wave2.theta_p + delta);
  s.wind.theta_w = wrap360(s.wind.theta_w + delta);
  s.current.theta_c = wrap360(s.current.theta_c + delta);
  return s;
}

namespace detail {

inline bool direction_ok(double d) {
  return std::isfinite(d) && d >= 0.0 && d < 360.0;
}

inline void check_wave(const WaveSystem& w, const std::string& prefix,
                       std::vector<Violation>& out) {
  if (!std::isfinite(w.hs) || w.hs < 0.0)
    out.push_back({prefix + ".hs", "hs must be >= 0", w.hs, 0.0});
  if (!std::isfinite(w.tp) || (w.hs > 0.0 && w.tp <= 0.0) || w.tp < 0.0)
    out.push_back({prefix + ".tp", "tp must be > 0 when hs > 0", w.tp, 0.0});
  if (!direction_ok(w.theta_p))
    out.push_back({prefix + ".theta_p", "direction must be in [0, 360)",
                   w.theta_p, 360.0});
  if (!std::isfinite(w.gamma) || w.gamma < 1.0)
    out.push_back({prefix + ".gamma", "gamma must be >= 1", w.gamma, 1.0});
  if (!std::isfinite(w.sigma_a) || w.sigma_a <= 0.0 || w.sigma_a >= 1.0)
    out.push_back({prefix + ".sigma_a", "sigma_a must be in (0, 1)",
                   w.sigma_a, 0.0});
  if (!std::isfinite(w.sigma_b) || w.sigma_b <= 0.0 || w.sigma_b >= 1.0)
    out.push_back({prefix + ".sigma_b", "sigma_b must be in (0, 1)",
                   w.sigma_b, 0.0});
}

}  // namespace detail

// Lists every violated invariant; empty means valid.
inline std::vector<Violation> validate_state(const MetoceanState& s) {
  std::vector<Violation> out;
  detail::check_wave(s.wave1, "wave1", out);
  detail::check_wave(s.wave2, "wave2", out);
  if (!std::isfinite(s.wind.uw) || s.wind.uw < 0.0)
    out.push_back({"wind.uw", "uw must be >= 0", s.wind.uw, 0.0});
  if (!detail::direction_ok(s.wind.theta_w))
    out.push_back({"wind.theta_w", "direction must be in [0, 360)",
                   s.wind.theta_w, 360.0});
  if (!std::isfinite(s.current.uc) || s.current.uc < 0.0)
    out.push_back({"current.uc", "uc must be >= 0", s.current.uc, 0.0});
  if (!detail::direction_ok(s.current.theta_c))
    out.push_back({"current.theta_c", "direction must be in [0, 360)",
                   s.current.theta_c, 360.0});
  return out;
}

inline void require_valid(const MetoceanState& s) {
  auto v = validate_state(s);
  if (v.empty()) return;
  const std::string msg = "invalid metocean state '" + s.id + "': " + v.front().field + " " +
                          v.front().message;
  throw Error("invalid_state", msg, std::move(v));
}

// ---------------------------------------------------------------------------
// Spectra

inline constexpr double kSpectrumOmegaMin = 0.05;  // rad/s
inline constexpr double kSpectrumOmegaMax = 2.0;   // rad/s

// Default analysis grid: 100 circular frequencies over 0.05-2.0 rad/s.
inline std::vector<double> default_omega_grid(std::size_t n = 100) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = kSpectrumOmegaMin + (kSpectrumOmegaMax - kSpectrumOmegaMin) *
                                   static_cast<double>(i) /
                                   static_cast<double>(n - 1);
  return g;
}

namespace detail {

// JONSWAP shape without the energy scale.
inline double jonswap_shape(const WaveSystem& w, double omega) {
  const double wp = 2.0 * kPi / w.tp;
  const double sigma = omega <= wp ? w.sigma_a : w.sigma_b;
  const double r = (omega - wp) / (sigma * wp);
  const double peak = std::pow(w.gamma, std::exp(-0.5 * r * r));
  const double x = wp / omega;
  return std::pow(omega, -5.0) * std::exp(-1.25 * x * x * x * x) * peak;
}

// Integral of the shape over [0.05, 2.0] rad/s by composite Simpson.
inline double jonswap_shape_m0(const WaveSystem& w) {
  constexpr int n = 2048;
  const double h = (kSpectrumOmegaMax - kSpectrumOmegaMin) / n;
  double sum = jonswap_shape(w, kSpectrumOmegaMin) +
               jonswap_shape(w, kSpectrumOmegaMax);
  for (int i = 1; i < n; ++i)
    sum += (i % 2 ? 4.0 : 2.0) * jonswap_shape(w, kSpectrumOmegaMin + i * h);
  return sum * h / 3.0;
}

}  // namespace detail

// Energy scale so that the spectrum carries m0 = (hs/4)^2 inside the
// 0.05-2.0 rad/s analysis band.
inline double jonswap_scale(const WaveSystem& w) {
  if (w.hs == 0.0) return 0.0;
  const double m0 = w.hs * w.hs / 16.0;
  return m0 / detail::jonswap_shape_m0(w);
}

// Normalised JONSWAP density evaluated pointwise; the normalisation is
// computed once at construction.
class Jonswap {
 public:
  explicit Jonswap(const WaveSystem& w) : w_(w), scale_(jonswap_scale(w)) {}
  double operator()(double omega) const {
    return scale_ == 0.0 ? 0.0 : scale_ * detail::jonswap_shape(w_, omega);
  }
  const WaveSystem& wave() const { return w_; }

 private:
  WaveSystem w_;
  double scale_;
};

// Spectral density S(omega) in m^2 s/rad on an ascending grid of rad/s.
inline std::vector<double> jonswap_spectrum(const WaveSystem& w,
                                            std::span<const double> omega) {
  if (omega.empty()) throw Error("empty_grid", "jonswap: empty frequency grid");
  if (!std::isfinite(w.hs) || !std::isfinite(w.tp) ||
      !std::isfinite(w.gamma) || !std::isfinite(w.sigma_a) ||
      !std::isfinite(w.sigma_b))
    throw Error("non_finite", "jonswap: non-finite wave parameters");
  for (std::size_t i = 0; i < omega.size(); ++i) {
    if (!(omega[i] > 0.0) || (i > 0 && !(omega[i] > omega[i - 1])))
      throw Error("bad_grid", "jonswap: grid must be positive and ascending");
  }
  std::vector<double> s(omega.size(), 0.0);
  if (w.hs == 0.0) return s;
  const Jonswap spec(w);
  for (std::size_t i = 0; i < omega.size(); ++i) s[i] = spec(omega[i]);
  return s;
}

// NPD (Froya) gust spectrum, (m/s)^2/Hz, for 1-hour mean speed uw at 10 m
// evaluated at height z:
//   S(f) = 320 (uw/10)^2 (z/10)^0.45 / (1 + ft^n)^(5/(3n)),
//   ft   = 172 f (z/10)^(2/3) (uw/10)^(-3/4),  n = 0.468.
inline std::vector<double> npd_wind_spectrum(double uw, double z,
                                             std::span<const double> f) {
  if (!std::isfinite(uw) || !std::isfinite(z) || uw < 0.0 || !(z > 0.0))
    throw Error("non_finite", "npd: invalid wind speed or height");
  std::vector<double> s(f.size(), 0.0);
  if (uw == 0.0) return s;
  constexpr double n = 0.468;
  const double u = uw / 10.0;
  const double zr = z / 10.0;
  const double amp = 320.0 * u * u * std::pow(zr, 0.45);
  const double fscale = 172.0 * std::pow(zr, 2.0 / 3.0) * std::pow(u, -0.75);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!std::isfinite(f[i]) || !(f[i] > 0.0))
      throw Error("non_finite", "npd: frequencies must be finite and > 0");
    const double ft = fscale * f[i];
    s[i] = amp / std::pow(1.0 + std::pow(ft, n), 5.0 / (3.0 * n));
  }
  return s;
}

// ---------------------------------------------------------------------------
// Steepness

// Limit on Sp = 2 pi hs / (g tp^2): sp_low below tp_low, sp_high above
// tp_high, linear in between.
struct SteepnessLimit {
  double tp_low = 8.0;
  double sp_low = 1.0 / 15.0;
  double tp_high = 15.0;
  double sp_high = 1.0 / 25.0;

  double max_steepness(double tp) const {
    if (tp <= tp_low) return sp_low;
    if (tp >= tp_high) return sp_high;
    const double t = (tp - tp_low) / (tp_high - tp_low);
    return sp_low + t * (sp_high - sp_low);
  }
};

struct SteepnessResult {
  double hs = 0.0;
  bool clamped = false;
};

inline SteepnessResult enforce_steepness_limit(
    double hs, double tp, const SteepnessLimit& limit = {}) {
  const double hs_max = limit.max_steepness(tp) * kGravity * tp * tp / (2.0 * kPi);
  if (hs > hs_max) return {hs_max, true};
  return {hs, false};
}

// ---------------------------------------------------------------------------
// Sampling

enum class Distribution { kUniform, kLogNormal };

// Bounds plus sampling law for one scalar parameter. For log-normal
// parameters `mean`/`sd` are the moments of the untruncated law; draws
// outside [min, max] are rejected.
struct ParamBounds {
  double min = 0.0;
  double max = 0.0;
  Distribution dist = Distribution::kUniform;
  double mean = 0.0;
  double sd = 0.0;
};

struct DatasetBounds {
  ParamBounds hs1{0.26, 8.00, Distribution::kLogNormal, 2.60, 2.05};
  ParamBounds tp1{2.85, 17.0, Distribution::kLogNormal, 8.44, 1.87};
  ParamBounds gamma1{1.0, 5.0};
  ParamBounds sigma_a1{0.07, 0.07};
  ParamBounds sigma_b1{0.09, 0.09};
  ParamBounds hs2{0.0, 8.95, Distribution::kLogNormal, 1.79, 0.72};
  ParamBounds tp2{2.0, 40.0, Distribution::kLogNormal, 13.08, 2.87};
  ParamBounds gamma2{1.0, 5.0};
  ParamBounds sigma_a2{0.07, 0.07};
  ParamBounds sigma_b2{0.09, 0.09};
  ParamBounds uw{0.0, 41.76, Distribution::kLogNormal, 9.93, 7.73};
  ParamBounds uc{0.0, 4.65, Distribution::kLogNormal, 0.51, 0.56};
  ParamBounds theta{0.0, 360.0};  // all directions, [min, max)
  SteepnessLimit steepness;

  // Every scalar range, named, in a fixed order.
  std::vector<std::pair<std::string, const ParamBounds*>> named() const {
    return {{"hs1", &hs1},         {"tp1", &tp1},         {"gamma1", &gamma1},
            {"sigma_a1", &sigma_a1}, {"sigma_b1", &sigma_b1}, {"hs2", &hs2},
            {"tp2", &tp2},         {"gamma2", &gamma2},   {"sigma_a2", &sigma_a2},
            {"sigma_b2", &sigma_b2}, {"uw", &uw},         {"uc", &uc},
            {"theta", &theta}};
  }

  // Same ranges, every law switched to uniform.
  DatasetBounds uniform() const {
    DatasetBounds b = *this;
    for (ParamBounds* p : {&b.hs1, &b.tp1, &b.gamma1, &b.sigma_a1, &b.sigma_b1,
                           &b.hs2, &b.tp2, &b.gamma2, &b.sigma_a2, &b.sigma_b2,
                           &b.uw, &b.uc, &b.theta})
      p->dist = Distribution::kUniform;
    return b;
  }
};

namespace detail {

inline double sample_param(const ParamBounds& p, CounterRng& rng) {
  if (p.max == p.min) return p.min;
  if (p.dist == Distribution::kUniform) return rng.uniform(p.min, p.max);
  const double cv2 = (p.sd / p.mean) * (p.sd / p.mean);
  const double s = std::sqrt(std::log1p(cv2));
  const double mu = std::log(p.mean) - 0.5 * s * s;
  for (int attempt = 0; attempt < 10000; ++attempt) {
    const double x = std::exp(mu + s * rng.normal());
    if (x >= p.min && x <= p.max) return x;
  }
  return rng.uniform(p.min, p.max);
}

inline void check_bounds(const DatasetBounds& b) {
  for (const auto& [name, p] : b.named()) {
    if (!(p->min <= p->max) || !std::isfinite(p->min) || !std::isfinite(p->max))
      throw Error("degenerate_bounds", "bounds for " + name + " have min > max",
                  {{name, "min > max", p->min, p->max}});
    if (p->dist == Distribution::kLogNormal && !(p->mean > 0.0 && p->sd > 0.0))
      throw Error("degenerate_bounds",
                  "log-normal " + name + " needs positive mean and sd");
  }
  if (b.theta.min < 0.0 || b.theta.max > 360.0)
    throw Error("degenerate_bounds", "direction bounds must lie in [0, 360]");
}

}  // namespace detail

// Draws n states. Each state consumes its own counter stream keyed by
// (seed, index), so state i is independent of n. Wave heights are clamped
// to the steepness limit after sampling.
inline std::vector<MetoceanState> sample_metocean(std::size_t n,
                                                  std::uint64_t seed,
                                                  const DatasetBounds& b) {
  if (n == 0) throw Error("bad_count", "sample_metocean: n must be > 0");
  detail::check_bounds(b);
  auto direction = [&](CounterRng& rng) {
    double d = detail::sample_param(b.theta, rng);
    return d >= 360.0 ? 0.0 : d;
  };
  std::vector<MetoceanState> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    CounterRng rng(derive_seed(seed, i));
    MetoceanState& s = out[i];
    s.id = "S" + std::to_string(i);
    auto wave = [&](const ParamBounds& hs, const ParamBounds& tp,
                    const ParamBounds& g, const ParamBounds& sa,
                    const ParamBounds& sb) {
      WaveSystem w;
      w.hs = detail::sample_param(hs, rng);
      w.tp = detail::sample_param(tp, rng);
      w.theta_p = direction(rng);
      w.gamma = detail::sample_param(g, rng);
      w.sigma_a = detail::sample_param(sa, rng);
      w.sigma_b = detail::sample_param(sb, rng);
      w.hs = std::min(w.hs, enforce_steepness_limit(w.hs, w.tp, b.steepness).hs);
      return w;
    };
    s.wave1 = wave(b.hs1, b.tp1, b.gamma1, b.sigma_a1, b.sigma_b1);
    s.wave2 = wave(b.hs2, b.tp2, b.gamma2, b.sigma_a2, b.sigma_b2);
    s.wind.uw = detail::sample_param(b.uw, rng);
    s.wind.theta_w = direction(rng);
    s.current.uc = detail::sample_param(b.uc, rng);
    s.current.theta_c = direction(rng);
  }
  return out;
}

}  // namespace moorcast
