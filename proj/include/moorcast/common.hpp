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

#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace moorcast {

inline constexpr double kGravity = 9.80665;
inline constexpr double kRhoWater = 1025.0;
inline constexpr double kRhoAir = 1.225;
inline constexpr double kPi = std::numbers::pi;

// One violated invariant or bound. `field` names the offending input.
struct Violation {
  std::string field;
  std::string message;
  double value = 0.0;
  double bound = 0.0;
};

// All library failures are reported through Error. `code` is a stable
// machine-readable token (e.g. "uplift", "domain", "checksum").
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what,
        std::vector<Violation> violations = {})
      : std::runtime_error(what),
        code_(std::move(code)),
        violations_(std::move(violations)) {}

  const std::string& code() const noexcept { return code_; }
  const std::vector<Violation>& violations() const noexcept {
    return violations_;
  }

 private:
  std::string code_;
  std::vector<Violation> violations_;
};

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

// Wraps into [0, 360).
inline double wrap360(double deg) {
  double r = std::fmod(deg, 360.0);
  if (r < 0.0) r += 360.0;
  if (r >= 360.0) r -= 360.0;
  return r;
}

// Wraps into (-180, 180].
inline double wrap180(double deg) {
  double r = wrap360(deg);
  return r > 180.0 ? r - 360.0 : r;
}

// 2D vector in global axes: x east, y north.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  double norm() const { return std::hypot(x, y); }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }

  bool operator==(const Vec2&) const = default;
};

// Unit vector pointing toward compass bearing `deg` (clockwise from north).
inline Vec2 bearing_vector(double deg) {
  const double r = deg2rad(deg);
  return {std::sin(r), std::cos(r)};
}

// Compass bearing of a vector, in [0, 360).
inline double bearing_of(const Vec2& v) {
  return wrap360(rad2deg(std::atan2(v.x, v.y)));
}

// Carries the first exception out of an OpenMP loop body.
class ExceptionSink {
 public:
  template <class F>
  void run(F&& f) noexcept {
    try {
      f();
    } catch (...) {
      std::lock_guard<std::mutex> lock(m_);
      if (!e_) e_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (e_) std::rethrow_exception(e_);
  }

 private:
  std::mutex m_;
  std::exception_ptr e_;
};

}  // namespace moorcast
