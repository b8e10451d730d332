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

// Serving layer: model bundle persistence, the training-domain guard,
// end-to-end prediction and metocean ingestion.
//
// Bundle file layout (little-endian), see docs/bundle_format.md:
//   0   8  magic "MOORCAST"
//   8   4  u32 schema_version
//   12  8  u64 payload length L
//   20  L  CBOR payload
//   20+L 4 u32 CRC-32 (zlib) of bytes [0, 20+L)

#include <zlib.h>

#include <chrono>
#include <cstdint>
#include <cstring>
#include <ctime>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "moorcast/config.hpp"
#include "moorcast/dataset.hpp"
#include "moorcast/heading.hpp"
#include "moorcast/io.hpp"
#include "moorcast/ml/angular.hpp"
#include "moorcast/ml/model.hpp"

namespace moorcast {

inline constexpr std::uint32_t kBundleSchemaVersion = 1;
inline constexpr char kBundleMagic[8] = {'M', 'O', 'O', 'R', 'C', 'A', 'S', 'T'};

struct Limits {
  double tension = 4.8e6;  // N, applied to fairlead and anchor
  double offset = 40.0;    // m
};

struct ModelBundle {
  std::uint32_t schema_version = kBundleSchemaVersion;
  std::vector<std::string> features = feature_names();
  ml::Model mpm_offset;
  ml::AngularModel offset_dir;
  ml::Model mpm_t_fair;
  ml::Model mpm_t_anchor;
  std::vector<FeatureBound> bounds;
  Limits limits;
  VesselModel vessel;  // heading solver at prediction time
  nlohmann::json metrics = nlohmann::json::object();
  nlohmann::json metadata = nlohmann::json::object();

  // Short identifier, the payload CRC; set by save_bundle and load_bundle.
  std::string version;
};

// ---------------------------------------------------------------------------
// Persistence

namespace detail {

inline nlohmann::json bundle_payload(const ModelBundle& b) {
  nlohmann::json bounds = nlohmann::json::array();
  for (std::size_t j = 0; j < b.bounds.size(); ++j)
    bounds.push_back({{"feature", b.features[j]}, {"min", b.bounds[j].min},
                      {"max", b.bounds[j].max}});
  return {{"features", b.features},
          {"feature_version", kFeatureVersion},
          {"models",
           {{"mpm_offset", ml::to_json(b.mpm_offset)},
            {"offset_dir_e", ml::to_json(b.offset_dir.east)},
            {"offset_dir_n", ml::to_json(b.offset_dir.north)},
            {"mpm_t_fair", ml::to_json(b.mpm_t_fair)},
            {"mpm_t_anchor", ml::to_json(b.mpm_t_anchor)}}},
          {"bounds", bounds},
          {"limits", {{"tension", b.limits.tension}, {"offset", b.limits.offset}}},
          {"vessel", b.vessel},
          {"metrics", b.metrics},
          {"metadata", b.metadata}};
}

template <class T>
void put_le(std::string& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i)
    out.push_back(static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xFF));
}

template <class T>
T get_le(const std::string& in, std::size_t at) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i)
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  return static_cast<T>(v);
}

inline std::uint32_t crc32_of(const std::string& bytes, std::size_t n) {
  uLong c = crc32(0L, Z_NULL, 0);
  const auto* p = reinterpret_cast<const Bytef*>(bytes.data());
  std::size_t done = 0;
  while (done < n) {
    const auto chunk = static_cast<uInt>(std::min<std::size_t>(n - done, 1u << 30));
    c = crc32(c, p + done, chunk);
    done += chunk;
  }
  return static_cast<std::uint32_t>(c);
}

inline std::string hex32(std::uint32_t v) {
  char buf[9];
  std::snprintf(buf, sizeof(buf), "%08x", v);
  return buf;
}

}  // namespace detail

inline std::string encode_bundle(ModelBundle& b) {
  const auto cbor = nlohmann::json::to_cbor(detail::bundle_payload(b));
  std::string out(kBundleMagic, sizeof(kBundleMagic));
  detail::put_le<std::uint32_t>(out, b.schema_version);
  detail::put_le<std::uint64_t>(out, cbor.size());
  out.append(reinterpret_cast<const char*>(cbor.data()), cbor.size());
  const std::uint32_t crc = detail::crc32_of(out, out.size());
  detail::put_le<std::uint32_t>(out, crc);
  b.version = detail::hex32(crc);
  return out;
}

inline ModelBundle decode_bundle(const std::string& bytes) {
  constexpr std::size_t kHeader = 20;
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kBundleMagic, 8) != 0)
    throw Error("corrupt_bundle", "bundle: bad magic");
  if (bytes.size() < kHeader + 4) throw Error("checksum", "bundle: truncated");
  const auto version = detail::get_le<std::uint32_t>(bytes, 8);
  if (version != kBundleSchemaVersion)
    throw Error("version_mismatch", "bundle schema_version " + std::to_string(version) +
                                        " is incompatible with " +
                                        std::to_string(kBundleSchemaVersion));
  const auto len = detail::get_le<std::uint64_t>(bytes, 12);
  if (len > bytes.size() || bytes.size() != kHeader + len + 4)
    throw Error("checksum", "bundle: length mismatch (truncated or padded file)");
  const auto stored = detail::get_le<std::uint32_t>(bytes, kHeader + len);
  const auto crc = detail::crc32_of(bytes, kHeader + len);
  if (stored != crc) throw Error("checksum", "bundle: CRC-32 mismatch");

  nlohmann::json j;
  try {
    j = nlohmann::json::from_cbor(bytes.begin() + kHeader,
                                  bytes.begin() + static_cast<std::ptrdiff_t>(kHeader + len));
    ModelBundle b;
    b.schema_version = version;
    j.at("features").get_to(b.features);
    if (j.at("feature_version").get<int>() != kFeatureVersion || b.features != feature_names())
      throw Error("version_mismatch", "bundle feature list differs from this build");
    const auto& m = j.at("models");
    b.mpm_offset = ml::model_from_json(m.at("mpm_offset"));
    b.offset_dir.east = ml::model_from_json(m.at("offset_dir_e"));
    b.offset_dir.north = ml::model_from_json(m.at("offset_dir_n"));
    b.mpm_t_fair = ml::model_from_json(m.at("mpm_t_fair"));
    b.mpm_t_anchor = ml::model_from_json(m.at("mpm_t_anchor"));
    for (const auto* mm : {&b.mpm_offset, &b.offset_dir.east, &b.offset_dir.north,
                           &b.mpm_t_fair, &b.mpm_t_anchor})
      if (mm->features != b.features)
        throw Error("corrupt_bundle", "bundle: model feature list mismatch");
    for (const auto& e : j.at("bounds"))
      b.bounds.push_back({e.at("min").get<double>(), e.at("max").get<double>()});
    if (b.bounds.size() != b.features.size())
      throw Error("corrupt_bundle", "bundle: bounds do not cover every feature");
    b.limits.tension = j.at("limits").at("tension").get<double>();
    b.limits.offset = j.at("limits").at("offset").get<double>();
    if (!(b.limits.tension > 0.0 && b.limits.offset > 0.0))
      throw Error("corrupt_bundle", "bundle: limits must be positive");
    b.vessel = j.at("vessel").get<VesselModel>();
    b.metrics = j.value("metrics", nlohmann::json::object());
    b.metadata = j.value("metadata", nlohmann::json::object());
    b.version = detail::hex32(crc);
    return b;
  } catch (const nlohmann::json::exception& e) {
    throw Error("corrupt_bundle", std::string("bundle payload: ") + e.what());
  }
}

inline void save_bundle(ModelBundle& b, const std::string& path) {
  io::write_file(path, encode_bundle(b));
}

inline ModelBundle load_bundle(const std::string& path) {
  return decode_bundle(io::read_file(path));
}

// ---------------------------------------------------------------------------
// Domain guard

// Box check against the training bounds widened by margin * (max - min).
inline std::vector<Violation> domain_check(const ModelBundle& b, const FeatureVector& x,
                                           double margin = 0.0) {
  if (x.size() != b.features.size())
    throw Error("feature_mismatch", "domain_check: feature count differs from bundle");
  std::vector<Violation> v;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double pad = margin * (b.bounds[j].max - b.bounds[j].min);
    const double lo = b.bounds[j].min - pad;
    const double hi = b.bounds[j].max + pad;
    if (!(x[j] >= lo)) v.push_back({b.features[j], "below training minimum", x[j], lo});
    else if (!(x[j] <= hi)) v.push_back({b.features[j], "above training maximum", x[j], hi});
  }
  return v;
}

// ---------------------------------------------------------------------------
// Prediction

struct PredictedResponses {
  double phi_eq = 0.0;
  double mpm_offset = 0.0;
  double offset_dir = 0.0;
  double mpm_t_fair = 0.0;
  double mpm_t_anchor = 0.0;
};

struct PredictionReport {
  MetoceanState state;
  PredictedResponses stats;
  double util_offset = 0.0;
  double util_t_fair = 0.0;
  double util_t_anchor = 0.0;
  bool domain_ok = true;
  std::vector<Violation> violations;
  bool override_used = false;
  std::string bundle_version;
  double inference_ms = 0.0;
};

struct PredictOptions {
  double margin = 0.0;
  bool allow_extrapolation = false;
};

// Heading from the physics solver, responses from the surrogates. Outside
// the training box this throws "out_of_domain" unless extrapolation is
// explicitly allowed, in which case the report echoes the override.
inline PredictionReport predict_responses(const ModelBundle& b, const MetoceanState& s,
                                          const PredictOptions& opt = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  require_valid(s);
  PredictionReport r;
  r.state = s;
  r.bundle_version = b.version;
  const auto h = solve_equilibrium_heading(b.vessel, s);
  const auto x = build_feature_row(s, h);
  r.violations = domain_check(b, x, opt.margin);
  r.domain_ok = r.violations.empty();
  if (!r.domain_ok) {
    if (!opt.allow_extrapolation)
      throw Error("out_of_domain",
                  "state " + s.id + " lies outside the training domain (" +
                      r.violations.front().field + ")",
                  r.violations);
    r.override_used = true;
  }
  r.stats.phi_eq = h.phi_eq;
  r.stats.mpm_offset = b.mpm_offset.predict(x);
  r.stats.offset_dir = b.offset_dir.predict(x);
  r.stats.mpm_t_fair = b.mpm_t_fair.predict(x);
  r.stats.mpm_t_anchor = b.mpm_t_anchor.predict(x);
  r.util_offset = std::max(0.0, r.stats.mpm_offset) / b.limits.offset;
  r.util_t_fair = std::max(0.0, r.stats.mpm_t_fair) / b.limits.tension;
  r.util_t_anchor = std::max(0.0, r.stats.mpm_t_anchor) / b.limits.tension;
  r.inference_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline nlohmann::json to_json(const Violation& v) {
  return {{"field", v.field}, {"message", v.message}, {"value", v.value}, {"bound", v.bound}};
}

inline nlohmann::json violations_json(const std::vector<Violation>& vs) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& v : vs) a.push_back(to_json(v));
  return a;
}

inline nlohmann::json state_json(const MetoceanState& s) {
  auto wave = [](const WaveSystem& w) {
    return nlohmann::json{{"hs", w.hs},           {"tp", w.tp},
                          {"theta_p", w.theta_p}, {"gamma", w.gamma},
                          {"sigma_a", w.sigma_a}, {"sigma_b", w.sigma_b}};
  };
  return {{"id", s.id},
          {"wave1", wave(s.wave1)},
          {"wave2", wave(s.wave2)},
          {"wind", {{"uw", s.wind.uw}, {"theta_w", s.wind.theta_w}}},
          {"current", {{"uc", s.current.uc}, {"theta_c", s.current.theta_c}}}};
}

// Parses a state object; missing required members are reported by path.
inline MetoceanState state_from_json(const nlohmann::json& j) {
  std::vector<Violation> v;
  auto num = [&](const nlohmann::json& o, const std::string& path, const char* key,
                 std::optional<double> def = std::nullopt) {
    if (o.is_object() && o.contains(key) && o.at(key).is_number()) return o.at(key).get<double>();
    if (def) return *def;
    v.push_back({path + "." + key, "missing or not a number", 0.0, 0.0});
    return 0.0;
  };
  auto obj = [&](const char* key) -> nlohmann::json {
    if (j.is_object() && j.contains(key) && j.at(key).is_object()) return j.at(key);
    v.push_back({key, "missing object", 0.0, 0.0});
    return nlohmann::json::object();
  };
  MetoceanState s;
  s.id = j.is_object() ? j.value("id", std::string("request")) : "request";
  const auto w1 = obj("wave1");
  const auto w2 = obj("wave2");
  const auto wi = obj("wind");
  const auto cu = obj("current");
  auto wave = [&](const nlohmann::json& o, const std::string& p) {
    WaveSystem w;
    w.hs = num(o, p, "hs");
    w.tp = num(o, p, "tp");
    w.theta_p = num(o, p, "theta_p");
    w.gamma = num(o, p, "gamma", 3.3);
    w.sigma_a = num(o, p, "sigma_a", 0.07);
    w.sigma_b = num(o, p, "sigma_b", 0.09);
    return w;
  };
  s.wave1 = wave(w1, "wave1");
  s.wave2 = wave(w2, "wave2");
  s.wind = {num(wi, "wind", "uw"), num(wi, "wind", "theta_w")};
  s.current = {num(cu, "current", "uc"), num(cu, "current", "theta_c")};
  if (!v.empty()) throw Error("schema", "state: " + v.front().field + " " + v.front().message, v);
  return s;
}

inline nlohmann::json to_json(const PredictionReport& r) {
  return {{"state", state_json(r.state)},
          {"statistics",
           {{"phi_eq", r.stats.phi_eq},
            {"mpm_offset", r.stats.mpm_offset},
            {"offset_dir", r.stats.offset_dir},
            {"mpm_t_fair", r.stats.mpm_t_fair},
            {"mpm_t_anchor", r.stats.mpm_t_anchor}}},
          {"utilization",
           {{"mpm_offset", r.util_offset},
            {"mpm_t_fair", r.util_t_fair},
            {"mpm_t_anchor", r.util_t_anchor}}},
          {"domain_ok", r.domain_ok},
          {"violations", violations_json(r.violations)},
          {"override", r.override_used},
          {"bundle_version", r.bundle_version},
          {"inference_ms", r.inference_ms}};
}

// ---------------------------------------------------------------------------
// Ingestion

// Seconds since the Unix epoch from "YYYY-MM-DDTHH:MM:SS[Z]" or a number.
inline double parse_timestamp(const nlohmann::json& t, const std::string& field) {
  if (t.is_number()) return t.get<double>();
  if (!t.is_string()) throw Error("schema", field + ": expected timestamp",
                                  {{field, "expected timestamp", 0.0, 0.0}});
  const auto s = t.get<std::string>();
  int y, mo, d, h, mi;
  double sec;
  if (std::sscanf(s.c_str(), "%d-%d-%dT%d:%d:%lf", &y, &mo, &d, &h, &mi, &sec) != 6)
    throw Error("schema", field + ": cannot parse '" + s + "'",
                {{field, "bad timestamp", 0.0, 0.0}});
  const std::chrono::year_month_day ymd{std::chrono::year(y), std::chrono::month(mo),
                                        std::chrono::day(d)};
  if (!ymd.ok()) throw Error("schema", field + ": invalid date", {{field, "invalid date", 0.0, 0.0}});
  const auto days = std::chrono::sys_days(ymd).time_since_epoch().count();
  return static_cast<double>(days) * 86400.0 + h * 3600.0 + mi * 60.0 + sec;
}

inline std::string format_timestamp(double epoch) {
  const auto secs = static_cast<std::int64_t>(std::floor(epoch));
  const auto days = std::chrono::sys_days(std::chrono::days(
      static_cast<int>(secs >= 0 ? secs / 86400 : (secs - 86399) / 86400)));
  const std::chrono::year_month_day ymd(days);
  const std::int64_t rem = secs - static_cast<std::int64_t>(days.time_since_epoch().count()) * 86400;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(rem / 3600), static_cast<int>(rem % 3600 / 60),
                static_cast<int>(rem % 60));
  return buf;
}

inline double now_epoch() {
  return std::chrono::duration<double>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

struct BuoyObservation {
  MetoceanState state;
  double timestamp = 0.0;
  bool swell_missing = false;
};

// Reference payload: {timestamp, wave:[{hs,tp,dir},...], wind:{speed,dir},
// current:{speed,dir}}. The first wave entry is the wind sea, the second
// (optional) the swell.
inline BuoyObservation ingest_buoy(const nlohmann::json& p, double now, double max_age = 3600.0) {
  std::vector<Violation> v;
  auto need = [&](const nlohmann::json& o, const std::string& path, const char* key) {
    if (!o.is_object() || !o.contains(key)) {
      v.push_back({path.empty() ? key : path + "." + key, "missing", 0.0, 0.0});
      return false;
    }
    return true;
  };
  auto num = [&](const nlohmann::json& o, const std::string& path, const char* key) {
    if (!need(o, path, key)) return 0.0;
    if (!o.at(key).is_number()) {
      v.push_back({path + "." + key, "not a number", 0.0, 0.0});
      return 0.0;
    }
    return o.at(key).get<double>();
  };
  for (const char* k : {"timestamp", "wave", "wind", "current"}) need(p, "", k);
  if (!v.empty()) throw Error("schema", "buoy payload: missing `" + v.front().field + "`", v);
  if (!p.at("wave").is_array() || p.at("wave").empty() || p.at("wave").size() > 2)
    throw Error("schema", "buoy payload: `wave` must hold 1 or 2 systems",
                {{"wave", "expected 1 or 2 entries", 0.0, 0.0}});

  BuoyObservation o;
  o.timestamp = parse_timestamp(p.at("timestamp"), "timestamp");
  auto wave = [&](std::size_t i) {
    const std::string path = "wave[" + std::to_string(i) + "]";
    const auto& e = p.at("wave")[i];
    WaveSystem w;
    w.hs = num(e, path, "hs");
    w.tp = num(e, path, "tp");
    w.theta_p = wrap360(num(e, path, "dir"));
    return w;
  };
  o.state.wave1 = wave(0);
  if (p.at("wave").size() > 1) {
    o.state.wave2 = wave(1);
  } else {
    o.swell_missing = true;
    o.state.wave2 = WaveSystem{0.0, o.state.wave1.tp, o.state.wave1.theta_p};
  }
  o.state.wind = {num(p.at("wind"), "wind", "speed"), wrap360(num(p.at("wind"), "wind", "dir"))};
  o.state.current = {num(p.at("current"), "current", "speed"),
                     wrap360(num(p.at("current"), "current", "dir"))};
  if (!v.empty()) throw Error("schema", "buoy payload: " + v.front().field + " " + v.front().message, v);
  if (now - o.timestamp > max_age)
    throw Error("stale", "buoy payload is " + std::to_string(now - o.timestamp) +
                             " s old (max " + std::to_string(max_age) + " s)",
                {{"timestamp", "older than max age", now - o.timestamp, max_age}});
  o.state.id = "buoy-" + format_timestamp(o.timestamp);
  require_valid(o.state);
  return o;
}

struct ForecastState {
  double valid_time = 0.0;
  MetoceanState state;
};

// Metocean CSV plus a valid_time column; rows must be strictly increasing
// in time.
inline std::vector<ForecastState> ingest_forecast(const std::string& csv) {
  const auto lines = io::lines_of(csv);
  if (lines.empty()) throw Error("schema", "forecast: empty file");
  const auto header = io::split_csv_line(lines.front());
  auto required = io::metocean_header();
  required.push_back("valid_time");
  const auto col = io::header_map(header, required);
  std::vector<ForecastState> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = io::split_csv_line(lines[i]);
    if (f.size() != header.size())
      throw Error("schema", "forecast line " + std::to_string(i + 1) + ": field count");
    ForecastState fs;
    const auto& t = f[col.at("valid_time")];
    fs.valid_time = parse_timestamp(
        t.find('T') != std::string::npos ? nlohmann::json(t)
                                         : nlohmann::json(io::parse_double(t, "valid_time", i + 1)),
        "valid_time");
    fs.state = io::parse_metocean_fields(f, col, i + 1);
    const auto v = validate_state(fs.state);
    if (!v.empty())
      throw Error("invalid_state", "forecast line " + std::to_string(i + 1) + ": " +
                                       v.front().field + " " + v.front().message,
                  v);
    if (!out.empty()) {
      if (fs.valid_time == out.back().valid_time)
        throw Error("duplicate_time", "forecast: duplicate valid_time at line " +
                                          std::to_string(i + 1));
      if (fs.valid_time < out.back().valid_time)
        throw Error("unordered_time", "forecast: valid_time decreases at line " +
                                          std::to_string(i + 1));
    }
    out.push_back(std::move(fs));
  }
  return out;
}

}  // namespace moorcast
