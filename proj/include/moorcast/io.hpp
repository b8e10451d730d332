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

// CSV and sidecar I/O. Numbers are written in shortest round-trip form, so
// reading a file back reproduces every double exactly.

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "moorcast/dataset.hpp"
#include "moorcast/metocean.hpp"
#include "moorcast/response.hpp"

namespace moorcast::io {

inline std::string fmt(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  for (auto& s : out) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
    while (!s.empty() && s.front() == ' ') s.erase(s.begin());
  }
  return out;
}

inline double parse_double(const std::string& s, const std::string& field,
                           std::size_t line_no) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw Error("schema", "line " + std::to_string(line_no) + ": field " + field +
                              " is not a number: '" + s + "'",
                {{field, "not a number", 0.0, 0.0}});
  return v;
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("io", "cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& data) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("io", "cannot write " + path);
  f << data;
  if (!f) throw Error("io", "write failed for " + path);
}

inline std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Metocean

inline const std::vector<std::string>& metocean_header() {
  static const std::vector<std::string> h = {
      "id",  "hs1", "tp1", "thp1", "gamma1", "siga1", "sigb1", "hs2", "tp2",
      "thp2", "gamma2", "siga2", "sigb2", "uw", "thw", "uc", "thc"};
  return h;
}

inline std::string metocean_row(const MetoceanState& s) {
  std::string r = s.id;
  for (double v : {s.wave1.hs, s.wave1.tp, s.wave1.theta_p, s.wave1.gamma, s.wave1.sigma_a,
                   s.wave1.sigma_b, s.wave2.hs, s.wave2.tp, s.wave2.theta_p, s.wave2.gamma,
                   s.wave2.sigma_a, s.wave2.sigma_b, s.wind.uw, s.wind.theta_w,
                   s.current.uc, s.current.theta_c})
    r += "," + fmt(v);
  return r;
}

inline std::string join(const std::vector<std::string>& v) {
  std::string r;
  for (std::size_t i = 0; i < v.size(); ++i) r += (i ? "," : "") + v[i];
  return r;
}

inline std::string metocean_csv(const std::vector<MetoceanState>& states) {
  std::string out = join(metocean_header()) + "\n";
  for (const auto& s : states) out += metocean_row(s) + "\n";
  return out;
}

// Parses one row given the header-to-column map.
inline MetoceanState parse_metocean_fields(const std::vector<std::string>& f,
                                           const std::map<std::string, std::size_t>& col,
                                           std::size_t line_no) {
  auto get = [&](const std::string& name) {
    return parse_double(f.at(col.at(name)), name, line_no);
  };
  MetoceanState s;
  s.id = f.at(col.at("id"));
  s.wave1 = {get("hs1"), get("tp1"), get("thp1"), get("gamma1"), get("siga1"), get("sigb1")};
  s.wave2 = {get("hs2"), get("tp2"), get("thp2"), get("gamma2"), get("siga2"), get("sigb2")};
  s.wind = {get("uw"), get("thw")};
  s.current = {get("uc"), get("thc")};
  return s;
}

inline std::map<std::string, std::size_t> header_map(
    const std::vector<std::string>& header, const std::vector<std::string>& required) {
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  std::vector<Violation> missing;
  for (const auto& r : required)
    if (!col.count(r)) missing.push_back({r, "missing column", 0.0, 0.0});
  if (!missing.empty())
    throw Error("schema", "missing column '" + missing.front().field + "'", missing);
  return col;
}

inline std::vector<MetoceanState> parse_metocean_csv(const std::string& text) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw Error("schema", "empty metocean CSV");
  const auto header = split_csv_line(lines.front());
  const auto col = header_map(header, metocean_header());
  std::vector<MetoceanState> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split_csv_line(lines[i]);
    if (f.size() != header.size())
      throw Error("schema", "line " + std::to_string(i + 1) + ": expected " +
                                std::to_string(header.size()) + " fields");
    out.push_back(parse_metocean_fields(f, col, i + 1));
    const auto v = validate_state(out.back());
    if (!v.empty())
      throw Error("invalid_state", "line " + std::to_string(i + 1) + ": " + v.front().field +
                                       " " + v.front().message,
                  v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Responses (tensions in kN)

inline const std::vector<std::string>& responses_header() {
  static const std::vector<std::string> h = {
      "id",           "phi_eq",         "mean_x",         "mean_y",
      "mpm_offset_m", "offset_dir_deg", "mpm_tfair_kn",   "mpm_tanchor_kn",
      "sigma_lf",     "sigma_wf",       "source",         "daf_applied"};
  return h;
}

inline std::string responses_csv(const std::vector<std::string>& ids,
                                 const std::vector<ResponseStatistics>& r) {
  std::string out = join(responses_header()) + "\n";
  for (std::size_t i = 0; i < r.size(); ++i) {
    const auto& s = r[i];
    out += ids[i] + "," + fmt(s.phi_eq) + "," + fmt(s.mean_offset.x) + "," +
           fmt(s.mean_offset.y) + "," + fmt(s.mpm_offset) + "," + fmt(s.offset_dir) + "," +
           fmt(s.mpm_t_fair / 1000.0) + "," + fmt(s.mpm_t_anchor / 1000.0) + "," +
           fmt(s.sigma_lf) + "," + fmt(s.sigma_wf) + "," + to_string(s.source) + "," +
           (s.daf_applied ? "true" : "false") + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Training table: a version line, a header, one row per state. Response
// columns are in SI units; targets are derived from them on load.

inline constexpr int kTableSchemaVersion = 1;

inline std::vector<std::string> table_response_columns() {
  return {"phi_eq", "mean_x", "mean_y", "mpm_offset", "offset_dir",
          "mpm_t_fair", "mpm_t_anchor", "sigma_lf", "sigma_wf"};
}

inline std::string table_csv(const TrainingTable& t) {
  std::string out = "# moorcast training table schema_version=" +
                    std::to_string(kTableSchemaVersion) +
                    " feature_version=" + std::to_string(kFeatureVersion) + "\n";
  std::vector<std::string> h = {"id", "split", "source"};
  h.insert(h.end(), t.features.begin(), t.features.end());
  for (const auto& c : table_response_columns()) h.push_back(c);
  out += join(h) + "\n";
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto& r = t.responses[i];
    std::string row = t.ids[i] + "," + (t.split[i] == Split::kTrain ? "train" : "validation") +
                      "," + to_string(r.source);
    for (double v : t.x[i]) row += "," + fmt(v);
    for (double v : {r.phi_eq, r.mean_offset.x, r.mean_offset.y, r.mpm_offset, r.offset_dir,
                     r.mpm_t_fair, r.mpm_t_anchor, r.sigma_lf, r.sigma_wf})
      row += "," + fmt(v);
    out += row + "\n";
  }
  return out;
}

inline nlohmann::json table_sidecar(const TrainingTable& t, std::size_t dropped = 0) {
  nlohmann::json b = nlohmann::json::array();
  for (std::size_t j = 0; j < t.features.size(); ++j)
    b.push_back({{"feature", t.features[j]}, {"min", t.bounds[j].min}, {"max", t.bounds[j].max}});
  const auto n_val = t.rows(Split::kValidation).size();
  return {{"schema_version", kTableSchemaVersion},
          {"feature_version", kFeatureVersion},
          {"features", t.features},
          {"targets", target_names()},
          {"bounds", b},
          {"split_seed", t.split_seed},
          {"split_fraction", t.split_fraction},
          {"counts",
           {{"rows", t.size()},
            {"train", t.size() - n_val},
            {"validation", n_val},
            {"fd", t.size() - t.qd_count()},
            {"qd", t.qd_count()},
            {"dropped", dropped}}}};
}

inline TrainingTable parse_table_csv(const std::string& text) {
  auto lines = lines_of(text);
  if (lines.size() < 2) throw Error("schema", "training table: too short");
  const std::string tag = "schema_version=";
  const auto pos = lines.front().find(tag);
  if (lines.front().rfind("#", 0) != 0 || pos == std::string::npos)
    throw Error("schema", "training table: missing version line");
  const int version = std::stoi(lines.front().substr(pos + tag.size()));
  if (version != kTableSchemaVersion)
    throw Error("version_mismatch",
                "training table schema_version " + std::to_string(version) + " unsupported");
  const auto header = split_csv_line(lines[1]);
  std::vector<std::string> required = {"id", "split", "source"};
  for (const auto& f : feature_names()) required.push_back(f);
  for (const auto& c : table_response_columns()) required.push_back(c);
  const auto col = header_map(header, required);
  TrainingTable t;
  for (std::size_t i = 2; i < lines.size(); ++i) {
    const auto f = split_csv_line(lines[i]);
    if (f.size() != header.size())
      throw Error("schema", "training table line " + std::to_string(i + 1) + ": field count");
    auto num = [&](const std::string& n) { return parse_double(f[col.at(n)], n, i + 1); };
    t.ids.push_back(f[col.at("id")]);
    const auto& sp = f[col.at("split")];
    if (sp != "train" && sp != "validation")
      throw Error("schema", "training table line " + std::to_string(i + 1) + ": bad split");
    t.split.push_back(sp == "train" ? Split::kTrain : Split::kValidation);
    FeatureVector x;
    for (const auto& fn : feature_names()) x.push_back(num(fn));
    t.x.push_back(std::move(x));
    ResponseStatistics r;
    r.source = f[col.at("source")] == "QD" ? ResponseSource::kQD : ResponseSource::kFD;
    r.phi_eq = num("phi_eq");
    r.mean_offset = {num("mean_x"), num("mean_y")};
    r.mpm_offset = num("mpm_offset");
    r.offset_dir = num("offset_dir");
    r.mpm_t_fair = num("mpm_t_fair");
    r.mpm_t_anchor = num("mpm_t_anchor");
    r.sigma_lf = num("sigma_lf");
    r.sigma_wf = num("sigma_wf");
    t.responses.push_back(r);
  }
  t.bounds = training_bounds(t);
  return t;
}

}  // namespace moorcast::io
