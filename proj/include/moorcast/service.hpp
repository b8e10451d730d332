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

// HTTP service over the serving layer. Handlers are plain functions of
// (method, path, body) so tests drive them without a socket; bind() mounts
// them on an httplib server.
//
// Routes: POST /predict, POST /whatif, GET /forecast, GET /domain,
// GET /limits, GET /health. Errors carry {code, message, violations}.

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

// Eigen first: the resolver headers pulled in by httplib define _res.
#include <Eigen/Dense>
#include <httplib.h>
#include <json.hpp>

#include "moorcast/config.hpp"
#include "moorcast/serve.hpp"

namespace moorcast {

struct HttpReply {
  int status = 200;
  nlohmann::json body;
};

// Buoy adapter; the file client is the reference implementation.
class BuoyClient {
 public:
  virtual ~BuoyClient() = default;
  virtual BuoyObservation fetch(double now) = 0;
};

class FileBuoyClient : public BuoyClient {
 public:
  FileBuoyClient(std::string path, double max_age) : path_(std::move(path)), max_age_(max_age) {}
  BuoyObservation fetch(double now) override {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(io::read_file(path_));
    } catch (const nlohmann::json::exception& e) {
      throw Error("schema", path_ + ": " + e.what());
    }
    return ingest_buoy(j, now, max_age_);
  }

 private:
  std::string path_;
  double max_age_;
};

struct ForecastEntry {
  double valid_time = 0.0;
  std::optional<PredictionReport> report;
  std::string error_code;  // set when report is empty
  std::string error_message;
  std::vector<Violation> violations;
};

struct ForecastSnapshot {
  double ingested_at = 0.0;
  std::vector<ForecastEntry> entries;
  std::optional<PredictionReport> observed;
  std::string observed_error;
};

inline nlohmann::json error_body(const std::string& code, const std::string& message,
                                 const std::vector<Violation>& v = {}) {
  return {{"code", code}, {"message", message}, {"violations", violations_json(v)}};
}

inline int http_status(const std::string& code) {
  if (code == "out_of_domain") return 422;
  if (code == "schema" || code == "invalid_state" || code == "bad_request") return 400;
  if (code == "stale") return 409;
  if (code == "not_found") return 404;
  return 500;
}

class Service {
 public:
  Service(ModelBundle bundle, ServeConfig cfg)
      : bundle_(std::move(bundle)),
        cfg_(std::move(cfg)),
        started_(std::chrono::steady_clock::now()),
        snapshot_(std::make_shared<const ForecastSnapshot>()) {
    if (!cfg_.buoy_path.empty())
      buoy_ = std::make_unique<FileBuoyClient>(cfg_.buoy_path, cfg_.max_buoy_age);
  }
  ~Service() { stop_poller(); }
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  const ModelBundle& bundle() const { return bundle_; }
  const ServeConfig& config() const { return cfg_; }
  void set_buoy_client(std::unique_ptr<BuoyClient> c) { buoy_ = std::move(c); }

  HttpReply handle(const std::string& method, const std::string& path,
                   const std::string& body) const {
    try {
      if (method == "POST" && path == "/predict") return predict(body);
      if (method == "POST" && path == "/whatif") return whatif(body);
      if (method == "GET" && path == "/forecast") return {200, forecast_json()};
      if (method == "GET" && path == "/domain") return {200, domain_json()};
      if (method == "GET" && path == "/limits") return {200, limits_json()};
      if (method == "GET" && path == "/health") return {200, health_json()};
      return {404, error_body("not_found", method + " " + path)};
    } catch (const Error& e) {
      return {http_status(e.code()), error_body(e.code(), e.what(), e.violations())};
    } catch (const std::exception& e) {
      return {500, error_body("internal", e.what())};
    }
  }

  // Readers take a reference-counted copy; the writer swaps the pointer.
  std::shared_ptr<const ForecastSnapshot> snapshot() const {
    std::lock_guard lk(snap_mu_);
    return snapshot_;
  }

  // Predicts every forecast state (without override) and publishes the
  // window together with the latest buoy observation, if any.
  void publish(const std::vector<ForecastState>& window, double now) {
    auto s = std::make_shared<ForecastSnapshot>();
    s->ingested_at = now;
    for (const auto& f : window) {
      ForecastEntry e;
      e.valid_time = f.valid_time;
      try {
        e.report = predict_responses(bundle_, f.state, {cfg_.domain_margin, false});
      } catch (const Error& err) {
        e.error_code = err.code();
        e.error_message = err.what();
        e.violations = err.violations();
      }
      s->entries.push_back(std::move(e));
    }
    if (buoy_) {
      try {
        const auto obs = buoy_->fetch(now);
        s->observed = predict_responses(bundle_, obs.state, {cfg_.domain_margin, false});
      } catch (const Error& err) {
        s->observed_error = err.code() + ": " + err.what();
      }
    }
    std::lock_guard lk(snap_mu_);
    snapshot_ = std::move(s);
  }

  // One ingestion cycle from the configured forecast file.
  void poll_once(double now) {
    std::vector<ForecastState> window;
    if (!cfg_.forecast_path.empty()) window = ingest_forecast(io::read_file(cfg_.forecast_path));
    publish(window, now);
  }

  void start_poller() {
    if (poller_.joinable()) return;
    stop_ = false;
    poller_ = std::thread([this] {
      const auto period = std::chrono::duration<double>(cfg_.forecast_cadence_h * 3600.0);
      std::unique_lock lk(stop_mu_);
      while (!stop_) {
        lk.unlock();
        try {
          poll_once(now_epoch());
        } catch (const std::exception&) {
          // keep the previous snapshot; the next cycle retries
        }
        lk.lock();
        stop_cv_.wait_for(lk, period, [this] { return stop_.load(); });
      }
    });
  }

  void stop_poller() {
    {
      std::lock_guard lk(stop_mu_);
      stop_ = true;
    }
    stop_cv_.notify_all();
    if (poller_.joinable()) poller_.join();
  }

  void bind(httplib::Server& srv) const {
    auto route = [this](const std::string& method) {
      return [this, method](const httplib::Request& req, httplib::Response& res) {
        const auto r = handle(method, req.path, req.body);
        res.status = r.status;
        res.set_header("Access-Control-Allow-Origin", "*");
        res.set_content(r.body.dump(), "application/json");
      };
    };
    for (const char* p : {"/forecast", "/domain", "/limits", "/health"}) srv.Get(p, route("GET"));
    for (const char* p : {"/predict", "/whatif"}) srv.Post(p, route("POST"));
    srv.Options(".*", [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Origin", "*");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.status = 204;
    });
  }

 private:
  static nlohmann::json parse_body(const std::string& body) {
    try {
      return nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
      throw Error("bad_request", std::string("body is not JSON: ") + e.what());
    }
  }

  static bool override_flag(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("override")) return false;
    if (!j.at("override").is_boolean())
      throw Error("schema", "override must be boolean", {{"override", "expected boolean", 0, 0}});
    return j.at("override").get<bool>();
  }

  HttpReply predict(const std::string& body) const {
    const auto j = parse_body(body);
    const auto s = state_from_json(j.is_object() && j.contains("state") ? j.at("state") : j);
    return {200, to_json(predict_responses(bundle_, s, {cfg_.domain_margin, override_flag(j)}))};
  }

  // Accepts a bare array of states or {states: [...], override}. Each item
  // is a report or an error object; one bad state does not fail the batch.
  HttpReply whatif(const std::string& body) const {
    const auto j = parse_body(body);
    const bool ov = override_flag(j);
    const auto& arr = j.is_array() ? j : (j.is_object() && j.contains("states") ? j.at("states")
                                                                                 : j);
    if (!arr.is_array()) throw Error("schema", "whatif: expected an array of states",
                                     {{"states", "expected array", 0, 0}});
    nlohmann::json out = nlohmann::json::array();
    for (const auto& item : arr) {
      try {
        out.push_back(to_json(predict_responses(bundle_, state_from_json(item),
                                                {cfg_.domain_margin, ov})));
      } catch (const Error& e) {
        out.push_back({{"error", error_body(e.code(), e.what(), e.violations())}});
      }
    }
    return {200, out};
  }

  nlohmann::json forecast_json() const {
    const auto s = snapshot();
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : s->entries) {
      nlohmann::json o = {{"valid_time", format_timestamp(e.valid_time)}};
      if (e.report) o["report"] = to_json(*e.report);
      else o["error"] = error_body(e.error_code, e.error_message, e.violations);
      entries.push_back(o);
    }
    nlohmann::json out = {{"ingested_at", s->ingested_at > 0.0
                                              ? nlohmann::json(format_timestamp(s->ingested_at))
                                              : nlohmann::json()},
                          {"cadence_h", cfg_.forecast_cadence_h},
                          {"window_h", cfg_.forecast_window_h},
                          {"entries", entries}};
    out["observed"] = s->observed ? to_json(*s->observed) : nlohmann::json();
    if (!s->observed_error.empty()) out["observed_error"] = s->observed_error;
    return out;
  }

  nlohmann::json domain_json() const {
    nlohmann::json f = nlohmann::json::array();
    for (std::size_t j = 0; j < bundle_.features.size(); ++j)
      f.push_back({{"feature", bundle_.features[j]},
                   {"min", bundle_.bounds[j].min},
                   {"max", bundle_.bounds[j].max}});
    return {{"features", f}, {"margin", cfg_.domain_margin}};
  }

  nlohmann::json limits_json() const {
    return {{"tension", bundle_.limits.tension}, {"offset", bundle_.limits.offset}};
  }

  nlohmann::json health_json() const {
    const double up = std::chrono::duration<double>(std::chrono::steady_clock::now() - started_)
                          .count();
    return {{"status", "ok"},
            {"bundle_version", bundle_.version},
            {"uptime_s", up},
            {"forecast_entries", snapshot()->entries.size()}};
  }

  ModelBundle bundle_;
  ServeConfig cfg_;
  std::chrono::steady_clock::time_point started_;
  std::unique_ptr<BuoyClient> buoy_;

  mutable std::mutex snap_mu_;
  std::shared_ptr<const ForecastSnapshot> snapshot_;

  std::thread poller_;
  std::mutex stop_mu_;
  std::condition_variable stop_cv_;
  std::atomic<bool> stop_{false};
};

}  // namespace moorcast
