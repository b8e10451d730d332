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

// moorcast: command-line front end for data generation, training and
// serving.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "moorcast/config.hpp"
#include "moorcast/pipeline.hpp"
#include "moorcast/train.hpp"
#include "moorcast/service.hpp"

namespace fs = std::filesystem;
using namespace moorcast;

namespace {

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
};

Config load(const Globals& g) {
  Config c = g.config.empty() ? Config{} : load_config(g.config);
  if (g.seed) {
    c.dataset.seed = *g.seed;
    c.qd.seed = *g.seed;
    c.train.seed = *g.seed;
  }
  return c;
}

std::string out_dir(const Globals& g, const char* fallback) {
  const std::string d = g.out.empty() ? fallback : g.out;
  fs::create_directories(d);
  return d;
}

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) std::cout << text;
  else io::write_file(g.out, text);
}

void note(const std::string& s) { std::fprintf(stderr, "%s\n", s.c_str()); }

std::vector<std::string> ids_of(const std::vector<MetoceanState>& s) {
  std::vector<std::string> ids;
  for (const auto& x : s) ids.push_back(x.id);
  return ids;
}

TrainingTable read_table(const std::string& path) {
  return io::parse_table_csv(io::read_file(path));
}

// A state from a JSON file, or every row of a metocean CSV.
std::vector<MetoceanState> read_states(const std::string& path) {
  const auto text = io::read_file(path);
  if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
    const auto j = nlohmann::json::parse(text);
    std::vector<MetoceanState> out;
    if (j.is_array())
      for (const auto& e : j) out.push_back(state_from_json(e));
    else
      out.push_back(state_from_json(j));
    return out;
  }
  return io::parse_metocean_csv(text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"moorcast: turret mooring response surrogates"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "JSON configuration file");
  app.add_option("--seed", g.seed, "Override every master seed");
  app.add_option("--out", g.out, "Output file or directory");

  std::string input, bundle_path, table_path;
  bool allow = false;

  auto* cfg_cmd = app.add_subcommand("config", "Print the effective configuration");

  auto* gen = app.add_subcommand("generate", "Sample states and build the training table");
  std::optional<std::size_t> n_states;
  gen->add_option("-n,--states", n_states, "Number of sampled states");

  auto* head = app.add_subcommand("heading", "Equilibrium heading for each state");
  head->add_option("input", input, "Metocean CSV")->required();

  auto* scr = app.add_subcommand("screen", "FD responses and the critical-state screen");
  scr->add_option("input", input, "Metocean CSV")->required();

  auto* sim = app.add_subcommand("simulate", "Time-domain QD statistics for each state");
  sim->add_option("input", input, "Metocean CSV")->required();

  auto* trn = app.add_subcommand("train", "Fit surrogates and write a model bundle");
  trn->add_option("table", table_path, "Training table CSV")->required();
  bool no_tune = false;
  trn->add_flag("--no-tune", no_tune, "Use baseline parameters only");

  auto* tun = app.add_subcommand("tune", "Random search on the offset target");
  tun->add_option("table", table_path, "Training table CSV")->required();
  std::optional<std::size_t> trials;
  tun->add_option("--trials", trials, "Number of trials");

  auto* evl = app.add_subcommand("evaluate", "Held-out metrics of a bundle");
  evl->add_option("bundle", bundle_path, "Model bundle")->required();
  evl->add_option("table", table_path, "Training table CSV")->required();

  auto* srv = app.add_subcommand("serve", "Run the HTTP API");
  srv->add_option("bundle", bundle_path, "Model bundle")->required();
  std::optional<int> port;
  srv->add_option("--port", port, "Listen port");

  auto* prd = app.add_subcommand("predict", "Predict responses for states");
  prd->add_option("bundle", bundle_path, "Model bundle")->required();
  prd->add_option("input", input, "State JSON or metocean CSV")->required();
  prd->add_flag("--allow-extrapolation", allow, "Override the training-domain guard");

  CLI11_PARSE(app, argc, argv);

  try {
    const Config cfg = load(g);

    if (*cfg_cmd) {
      emit(g, nlohmann::json(cfg).dump(2) + "\n");
      return 0;
    }

    if (*gen) {
      auto pc = cfg.pipeline();
      if (n_states) pc.n_states = *n_states;
      const auto dir = out_dir(g, "data");
      const auto r = run_pipeline(pc, [](const std::string& s, std::size_t d, std::size_t t) {
        note(s + " " + std::to_string(d) + "/" + std::to_string(t));
      });
      io::write_file(dir + "/metocean.csv", io::metocean_csv(r.states));
      io::write_file(dir + "/responses.csv", io::responses_csv(ids_of(r.states), r.fd));
      io::write_file(dir + "/table.csv", io::table_csv(r.table));
      auto side = io::table_sidecar(r.table, r.dropped.size());
      nlohmann::json dropped = nlohmann::json::array();
      for (const auto& d : r.dropped)
        dropped.push_back({{"id", d.id}, {"stage", d.stage}, {"reason", d.reason}});
      side["dropped_states"] = dropped;
      side["seconds"] = r.seconds;
      side["config"] = cfg;
      io::write_file(dir + "/table.json", side.dump(2) + "\n");
      note("wrote " + dir + " (" + std::to_string(r.table.size()) + " rows, " +
          std::to_string(r.table.qd_count()) + " QD)");
      return 0;
    }

    if (*head) {
      const auto states = io::parse_metocean_csv(io::read_file(input));
      std::string out = "id,phi_eq,stable_equilibria,degenerate\n";
      for (const auto& s : states) {
        const auto h = solve_equilibrium_heading(cfg.vessel, s);
        std::size_t stable = 0;
        for (const auto& e : h.equilibria) stable += e.stable ? 1 : 0;
        out += s.id + "," + io::fmt(h.phi_eq) + "," + std::to_string(stable) + "," +
               (h.degenerate ? "true" : "false") + "\n";
      }
      emit(g, out);
      return 0;
    }

    if (*scr || *sim) {
      const auto pc = cfg.pipeline();
      const auto states = io::parse_metocean_csv(io::read_file(input));
      std::vector<HeadingSolution> h;
      std::vector<ResponseStatistics> fd;
      std::vector<std::string> err;
      evaluate_fd(pc, states, h, fd, err);
      for (std::size_t i = 0; i < err.size(); ++i)
        if (!err[i].empty()) throw Error("fd_failed", states[i].id + ": " + err[i]);
      if (*scr) {
        const auto sr = screen(pc.mooring, ids_of(states), fd, pc.fd);
        note(std::to_string(sr.flagged.size()) + " critical (" + io::fmt(sr.fraction) + ")");
        for (const auto& id : sr.flagged) note("  " + id);
        emit(g, io::responses_csv(ids_of(states), fd));
        return 0;
      }
      const TableMooring moor(pc.mooring);
      std::vector<ResponseStatistics> qd(states.size());
      for (std::size_t i = 0; i < states.size(); ++i) {
        QdConfig qc = pc.qd;
        qc.seed = qd_state_seed(pc.qd.seed, states[i].id);
        qd[i] = qd_mpm(moor, pc.vessel, states[i], h[i].phi_eq, qc);
      }
      emit(g, io::responses_csv(ids_of(states), qd));
      return 0;
    }

    if (*trn) {
      auto tc = cfg.train;
      if (no_tune) tc.tune = false;
      const auto table = read_table(table_path);
      auto r = train_bundle(table, tc, cfg.serve, cfg.vessel, note);
      const std::string path = g.out.empty() ? "bundle.mcb" : g.out;
      save_bundle(r.bundle, path);
      io::write_file(path + ".report.json", to_json(r.report).dump(2) + "\n");
      note("wrote " + path + " (version " + r.bundle.version + ")");
      for (const auto& t : r.report.targets)
        note(t.target + ": tuned r2=" + io::fmt(t.tuned.r2) + " mae=" + io::fmt(t.tuned.mae));
      return 0;
    }

    if (*tun) {
      const auto table = read_table(table_path);
      const auto rows = table.rows(Split::kTrain);
      ml::Matrix x(rows.size(), table.features.size());
      std::vector<double> y;
      for (std::size_t k = 0; k < rows.size(); ++k) {
        for (std::size_t j = 0; j < x.cols; ++j) x(k, j) = table.x[rows[k]][j];
        y.push_back(table.responses[rows[k]].mpm_offset);
      }
      const auto res = ml::random_search(x, y, table.features, cfg.train.space,
                                         trials.value_or(cfg.train.tune_trials),
                                         cfg.train.seed, cfg.train.cv_folds);
      nlohmann::json h = nlohmann::json::array();
      for (const auto& t : res.history) h.push_back({{"params", t.params}, {"cv_mse", t.cv_mse}});
      emit(g, nlohmann::json{{"best", res.best}, {"best_cv_mse", res.best_cv_mse}, {"history", h}}
                      .dump(2) + "\n");
      return 0;
    }

    if (*evl) {
      const auto b = load_bundle(bundle_path);
      const auto m = evaluate_bundle(b, read_table(table_path));
      nlohmann::json j = nlohmann::json::object();
      for (const auto& [k, v] : m) j[k] = detail::metrics_json(v);
      emit(g, j.dump(2) + "\n");
      return 0;
    }

    if (*prd) {
      const auto b = load_bundle(bundle_path);
      nlohmann::json out = nlohmann::json::array();
      int status = 0;
      for (const auto& s : read_states(input)) {
        try {
          out.push_back(to_json(predict_responses(b, s, {cfg.serve.domain_margin, allow})));
        } catch (const Error& e) {
          out.push_back({{"id", s.id}, {"error", error_body(e.code(), e.what(), e.violations())}});
          status = 2;
        }
      }
      emit(g, out.dump(2) + "\n");
      return status;
    }

    if (*srv) {
      auto sc = cfg.serve;
      if (port) sc.port = *port;
      Service service(load_bundle(bundle_path), sc);
      httplib::Server http;
      service.bind(http);
      service.start_poller();
      note("listening on " + sc.host + ":" + std::to_string(sc.port) + " (bundle " +
          service.bundle().version + ")");
      if (!http.listen(sc.host, sc.port)) throw Error("listen", "cannot bind " + sc.host);
      return 0;
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", e.code().c_str(), e.what());
    for (const auto& v : e.violations())
      std::fprintf(stderr, "  %s: %s (value %g, bound %g)\n", v.field.c_str(), v.message.c_str(),
                   v.value, v.bound);
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
