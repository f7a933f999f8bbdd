// Copyright 2026 The coftrl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "coftrl/config.hpp"
#include "coftrl/harness.hpp"
#include "coftrl/verify.hpp"

namespace coftrl {

// CSV numbers use 17 significant digits so a replay parses back the exact
// double.
inline std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// trajectory.csv: one row per (round, player). Players with fewer actions
// than the widest one leave the trailing cells empty.
inline void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
  std::size_t dmax = 0;
  for (const PlayerRecord& rec : traj.players)
    dmax = std::max(dmax, rec.actions.front().size());
  out << "t,player,lambda";
  for (std::size_t k = 0; k < dmax; ++k) out << ",x" << k;
  for (std::size_t k = 0; k < dmax; ++k) out << ",nu" << k;
  out << "\n";
  for (long t = 0; t < traj.horizon; ++t)
    for (std::size_t i = 0; i < traj.players.size(); ++i) {
      const PlayerRecord& rec = traj.players[i];
      out << (t + 1) << "," << i << "," << csv_number(rec.lambdas[t]);
      for (std::size_t k = 0; k < dmax; ++k) {
        out << ",";
        if (k < rec.actions[t].size()) out << csv_number(rec.actions[t][k]);
      }
      for (std::size_t k = 0; k < dmax; ++k) {
        out << ",";
        if (k < rec.utilities[t].size()) out << csv_number(rec.utilities[t][k]);
      }
      out << "\n";
    }
}

// metrics.csv: per-player rows sampled at powers of two and at the horizon.
// cce_gap and path_length are trajectory-level prefix values, repeated on
// each player's row.
inline void write_metrics_csv(const Trajectory& traj, std::ostream& out) {
  out << "t,player,regret,nonneg_regret,cce_gap,path_length\n";
  std::vector<long> samples;
  for (long t = 1; t < traj.horizon; t *= 2) samples.push_back(t);
  samples.push_back(traj.horizon);
  for (long t : samples) {
    double gap = 0.0;
    if (traj.game.has_value()) {
      Trajectory prefix;  // shallow prefix view for the gap computation
      prefix.game = traj.game;
      prefix.horizon = t;
      prefix.players = traj.players;
      gap = cce_gap(prefix);
    }
    double path = 0.0;
    for (const PlayerRecord& rec : traj.players)
      for (long u = 0; u + 1 < t; ++u) {
        double d = l1_distance(rec.actions[u + 1], rec.actions[u]);
        path += d * d;
      }
    for (std::size_t i = 0; i < traj.players.size(); ++i) {
      double reg = external_regret(traj, static_cast<int>(i), t);
      out << t << "," << i << "," << csv_number(reg) << "," << csv_number(std::max(0.0, reg))
          << "," << csv_number(gap) << "," << csv_number(path) << "\n";
    }
  }
}

namespace detail {

inline json player_constants_json(const PlayerRecord& rec) {
  json j;
  j["algorithm"] = rec.algorithm;
  j["eta"] = rec.eta;
  if (rec.alpha != 0.0) {
    j["alpha"] = rec.alpha;
    j["gamma"] = rec.gamma;
    j["mu"] = rec.mu;
    j["r_max"] = std::isfinite(rec.r_max) ? json(rec.r_max) : json("inf");
    j["max_regret_step"] = rec.max_regret_step;
  }
  return j;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
}

}  // namespace detail

// Runs the configured experiment and writes its outputs (trajectory.csv,
// metrics.csv / landscape.csv, manifest.json) into cfg.output_dir. Returns 0
// on success; verify experiments return 1 when a property fails.
inline int run_experiment(const ExperimentConfig& cfg) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.output_dir);
  json manifest;
  manifest["config"] = json::parse(serialize_config(cfg));
  std::vector<std::string> outputs;
  int exit_code = 0;

  if (cfg.experiment == "selfplay") {
    NormalFormGame game = cfg.game.build(cfg.seed);
    std::vector<std::unique_ptr<Learner>> learners;
    for (int i = 0; i < game.players(); ++i)
      learners.push_back(build_learner(cfg.learners[i], game.actions(i)));
    Trajectory traj = self_play(game, learners, cfg.horizon, cfg.seed);
    {
      std::ofstream out(fs::path(cfg.output_dir) / "trajectory.csv", std::ios::binary);
      write_trajectory_csv(traj, out);
      outputs.push_back("trajectory.csv");
    }
    {
      std::ofstream out(fs::path(cfg.output_dir) / "metrics.csv", std::ios::binary);
      write_metrics_csv(traj, out);
      outputs.push_back("metrics.csv");
    }
    Metrics m = compute_metrics(traj);
    json constants = json::array();
    for (const PlayerRecord& rec : traj.players)
      constants.push_back(detail::player_constants_json(rec));
    manifest["constants"] = constants;
    manifest["summary"] = {{"external_regret", m.external_regret},
                           {"social_regret", m.social_regret},
                           {"cce_gap", m.cce_gap},
                           {"path_length", m.path_length}};
  } else if (cfg.experiment == "adversarial") {
    Regularizer reg = cfg.learner.regularizer.build(cfg.actions);
    CoftrlLearner inner(reg, *cfg.learner.eta, *cfg.learner.alpha);
    BaselineLearner fallback =
        BaselineLearner::mwu(cfg.actions, mwu_default_eta(cfg.actions, cfg.horizon));
    SafeguardedLearner learner(std::move(inner), std::move(fallback), cfg.params_players, 1.0);
    Adversary adv;
    if (cfg.adversary == "alternating") {
      int d = cfg.actions;
      adv = [d](int t, const Vec&) {
        Vec nu(d);
        for (int k = 0; k < d; ++k) nu[k] = ((t + k) % 2 == 0) ? 1.0 : -1.0;
        return nu;
      };
    } else {  // zero
      int d = cfg.actions;
      adv = [d](int, const Vec&) { return Vec(d, 0.0); };
    }
    Trajectory traj = adversarial_play(learner, adv, cfg.horizon);
    {
      std::ofstream out(fs::path(cfg.output_dir) / "trajectory.csv", std::ios::binary);
      write_trajectory_csv(traj, out);
      outputs.push_back("trajectory.csv");
    }
    {
      std::ofstream out(fs::path(cfg.output_dir) / "metrics.csv", std::ios::binary);
      write_metrics_csv(traj, out);
      outputs.push_back("metrics.csv");
    }
    manifest["constants"] = json::array({detail::player_constants_json(traj.players[0])});
    manifest["summary"] = {{"external_regret", external_regret(traj, 0)},
                           {"switched", traj.switch_round >= 0},
                           {"switch_round", traj.switch_round}};
  } else if (cfg.experiment == "landscape") {
    Regularizer reg = cfg.landscape.regularizer.build(2);
    std::vector<std::pair<double, double>> grid;
    const int n = cfg.landscape.grid_points;
    const double lo = cfg.landscape.grid_min, hi = cfg.landscape.grid_max;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        grid.emplace_back(lo + (hi - lo) * i / (n - 1), lo + (hi - lo) * j / (n - 1));
    Vec lambdas = landscape_grid(reg, cfg.landscape.eta, cfg.landscape.alpha, grid);
    std::ofstream out(fs::path(cfg.output_dir) / "landscape.csv", std::ios::binary);
    out << "r1,r2,lambda\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
      out << csv_number(grid[i].first) << "," << csv_number(grid[i].second) << ","
          << csv_number(lambdas[i]) << "\n";
    outputs.push_back("landscape.csv");
    RegularizerConstants c = reg.constants();
    manifest["constants"] =
        json::array({{{"gamma", c.gamma}, {"mu", c.mu}, {"eta", cfg.landscape.eta},
                      {"alpha", cfg.landscape.alpha}}});
  } else if (cfg.experiment == "verify") {
    auto reports =
        verify::run_suite(cfg.suite, cfg.verify_dim, cfg.verify_samples, cfg.seed);
    std::string text = verify::format_report(reports);
    std::fputs(text.c_str(), stdout);
    detail::write_file(fs::path(cfg.output_dir) / "verify_report.txt", text);
    outputs.push_back("verify_report.txt");
    exit_code = verify::all_pass(reports) ? 0 : 1;
    manifest["summary"] = {{"all_pass", exit_code == 0}};
  } else {
    throw ConfigError("experiment", "unknown kind '" + cfg.experiment + "'");
  }

  manifest["outputs"] = outputs;
  detail::write_file(fs::path(cfg.output_dir) / "manifest.json", manifest.dump(2) + "\n");
  return exit_code;
}

}  // namespace coftrl
