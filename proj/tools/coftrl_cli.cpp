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

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "coftrl/coftrl.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<long> horizon;
  std::optional<std::string> out;

  void apply(coftrl::ExperimentConfig& cfg) const {
    if (seed) cfg.seed = *seed;
    if (horizon) cfg.horizon = *horizon;
    if (out) cfg.output_dir = *out;
  }
};

void add_override_flags(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--seed", ov.seed, "Override the config's seed");
  cmd->add_option("--horizon", ov.horizon, "Override the config's horizon");
  cmd->add_option("--out", ov.out, "Override the config's output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coftrl: no-regret learning in normal-form games with dynamic learning rate control"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides run_ov;
  CLI::App* run = app.add_subcommand("run", "Run an experiment from a config file");
  run->add_option("config", config_path, "JSON experiment config")->required();
  add_override_flags(run, run_ov);

  std::string landscape_path;
  Overrides land_ov;
  CLI::App* land =
      app.add_subcommand("landscape", "Evaluate the learning-rate landscape from a config file");
  land->add_option("config", landscape_path, "JSON landscape config")->required();
  add_override_flags(land, land_ov);

  std::string suite = "all";
  int dim = 8;
  long samples = 10000;
  std::uint64_t vseed = 1;
  std::string vout;
  CLI::App* ver = app.add_subcommand("verify", "Run a numeric verification suite");
  ver->add_option("suite", suite, "regularizers | solvers | learners | harness | all");
  ver->add_option("--dim", dim, "Simplex dimension for the sampled checks");
  ver->add_option("--samples", samples, "Sample count per property");
  ver->add_option("--seed", vseed, "Random seed");
  ver->add_option("--out", vout, "Directory for the verify report (optional)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      coftrl::ExperimentConfig cfg = coftrl::parse_config(read_file(config_path));
      run_ov.apply(cfg);
      return coftrl::run_experiment(cfg);
    }
    if (land->parsed()) {
      coftrl::ExperimentConfig cfg = coftrl::parse_config(read_file(landscape_path));
      if (cfg.experiment != "landscape")
        throw std::runtime_error("landscape subcommand expects a landscape config");
      land_ov.apply(cfg);
      return coftrl::run_experiment(cfg);
    }
    if (ver->parsed()) {
      auto reports = coftrl::verify::run_suite(suite, dim, samples, vseed);
      std::string text = coftrl::verify::format_report(reports);
      std::fputs(text.c_str(), stdout);
      if (!vout.empty()) {
        std::filesystem::create_directories(vout);
        std::ofstream out(std::filesystem::path(vout) / "verify_report.txt", std::ios::binary);
        out << text;
      }
      return coftrl::verify::all_pass(reports) ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
