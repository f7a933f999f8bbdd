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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <catch2/catch_amalgamated.hpp>

#include "coftrl/config.hpp"
#include "coftrl/experiment.hpp"

using namespace coftrl;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kSelfplayConfig = R"json({
  "experiment": "selfplay",
  "seed": 3,
  "horizon": 32,
  "output_dir": "OUT",
  "game": {"kind": "matching_pennies"},
  "learners": [
    {"algorithm": "coftrl", "regularizer": {"kind": "negentropy"}, "eta": "default", "alpha": "default"},
    {"algorithm": "coftrl", "regularizer": {"kind": "negentropy"}}
  ]
})json";

}  // namespace

TEST_CASE("minimal selfplay config resolves defaults") {
  ExperimentConfig cfg = parse_config(kSelfplayConfig);
  REQUIRE(cfg.experiment == "selfplay");
  REQUIRE(cfg.learners.size() == 2);
  Regularizer reg = Regularizer::neg_entropy(2);
  LearnerParams p = default_params(reg, 2, 2, 1.0);
  for (const LearnerSpec& l : cfg.learners) {
    REQUIRE(l.eta.has_value());
    REQUIRE(*l.eta == Catch::Approx(p.eta));
    REQUIRE(*l.alpha == Catch::Approx(p.alpha));
  }
}

TEST_CASE("config round-trips through serialization") {
  ExperimentConfig cfg = parse_config(kSelfplayConfig);
  std::string text = serialize_config(cfg);
  ExperimentConfig again = parse_config(text);
  REQUIRE(serialize_config(again) == text);
}

TEST_CASE("config errors carry field paths") {
  SECTION("tsallis q out of range") {
    const char* bad = R"json({
      "experiment": "selfplay", "horizon": 8,
      "game": {"kind": "random_general_sum", "players": 2, "actions": 4},
      "learners": [
        {"algorithm": "coftrl", "regularizer": {"kind": "tsallis", "q": 1.5}},
        {"algorithm": "mwu"}
      ]
    })json";
    REQUIRE_THROWS_WITH(parse_config(bad),
                        Catch::Matchers::ContainsSubstring("learners[0].regularizer.q"));
  }
  SECTION("unknown regularizer kind") {
    const char* bad = R"json({
      "experiment": "selfplay", "horizon": 8,
      "game": {"kind": "matching_pennies"},
      "learners": [
        {"algorithm": "coftrl", "regularizer": {"kind": "entropy"}},
        {"algorithm": "mwu"}
      ]
    })json";
    REQUIRE_THROWS_WITH(parse_config(bad), Catch::Matchers::ContainsSubstring("kind"));
  }
  SECTION("learner count must match the game") {
    const char* bad = R"json({
      "experiment": "selfplay", "horizon": 8,
      "game": {"kind": "matching_pennies"},
      "learners": [{"algorithm": "mwu"}]
    })json";
    REQUIRE_THROWS_WITH(parse_config(bad), Catch::Matchers::ContainsSubstring("learners"));
  }
  SECTION("explicit alpha must exceed gamma") {
    const char* bad = R"json({
      "experiment": "selfplay", "horizon": 8,
      "game": {"kind": "random_general_sum", "players": 2, "actions": 8},
      "learners": [
        {"algorithm": "coftrl", "regularizer": {"kind": "negentropy"}, "alpha": 1.0},
        {"algorithm": "mwu"}
      ]
    })json";
    REQUIRE_THROWS_WITH(parse_config(bad),
                        Catch::Matchers::ContainsSubstring("learners[0].alpha"));
  }
  SECTION("horizon must be positive") {
    REQUIRE_THROWS_WITH(parse_config(R"json({"experiment": "verify", "horizon": 0})json"),
                        Catch::Matchers::ContainsSubstring("horizon"));
  }
}

TEST_CASE("selfplay experiment writes deterministic outputs") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "coftrl_test_selfplay";
  fs::remove_all(dir);
  ExperimentConfig cfg = parse_config(kSelfplayConfig);
  cfg.output_dir = (dir / "a").string();
  REQUIRE(run_experiment(cfg) == 0);
  cfg.output_dir = (dir / "b").string();
  REQUIRE(run_experiment(cfg) == 0);

  SECTION("outputs exist and replay byte-identically") {
    std::string traj = slurp(dir / "a" / "trajectory.csv");
    std::string metrics = slurp(dir / "a" / "metrics.csv");
    std::string manifest = slurp(dir / "a" / "manifest.json");
    cfg.output_dir = (dir / "a").string();  // rerun the same config in place
    REQUIRE(run_experiment(cfg) == 0);
    REQUIRE(slurp(dir / "a" / "trajectory.csv") == traj);
    REQUIRE(slurp(dir / "a" / "metrics.csv") == metrics);
    REQUIRE(slurp(dir / "a" / "manifest.json") == manifest);
    // a different output directory changes only the config echo
    REQUIRE(slurp(dir / "b" / "trajectory.csv") == traj);
    REQUIRE(slurp(dir / "b" / "metrics.csv") == metrics);
  }
  SECTION("csv schemas are stable") {
    std::string traj = slurp(dir / "a" / "trajectory.csv");
    REQUIRE(traj.rfind("t,player,lambda,x0,x1,nu0,nu1\n", 0) == 0);
    std::string metrics = slurp(dir / "a" / "metrics.csv");
    REQUIRE(metrics.rfind("t,player,regret,nonneg_regret,cce_gap,path_length\n", 0) == 0);
  }
  SECTION("matching pennies run reports zero regret") {
    std::string metrics = slurp(dir / "a" / "metrics.csv");
    std::istringstream in(metrics);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      std::istringstream row(line);
      std::string t, player, regret;
      std::getline(row, t, ',');
      std::getline(row, player, ',');
      std::getline(row, regret, ',');
      REQUIRE(std::fabs(std::stod(regret)) < 1e-12);
    }
  }
  SECTION("manifest echoes the resolved config and constants") {
    json manifest = json::parse(slurp(dir / "a" / "manifest.json"));
    REQUIRE(manifest["config"]["experiment"] == "selfplay");
    REQUIRE(manifest["constants"].size() == 2);
    REQUIRE(manifest["constants"][0].contains("eta"));
    REQUIRE(manifest["constants"][0].contains("gamma"));
    REQUIRE(manifest["summary"].contains("social_regret"));
  }
  fs::remove_all(dir);
}

TEST_CASE("landscape experiment reproduces the cap quadrant") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "coftrl_test_landscape";
  fs::remove_all(dir);
  const char* text = R"json({
    "experiment": "landscape",
    "output_dir": "OUT",
    "regularizer": {"kind": "negentropy"},
    "eta": 1.0, "alpha": 4.0,
    "grid": {"min": -12.0, "max": 4.0, "points": 9}
  })json";
  ExperimentConfig cfg = parse_config(text);
  cfg.output_dir = dir.string();
  REQUIRE(run_experiment(cfg) == 0);
  std::istringstream in(slurp(dir / "landscape.csv"));
  std::string line;
  std::getline(in, line);
  REQUIRE(line == "r1,r2,lambda");
  int rows = 0;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string a, b, c;
    std::getline(row, a, ',');
    std::getline(row, b, ',');
    std::getline(row, c, ',');
    double r1 = std::stod(a), r2 = std::stod(b), lambda = std::stod(c);
    if (r1 >= 0.0 && r2 >= 0.0) REQUIRE(lambda == 1.0);
    REQUIRE(lambda > 0.0);
    REQUIRE(lambda <= 1.0);
    // deep in the negative quadrant the rate has shrunk well below the cap
    if (r1 == -12.0 && r2 == -12.0) REQUIRE(lambda == Catch::Approx(1.0 / 3.0).margin(1e-6));
    ++rows;
  }
  REQUIRE(rows == 81);
  fs::remove_all(dir);
}

TEST_CASE("adversarial experiment records the switch") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "coftrl_test_adv";
  fs::remove_all(dir);
  const char* text = R"json({
    "experiment": "adversarial",
    "horizon": 8192,
    "actions": 2,
    "learner": {"algorithm": "coftrl", "regularizer": {"kind": "negentropy"}},
    "adversary": {"kind": "alternating"},
    "output_dir": "OUT"
  })json";
  ExperimentConfig cfg = parse_config(text);
  cfg.output_dir = dir.string();
  REQUIRE(run_experiment(cfg) == 0);
  json manifest = json::parse(slurp(dir / "manifest.json"));
  REQUIRE(manifest["summary"]["switched"] == true);
  REQUIRE(manifest["summary"]["switch_round"].get<int>() > 0);
  fs::remove_all(dir);
}

TEST_CASE("verify experiment flags corrupted constants through the suite runner") {
  // negative control: scaling gamma down must fail the IL property by name
  auto reports = verify::run_suite("regularizers", 6, 400, 11, /*gamma_scale=*/0.01);
  bool found = false;
  for (const auto& rep : reports)
    if (!rep.pass && rep.name.rfind("il-inequality/", 0) == 0) found = true;
  REQUIRE(found);
  REQUIRE_FALSE(verify::all_pass(reports));
  REQUIRE_THROWS_AS(verify::run_suite("bogus", 6, 10, 1), std::invalid_argument);
}
