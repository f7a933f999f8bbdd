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

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "coftrl/common.hpp"
#include "coftrl/game.hpp"
#include "coftrl/learners.hpp"
#include "coftrl/regularizers.hpp"

namespace coftrl {

using json = nlohmann::json;

// Thrown on malformed configuration documents; the message carries the path
// of the offending field.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& path, const std::string& what)
      : std::invalid_argument(path + ": " + what) {}
};

// Regularizer descriptor. Hyperparameters may be given explicitly or as the
// token "default", which resolves to p* = 1 + 1/log d (squared_lp) and
// q* = 1 - 1/log d (tsallis) at load time.
struct RegularizerSpec {
  std::string kind;  // negentropy | log | squared_lp | tsallis | combination
  std::optional<double> p;
  std::optional<double> q;
  std::vector<std::pair<double, RegularizerSpec>> parts;

  Regularizer build(int dim) const {
    if (kind == "negentropy") return Regularizer::neg_entropy(dim);
    if (kind == "log") return Regularizer::log_reg(dim);
    if (kind == "squared_lp")
      return p ? Regularizer::squared_lp(dim, *p) : Regularizer::squared_lp_star(dim);
    if (kind == "tsallis")
      return q ? Regularizer::tsallis_q(dim, *q) : Regularizer::tsallis_q_star(dim);
    if (kind == "combination") {
      std::vector<std::pair<double, Regularizer>> built;
      for (const auto& [w, part] : parts) built.emplace_back(w, part.build(dim));
      return combine(std::move(built));
    }
    throw ConfigError("regularizer.kind", "unknown kind '" + kind + "'");
  }
};

struct LearnerSpec {
  std::string algorithm;  // coftrl | oftrl | mwu | omwu
  RegularizerSpec regularizer{"negentropy", {}, {}, {}};
  std::optional<double> eta;    // resolved value; empty means "default"
  std::optional<double> alpha;  // coftrl only
};

struct GameSpec {
  std::string kind;  // matching_pennies | rock_paper_scissors | random_general_sum | random_zero_sum
  int players = 2;
  int actions = 2;
  double smoothness = 1.0;

  NormalFormGame build(std::uint64_t seed) const {
    if (kind == "matching_pennies") return matching_pennies();
    if (kind == "rock_paper_scissors") return rock_paper_scissors();
    if (kind == "random_general_sum")
      return random_general_sum(players, actions, seed, smoothness);
    if (kind == "random_zero_sum") return random_zero_sum(actions, seed, smoothness);
    throw ConfigError("game.kind", "unknown kind '" + kind + "'");
  }

  int player_count() const {
    if (kind == "matching_pennies" || kind == "rock_paper_scissors" ||
        kind == "random_zero_sum")
      return 2;
    return players;
  }

  int action_count(int player) const {
    if (kind == "matching_pennies") return 2;
    if (kind == "rock_paper_scissors") return 3;
    (void)player;
    return actions;
  }
};

struct LandscapeSpec {
  RegularizerSpec regularizer{"negentropy", {}, {}, {}};
  double eta = 1.0;
  double alpha = 4.0;
  double grid_min = -30.0;
  double grid_max = 5.0;
  int grid_points = 36;
};

struct ExperimentConfig {
  std::string experiment;  // selfplay | adversarial | landscape | verify
  std::uint64_t seed = 0;
  long horizon = 1;
  std::string output_dir = ".";
  // selfplay
  GameSpec game;
  std::vector<LearnerSpec> learners;
  // adversarial
  int actions = 2;
  LearnerSpec learner;
  std::string adversary = "alternating";  // alternating | zero
  int params_players = 1;                 // n used to resolve default eta
  // landscape
  LandscapeSpec landscape;
  // verify
  std::string suite = "all";
  int verify_dim = 8;
  long verify_samples = 10000;
};

namespace detail {

inline const json& require(const json& j, const std::string& key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(path + "." + key, "missing field");
  return *it;
}

inline double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  return j.get<double>();
}

// A hyperparameter field that is either a number or the token "default";
// absent counts as default.
inline std::optional<double> optional_number(const json& j, const std::string& key,
                                             const std::string& path) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (it->is_string()) {
    if (it->get<std::string>() == "default") return std::nullopt;
    throw ConfigError(path + "." + key, "expected a number or \"default\"");
  }
  return number_at(*it, path + "." + key);
}

inline RegularizerSpec parse_regularizer(const json& j, const std::string& path, int dim);

inline RegularizerSpec parse_regularizer(const json& j, const std::string& path, int dim) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  RegularizerSpec spec;
  spec.kind = require(j, "kind", path).get<std::string>();
  if (spec.kind == "squared_lp") {
    spec.p = optional_number(j, "p", path);
    if (!spec.p) spec.p = 1.0 + 1.0 / std::log(static_cast<double>(dim));  // p*
    if (!(*spec.p > 1.0 && *spec.p <= 2.0))
      throw ConfigError(path + ".p", "p must lie in (1, 2]");
  } else if (spec.kind == "tsallis") {
    spec.q = optional_number(j, "q", path);
    if (!spec.q) spec.q = 1.0 - 1.0 / std::log(static_cast<double>(dim));  // q*
    if (!(*spec.q > 0.0 && *spec.q < 1.0))
      throw ConfigError(path + ".q", "q must lie in (0, 1)");
  } else if (spec.kind == "combination") {
    const json& parts = require(j, "parts", path);
    if (!parts.is_array() || parts.empty())
      throw ConfigError(path + ".parts", "expected a non-empty array");
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const std::string ppath = path + ".parts[" + std::to_string(i) + "]";
      double w = number_at(require(parts[i], "weight", ppath), ppath + ".weight");
      if (!(w > 0.0)) throw ConfigError(ppath + ".weight", "weight must be positive");
      spec.parts.emplace_back(
          w, parse_regularizer(require(parts[i], "regularizer", ppath), ppath + ".regularizer",
                               dim));
    }
  } else if (spec.kind != "negentropy" && spec.kind != "log") {
    throw ConfigError(path + ".kind", "unknown regularizer kind '" + spec.kind + "'");
  }
  return spec;
}

inline LearnerSpec parse_learner(const json& j, const std::string& path, int dim, int n_players,
                                 double smoothness, long horizon) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  LearnerSpec spec;
  spec.algorithm = require(j, "algorithm", path).get<std::string>();
  if (spec.algorithm != "coftrl" && spec.algorithm != "oftrl" && spec.algorithm != "mwu" &&
      spec.algorithm != "omwu")
    throw ConfigError(path + ".algorithm", "unknown algorithm '" + spec.algorithm + "'");
  if (auto it = j.find("regularizer"); it != j.end())
    spec.regularizer = parse_regularizer(*it, path + ".regularizer", dim);
  else if (spec.algorithm == "coftrl" || spec.algorithm == "oftrl")
    throw ConfigError(path + ".regularizer", "missing field");

  Regularizer reg = spec.regularizer.build(dim);
  RegularizerConstants c = reg.constants();
  LearnerParams defaults = default_params(reg, dim, n_players, smoothness);

  spec.eta = optional_number(j, "eta", path);
  spec.alpha = optional_number(j, "alpha", path);
  if (!spec.eta) {
    if (spec.algorithm == "mwu")
      spec.eta = mwu_default_eta(dim, horizon);
    else
      spec.eta = defaults.eta;  // oftrl and omwu share the coftrl cap
  }
  if (spec.algorithm == "coftrl") {
    if (!spec.alpha) spec.alpha = defaults.alpha;
    if (!c.is_local && !(*spec.alpha > c.gamma))
      throw ConfigError(path + ".alpha", "alpha must exceed the regularizer's gamma");
  } else if (spec.alpha) {
    throw ConfigError(path + ".alpha", "alpha applies to coftrl only");
  }
  if (!(*spec.eta > 0.0)) throw ConfigError(path + ".eta", "eta must be positive");
  return spec;
}

inline json regularizer_to_json(const RegularizerSpec& spec) {
  json j;
  j["kind"] = spec.kind;
  if (spec.p) j["p"] = *spec.p;
  if (spec.q) j["q"] = *spec.q;
  if (!spec.parts.empty()) {
    json parts = json::array();
    for (const auto& [w, part] : spec.parts)
      parts.push_back({{"weight", w}, {"regularizer", regularizer_to_json(part)}});
    j["parts"] = parts;
  }
  return j;
}

inline json learner_to_json(const LearnerSpec& spec) {
  json j;
  j["algorithm"] = spec.algorithm;
  j["regularizer"] = regularizer_to_json(spec.regularizer);
  if (spec.eta) j["eta"] = *spec.eta;
  if (spec.alpha) j["alpha"] = *spec.alpha;
  return j;
}

}  // namespace detail

// Builds a learner from a resolved spec.
inline std::unique_ptr<Learner> build_learner(const LearnerSpec& spec, int dim) {
  Regularizer reg = spec.regularizer.build(dim);
  if (spec.algorithm == "coftrl")
    return std::make_unique<CoftrlLearner>(reg, *spec.eta, *spec.alpha);
  if (spec.algorithm == "oftrl")
    return std::make_unique<BaselineLearner>(BaselineLearner::fixed_oftrl(reg, *spec.eta));
  if (spec.algorithm == "mwu")
    return std::make_unique<BaselineLearner>(BaselineLearner::mwu(dim, *spec.eta));
  if (spec.algorithm == "omwu")
    return std::make_unique<BaselineLearner>(BaselineLearner::omwu(dim, *spec.eta));
  throw ConfigError("learner.algorithm", "unknown algorithm '" + spec.algorithm + "'");
}

// Parses a configuration document and resolves every "default" token into a
// concrete number, so the returned config fully determines the run.
inline ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", e.what());
  }
  ExperimentConfig cfg;
  cfg.experiment = detail::require(j, "experiment", "").get<std::string>();
  if (auto it = j.find("seed"); it != j.end()) cfg.seed = it->get<std::uint64_t>();
  if (auto it = j.find("horizon"); it != j.end()) cfg.horizon = it->get<long>();
  if (auto it = j.find("output_dir"); it != j.end()) cfg.output_dir = it->get<std::string>();
  if (cfg.horizon < 1) throw ConfigError("horizon", "must be >= 1");

  if (cfg.experiment == "selfplay") {
    const json& gj = detail::require(j, "game", "");
    cfg.game.kind = detail::require(gj, "kind", "game").get<std::string>();
    if (auto it = gj.find("players"); it != gj.end()) cfg.game.players = it->get<int>();
    if (auto it = gj.find("actions"); it != gj.end()) cfg.game.actions = it->get<int>();
    if (auto it = gj.find("smoothness"); it != gj.end())
      cfg.game.smoothness = detail::number_at(*it, "game.smoothness");
    if (cfg.game.kind != "matching_pennies" && cfg.game.kind != "rock_paper_scissors" &&
        cfg.game.kind != "random_general_sum" && cfg.game.kind != "random_zero_sum")
      throw ConfigError("game.kind", "unknown kind '" + cfg.game.kind + "'");
    if (cfg.game.players < 2) throw ConfigError("game.players", "need at least 2 players");
    if (cfg.game.actions < 2) throw ConfigError("game.actions", "need at least 2 actions");
    const json& lj = detail::require(j, "learners", "");
    if (!lj.is_array()) throw ConfigError("learners", "expected an array");
    int n = cfg.game.player_count();
    if (static_cast<int>(lj.size()) != n)
      throw ConfigError("learners", "expected one learner per player (" + std::to_string(n) +
                                        ")");
    for (int i = 0; i < n; ++i)
      cfg.learners.push_back(detail::parse_learner(lj[i], "learners[" + std::to_string(i) + "]",
                                                   cfg.game.action_count(i), n,
                                                   cfg.game.smoothness, cfg.horizon));
  } else if (cfg.experiment == "adversarial") {
    if (auto it = j.find("actions"); it != j.end()) cfg.actions = it->get<int>();
    if (cfg.actions < 2) throw ConfigError("actions", "need at least 2 actions");
    if (auto it = j.find("params_players"); it != j.end()) cfg.params_players = it->get<int>();
    if (auto it = j.find("adversary"); it != j.end()) {
      cfg.adversary = detail::require(*it, "kind", "adversary").get<std::string>();
      if (cfg.adversary != "alternating" && cfg.adversary != "zero")
        throw ConfigError("adversary.kind", "unknown kind '" + cfg.adversary + "'");
    }
    cfg.learner = detail::parse_learner(detail::require(j, "learner", ""), "learner",
                                        cfg.actions, cfg.params_players, 1.0, cfg.horizon);
    if (cfg.learner.algorithm != "coftrl")
      throw ConfigError("learner.algorithm", "adversarial runs use a safeguarded coftrl learner");
  } else if (cfg.experiment == "landscape") {
    cfg.landscape.regularizer =
        detail::parse_regularizer(detail::require(j, "regularizer", ""), "regularizer", 2);
    if (auto it = j.find("eta"); it != j.end())
      cfg.landscape.eta = detail::number_at(*it, "eta");
    if (auto it = j.find("alpha"); it != j.end())
      cfg.landscape.alpha = detail::number_at(*it, "alpha");
    if (auto it = j.find("grid"); it != j.end()) {
      if (auto g = it->find("min"); g != it->end())
        cfg.landscape.grid_min = detail::number_at(*g, "grid.min");
      if (auto g = it->find("max"); g != it->end())
        cfg.landscape.grid_max = detail::number_at(*g, "grid.max");
      if (auto g = it->find("points"); g != it->end()) cfg.landscape.grid_points = g->get<int>();
    }
    if (cfg.landscape.grid_points < 2) throw ConfigError("grid.points", "need at least 2");
    if (!(cfg.landscape.grid_min < cfg.landscape.grid_max))
      throw ConfigError("grid", "min must be below max");
    if (!(cfg.landscape.eta > 0.0)) throw ConfigError("eta", "must be positive");
  } else if (cfg.experiment == "verify") {
    if (auto it = j.find("suite"); it != j.end()) cfg.suite = it->get<std::string>();
    if (auto it = j.find("dim"); it != j.end()) cfg.verify_dim = it->get<int>();
    if (auto it = j.find("samples"); it != j.end()) cfg.verify_samples = it->get<long>();
  } else {
    throw ConfigError("experiment", "unknown kind '" + cfg.experiment + "'");
  }
  return cfg;
}

// Serializes a resolved config; parse(serialize(cfg)) reproduces cfg.
inline std::string serialize_config(const ExperimentConfig& cfg) {
  json j;
  j["experiment"] = cfg.experiment;
  j["seed"] = cfg.seed;
  j["horizon"] = cfg.horizon;
  j["output_dir"] = cfg.output_dir;
  if (cfg.experiment == "selfplay") {
    j["game"] = {{"kind", cfg.game.kind},
                 {"players", cfg.game.players},
                 {"actions", cfg.game.actions},
                 {"smoothness", cfg.game.smoothness}};
    json learners = json::array();
    for (const LearnerSpec& l : cfg.learners) learners.push_back(detail::learner_to_json(l));
    j["learners"] = learners;
  } else if (cfg.experiment == "adversarial") {
    j["actions"] = cfg.actions;
    j["params_players"] = cfg.params_players;
    j["adversary"] = {{"kind", cfg.adversary}};
    j["learner"] = detail::learner_to_json(cfg.learner);
  } else if (cfg.experiment == "landscape") {
    j["regularizer"] = detail::regularizer_to_json(cfg.landscape.regularizer);
    j["eta"] = cfg.landscape.eta;
    j["alpha"] = cfg.landscape.alpha;
    j["grid"] = {{"min", cfg.landscape.grid_min},
                 {"max", cfg.landscape.grid_max},
                 {"points", cfg.landscape.grid_points}};
  } else if (cfg.experiment == "verify") {
    j["suite"] = cfg.suite;
    j["dim"] = cfg.verify_dim;
    j["samples"] = cfg.verify_samples;
  }
  return j.dump(2);
}

}  // namespace coftrl
