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

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "coftrl/common.hpp"
#include "coftrl/game.hpp"
#include "coftrl/learners.hpp"
#include "coftrl/regularizers.hpp"

namespace coftrl {

// Per-player record of a run: everything needed to replay it and evaluate the
// regret and path-length bounds afterwards.
struct PlayerRecord {
  std::string algorithm;
  std::vector<Vec> actions;    // x^t, t = 1..T
  std::vector<Vec> utilities;  // nu^t
  Vec lambdas;                 // lambda^t (the fixed eta for baselines)
  // resolved parameters, for bound evaluation and manifests
  double eta = 0.0;
  double alpha = 0.0;
  double gamma = 0.0;
  double mu = 1.0;
  double r_max = 0.0;
  double max_regret_step = 0.0;  // empirical max ||r^{t+1} - r^t||_inf, COFTRL only
};

struct Trajectory {
  std::optional<NormalFormGame> game;  // absent for adversarial runs
  long horizon = 0;
  std::vector<PlayerRecord> players;
  int switch_round = -1;  // round the safeguard fired, -1 if never
};

// Callback producing the adversarial utility vector for a round; receives the
// 1-based round index and the strategy the learner just committed to.
using Adversary = std::function<Vec(int round, const Vec& x)>;

namespace detail {

inline PlayerRecord make_record(const Learner& learner) {
  PlayerRecord rec;
  rec.algorithm = learner.name();
  if (const auto* c = dynamic_cast<const CoftrlLearner*>(&learner)) {
    RegularizerConstants k = c->regularizer().constants();
    rec.eta = c->eta();
    rec.alpha = c->alpha();
    rec.gamma = k.gamma;
    rec.mu = k.mu;
    rec.r_max = k.r_max;
  } else if (const auto* s = dynamic_cast<const SafeguardedLearner*>(&learner)) {
    rec = make_record(s->inner());
    rec.algorithm = learner.name();
  } else if (const auto* b = dynamic_cast<const BaselineLearner*>(&learner)) {
    rec.eta = b->eta();
  }
  return rec;
}

inline void finalize_record(PlayerRecord& rec, const Learner& learner) {
  if (const auto* c = dynamic_cast<const CoftrlLearner*>(&learner))
    rec.max_regret_step = c->max_regret_step();
  else if (const auto* s = dynamic_cast<const SafeguardedLearner*>(&learner))
    rec.max_regret_step = s->inner().max_regret_step();
}

}  // namespace detail

// Repeated play: every round all learners commit simultaneously, then each
// observes its expected-utility gradient at the joint profile. Deterministic;
// the seed is recorded for provenance only (no sampling happens here).
inline Trajectory self_play(const NormalFormGame& game,
                            std::vector<std::unique_ptr<Learner>>& learners,
                            long horizon, std::uint64_t seed = 0) {
  (void)seed;
  if (static_cast<int>(learners.size()) != game.players())
    throw std::invalid_argument("self_play: one learner per player required");
  for (int i = 0; i < game.players(); ++i)
    if (learners[i]->actions() != game.actions(i))
      throw std::invalid_argument("self_play: learner/game dimension mismatch");
  if (horizon < 1) throw std::invalid_argument("self_play: horizon must be >= 1");

  Trajectory traj;
  traj.game = game;
  traj.horizon = horizon;
  for (auto& l : learners) traj.players.push_back(detail::make_record(*l));

  const int n = game.players();
  MixedProfile profile;
  profile.strategies.resize(n);
  for (long t = 1; t <= horizon; ++t) {
    for (int i = 0; i < n; ++i) {
      StepResult s = learners[i]->step();
      profile.strategies[i] = std::move(s.x);
      traj.players[i].lambdas.push_back(s.lambda);
    }
    for (int i = 0; i < n; ++i) {
      Vec nu = game.utility_gradient(profile, i);
      learners[i]->observe(nu);
      traj.players[i].actions.push_back(profile.strategies[i]);
      traj.players[i].utilities.push_back(std::move(nu));
    }
  }
  for (std::size_t i = 0; i < learners.size(); ++i)
    detail::finalize_record(traj.players[i], *learners[i]);
  return traj;
}

// Single-learner run against an arbitrary bounded-utility adversary, with the
// safeguard evaluated every round.
inline Trajectory adversarial_play(SafeguardedLearner& learner, const Adversary& adversary,
                                   long horizon) {
  if (horizon < 1) throw std::invalid_argument("adversarial_play: horizon must be >= 1");
  Trajectory traj;
  traj.horizon = horizon;
  traj.players.push_back(detail::make_record(learner));
  PlayerRecord& rec = traj.players.front();
  for (long t = 1; t <= horizon; ++t) {
    StepResult s = learner.step();
    Vec nu = adversary(static_cast<int>(t), s.x);
    if (static_cast<int>(nu.size()) != learner.actions() || linf_norm(nu) > 1.0 + 1e-9)
      throw std::invalid_argument("adversarial_play: adversary emitted invalid utilities");
    learner.observe(nu);
    rec.lambdas.push_back(s.lambda);
    rec.actions.push_back(std::move(s.x));
    rec.utilities.push_back(std::move(nu));
  }
  detail::finalize_record(rec, learner);
  traj.switch_round = learner.switch_round();
  return traj;
}

// -- Metrics --------------------------------------------------------------------

// External regret of `player` over the first `upto` rounds: the gap to the
// best fixed action in hindsight, evaluated exactly over the d pure
// comparators.
inline double external_regret(const Trajectory& traj, int player, long upto = -1) {
  const PlayerRecord& rec = traj.players.at(player);
  long T = upto < 0 ? traj.horizon : upto;
  Vec cum(rec.actions.front().size(), 0.0);
  double earned = 0.0;
  for (long t = 0; t < T; ++t) {
    const Vec& nu = rec.utilities[t];
    for (std::size_t k = 0; k < cum.size(); ++k) cum[k] += nu[k];
    earned += dot(nu, rec.actions[t]);
  }
  return max_entry(cum) - earned;
}

// Nonnegative regret max{0, Reg}. Computed both directly and through the
// lifted comparator set {0} union {vertices} applied to the corrected rewards
// u^t = nu^t - <nu^t, x^t> 1; the two paths must agree.
inline double nonnegative_regret(const Trajectory& traj, int player) {
  const PlayerRecord& rec = traj.players.at(player);
  double direct = std::max(0.0, external_regret(traj, player));
  Vec cum_u(rec.actions.front().size(), 0.0);
  for (long t = 0; t < traj.horizon; ++t) {
    const Vec& nu = rec.utilities[t];
    double avg = dot(nu, rec.actions[t]);
    for (std::size_t k = 0; k < cum_u.size(); ++k) cum_u[k] += nu[k] - avg;
  }
  double lifted = std::max(0.0, max_entry(cum_u));
  if (std::fabs(direct - lifted) > 1e-8)
    throw std::runtime_error("nonnegative_regret: computation paths disagree by " +
                             std::to_string(std::fabs(direct - lifted)));
  return direct;
}

inline double social_regret(const Trajectory& traj) {
  double s = 0.0;
  for (std::size_t i = 0; i < traj.players.size(); ++i)
    s += external_regret(traj, static_cast<int>(i));
  return s;
}

// Equilibrium gap of the empirical joint distribution: the largest gain any
// player could get from a fixed pure deviation. Recomputed from the game and
// the recorded strategies (not from the recorded utilities), and clipped
// below at zero for reporting.
inline double cce_gap(const Trajectory& traj) {
  if (!traj.game.has_value())
    throw std::invalid_argument("cce_gap: trajectory carries no game");
  const NormalFormGame& game = *traj.game;
  const int n = game.players();
  double gap = -std::numeric_limits<double>::infinity();
  MixedProfile profile;
  profile.strategies.resize(n);
  for (int i = 0; i < n; ++i) {
    Vec dev_value(game.actions(i), 0.0);
    double played = 0.0;
    for (long t = 0; t < traj.horizon; ++t) {
      for (int j = 0; j < n; ++j) profile.strategies[j] = traj.players[j].actions[t];
      Vec grad = game.utility_gradient(profile, i);
      for (int k = 0; k < game.actions(i); ++k) dev_value[k] += grad[k];
      played += dot(grad, profile.strategies[i]);
    }
    gap = std::max(gap, (max_entry(dev_value) - played) / static_cast<double>(traj.horizon));
  }
  return std::max(0.0, gap);
}

// Total squared l1 movement of play, sum_i sum_t ||x_i^{t+1} - x_i^t||_1^2.
inline double path_length(const Trajectory& traj) {
  double s = 0.0;
  for (const PlayerRecord& rec : traj.players)
    for (std::size_t t = 0; t + 1 < rec.actions.size(); ++t) {
      double d = l1_distance(rec.actions[t + 1], rec.actions[t]);
      s += d * d;
    }
  return s;
}

// Certified ceiling on the total path length of compliant play, summed over
// players: (128 eta_i / mu_i) (3 + (alpha_i log T + R_i) / eta_i).
inline double path_length_bound(const Trajectory& traj) {
  double bound = 0.0;
  double log_t = std::log(static_cast<double>(std::max<long>(traj.horizon, 1)));
  for (const PlayerRecord& rec : traj.players) {
    if (rec.alpha == 0.0) continue;  // baseline players carry no certificate
    double r_max = rec.r_max;
    if (!std::isfinite(r_max))
      r_max = rec.actions.front().size() *
              std::log(rec.actions.front().size() * static_cast<double>(traj.horizon));
    bound += (128.0 * rec.eta / rec.mu) * (3.0 + (rec.alpha * log_t + r_max) / rec.eta);
  }
  return bound;
}

struct Metrics {
  Vec external_regret;     // per player
  Vec nonnegative_regret;  // per player
  double social_regret = 0.0;
  double cce_gap = 0.0;
  double path_length = 0.0;
  // per-player regret sampled at t = 1, 2, 4, ... and at T
  std::vector<std::pair<long, Vec>> regret_series;
};

inline Metrics compute_metrics(const Trajectory& traj) {
  Metrics m;
  const int n = static_cast<int>(traj.players.size());
  for (int i = 0; i < n; ++i) {
    m.external_regret.push_back(external_regret(traj, i));
    m.nonnegative_regret.push_back(nonnegative_regret(traj, i));
  }
  m.social_regret = sum(m.external_regret);
  m.cce_gap = traj.game.has_value() ? cce_gap(traj) : 0.0;
  m.path_length = path_length(traj);
  for (long t = 1; t <= traj.horizon; t *= 2) {
    Vec row(n);
    for (int i = 0; i < n; ++i) row[i] = external_regret(traj, i, t);
    m.regret_series.emplace_back(t, std::move(row));
    if (t > traj.horizon / 2) break;
  }
  if (m.regret_series.empty() || m.regret_series.back().first != traj.horizon)
    m.regret_series.emplace_back(traj.horizon, m.external_regret);
  return m;
}

}  // namespace coftrl
