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

#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "coftrl/common.hpp"

namespace coftrl {

class NormalFormGame;

// Joint mixed strategy, one probability vector per player.
struct MixedProfile {
  std::vector<Vec> strategies;

  static MixedProfile uniform(const NormalFormGame& game);
  void validate(const NormalFormGame& game) const;
};

// Finite n-player normal-form game with one payoff tensor per player.
// Tensors are stored flat in row-major joint-action order (player 1's action
// is the slowest index). All payoffs lie in [-1, 1].
class NormalFormGame {
 public:
  NormalFormGame(std::vector<int> action_counts,
                 std::vector<Vec> utilities, double smoothness = 1.0)
      : action_counts_(std::move(action_counts)),
        utilities_(std::move(utilities)),
        smoothness_(smoothness) {
    if (action_counts_.size() < 2)
      throw std::invalid_argument("game: need at least 2 players");
    std::size_t joint = 1;
    for (int d : action_counts_) {
      if (d < 2) throw std::invalid_argument("game: need at least 2 actions per player");
      joint *= static_cast<std::size_t>(d);
    }
    if (utilities_.size() != action_counts_.size())
      throw std::invalid_argument("game: one utility tensor per player required");
    for (const Vec& u : utilities_) {
      if (u.size() != joint)
        throw std::invalid_argument("game: utility tensor has wrong shape");
      for (double v : u)
        if (!(v >= -1.0 - 1e-12 && v <= 1.0 + 1e-12))
          throw std::invalid_argument("game: utilities must lie in [-1, 1]");
    }
    if (!(smoothness_ > 0.0))
      throw std::invalid_argument("game: smoothness must be positive");
  }

  int players() const { return static_cast<int>(action_counts_.size()); }
  int actions(int player) const { return action_counts_[player]; }
  const std::vector<int>& action_counts() const { return action_counts_; }
  double smoothness() const { return smoothness_; }

  // Payoff of `player` at a pure joint action.
  double payoff(int player, std::span<const int> joint) const {
    return utilities_[player][flat_index(joint)];
  }

  const Vec& utility_tensor(int player) const { return utilities_[player]; }

  // Expected-utility gradient for `player`: entry xi is the expected payoff of
  // pure action xi against the opponents' mixed strategies.
  Vec utility_gradient(const MixedProfile& profile, int player) const {
    profile.validate(*this);
    if (player < 0 || player >= players())
      throw std::invalid_argument("utility_gradient: player index out of range");
    const int n = players();
    const Vec& tensor = utilities_[player];
    Vec grad(action_counts_[player], 0.0);
    std::vector<int> joint(n, 0);
    // Walk every joint action of the opponents once, accumulating the
    // product of their probabilities into each of the player's entries.
    for (;;) {
      double prob = 1.0;
      for (int j = 0; j < n; ++j)
        if (j != player) prob *= profile.strategies[j][joint[j]];
      if (prob != 0.0) {
        for (int xi = 0; xi < action_counts_[player]; ++xi) {
          joint[player] = xi;
          grad[xi] += prob * tensor[flat_index(joint)];
        }
        joint[player] = 0;
      }
      // advance the mixed-radix counter over opponents
      int j = n - 1;
      for (; j >= 0; --j) {
        if (j == player) continue;
        if (++joint[j] < action_counts_[j]) break;
        joint[j] = 0;
      }
      if (j < 0) break;
    }
    return grad;
  }

  double expected_utility(const MixedProfile& profile, int player) const {
    Vec grad = utility_gradient(profile, player);
    return dot(profile.strategies[player], grad);
  }

 private:
  std::size_t flat_index(std::span<const int> joint) const {
    std::size_t idx = 0;
    for (std::size_t j = 0; j < action_counts_.size(); ++j)
      idx = idx * static_cast<std::size_t>(action_counts_[j]) +
            static_cast<std::size_t>(joint[j]);
    return idx;
  }

  std::vector<int> action_counts_;
  std::vector<Vec> utilities_;
  double smoothness_;
};

inline MixedProfile MixedProfile::uniform(const NormalFormGame& game) {
  MixedProfile p;
  for (int i = 0; i < game.players(); ++i)
    p.strategies.emplace_back(game.actions(i), 1.0 / game.actions(i));
  return p;
}

inline void MixedProfile::validate(const NormalFormGame& game) const {
  if (static_cast<int>(strategies.size()) != game.players())
    throw std::invalid_argument("profile: wrong number of players");
  for (int i = 0; i < game.players(); ++i) {
    if (static_cast<int>(strategies[i].size()) != game.actions(i))
      throw std::invalid_argument("profile: strategy length does not match game");
    validate_simplex(strategies[i], 1e-12, "profile");
  }
}

inline double smoothness_bound(const NormalFormGame& game) { return game.smoothness(); }

// -- Generators ---------------------------------------------------------------

inline NormalFormGame matching_pennies() {
  Vec u1 = {1, -1, -1, 1};
  Vec u2 = {-1, 1, 1, -1};
  return NormalFormGame({2, 2}, {u1, u2});
}

inline NormalFormGame rock_paper_scissors() {
  Vec u1 = {0, -1, 1, 1, 0, -1, -1, 1, 0};
  Vec u2(u1.size());
  for (std::size_t i = 0; i < u1.size(); ++i) u2[i] = -u1[i];
  return NormalFormGame({3, 3}, {u1, u2});
}

// n-player game with d actions each and i.i.d. uniform payoffs in [-1, 1].
inline NormalFormGame random_general_sum(int n, int d, std::uint64_t seed,
                                         double smoothness = 1.0) {
  if (n < 2 || d < 2)
    throw std::invalid_argument("random_general_sum: need n >= 2 and d >= 2");
  Rng rng(seed);
  std::size_t joint = 1;
  for (int i = 0; i < n; ++i) joint *= static_cast<std::size_t>(d);
  std::vector<Vec> utils(n, Vec(joint));
  for (int i = 0; i < n; ++i)
    for (std::size_t s = 0; s < joint; ++s) utils[i][s] = rng.uniform(-1.0, 1.0);
  return NormalFormGame(std::vector<int>(n, d), std::move(utils), smoothness);
}

// Two-player zero-sum game with d actions per side.
inline NormalFormGame random_zero_sum(int d, std::uint64_t seed,
                                      double smoothness = 1.0) {
  if (d < 2) throw std::invalid_argument("random_zero_sum: need d >= 2");
  Rng rng(seed);
  std::size_t joint = static_cast<std::size_t>(d) * d;
  Vec u1(joint), u2(joint);
  for (std::size_t s = 0; s < joint; ++s) {
    u1[s] = rng.uniform(-1.0, 1.0);
    u2[s] = -u1[s];
  }
  return NormalFormGame({d, d}, {std::move(u1), std::move(u2)}, smoothness);
}

}  // namespace coftrl
