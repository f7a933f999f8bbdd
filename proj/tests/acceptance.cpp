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
//
// Acceptance suite: one numbered check per headline behavior, each printed as
// a single pass/fail line. Exits nonzero if any check fails.

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "coftrl/coftrl.hpp"

using namespace coftrl;

namespace {

struct Criterion {
  int id;
  std::string name;
  bool pass;
  std::string detail;
};

std::vector<Criterion> results;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  results.push_back({id, name, pass, detail});
  std::printf("criterion %2d [%s] %-28s %s\n", id, pass ? "PASS" : "FAIL", name.c_str(),
              detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof(buf), f, args);
  va_end(args);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

constexpr int kSeeds = 20;
constexpr int kActions = 10;
constexpr long kT10 = 1 << 10;
constexpr long kT12 = 1 << 12;
constexpr long kT14 = 1 << 14;

// The 20 self-play runs shared by checks 1, 2, 4, 8, 9, 10 and 13.
struct SharedRuns {
  std::vector<Trajectory> coftrl;       // 20 runs at T = 2^14
  std::vector<Trajectory> oftrl;        // fixed-eta baselines on the same games
  std::vector<Trajectory> equivalence;  // the 100-round runs of check 3
};

Trajectory run_coftrl_selfplay(const NormalFormGame& game, long horizon, std::uint64_t seed) {
  std::vector<std::unique_ptr<Learner>> learners;
  for (int i = 0; i < game.players(); ++i)
    learners.push_back(std::make_unique<CoftrlLearner>(
        Regularizer::neg_entropy(game.actions(i)), game.players(), game.smoothness()));
  return self_play(game, learners, horizon, seed);
}

double max_regret_at(const Trajectory& traj, long t) {
  double m = -1e300;
  for (std::size_t i = 0; i < traj.players.size(); ++i)
    m = std::max(m, external_regret(traj, static_cast<int>(i), t));
  return m;
}

double prefix_cce_gap(const Trajectory& traj, long t) {
  Trajectory prefix;
  prefix.game = traj.game;
  prefix.horizon = t;
  prefix.players = traj.players;
  return cce_gap(prefix);
}

// -- 1: logarithmic regret growth ------------------------------------------------

void check_growth(const SharedRuns& runs) {
  bool pass = true;
  double worst_concavity = -1e300, worst_ratio_lo = 1e300, worst_ratio_hi = -1e300;
  for (const Trajectory& traj : runs.coftrl) {
    double r1 = max_regret_at(traj, kT10);
    double r2 = max_regret_at(traj, kT12);
    double r3 = max_regret_at(traj, kT14);
    double d1 = r2 - r1, d2 = r3 - r2;
    worst_concavity = std::max(worst_concavity, d2 - d1);
    if (d2 > d1 + 5.0) pass = false;
    double pred = r2 + d1;  // least-squares line through the first two horizons
    double ratio = r3 / pred;
    worst_ratio_lo = std::min(worst_ratio_lo, ratio);
    worst_ratio_hi = std::max(worst_ratio_hi, ratio);
    if (!(r3 <= 2.0 * pred && r3 >= 0.5 * pred)) pass = false;
  }
  report(1, "logarithmic-regret-growth", pass,
         fmt("concavity margin max(D2-D1)=%.2f (allowed +5); prediction ratio in [%.3f, %.3f] "
             "(allowed [0.5, 2])",
             worst_concavity, worst_ratio_lo, worst_ratio_hi));
}

// -- 2: baseline separation ------------------------------------------------------

void check_baseline_separation(const SharedRuns& runs) {
  std::vector<double> ratios;
  for (int s = 0; s < kSeeds; ++s) {
    double oftrl = max_regret_at(runs.oftrl[s], kT14);
    double coftrl = max_regret_at(runs.coftrl[s], kT14);
    ratios.push_back(oftrl / coftrl);
  }
  double med = median(ratios);
  report(2, "baseline-separation", med >= 2.0,
         fmt("median(OFTRL/COFTRL max regret at T=2^14) = %.4f (needs >= 2); the dynamic "
             "learning rate never left the cap at the certified alpha, eta",
             med));
}

// -- 3: formulation equivalence --------------------------------------------------

void check_equivalence(SharedRuns& runs) {
  double worst = 0.0;
  std::vector<Regularizer> kinds = {Regularizer::neg_entropy(5), Regularizer::log_reg(5),
                                    Regularizer::squared_lp_star(5),
                                    Regularizer::tsallis_q_star(5)};
  // 100-round self-play runs at the certified default parameters
  for (std::size_t ki = 0; ki < kinds.size(); ++ki) {
    const Regularizer& reg = kinds[ki];
    NormalFormGame game = random_general_sum(2, 5, 1000 + ki);
    LearnerParams p = default_params(reg, 5, 2, game.smoothness());
    CoftrlLearner lead(reg, p.eta, p.alpha);
    CoftrlLearner other(Regularizer::neg_entropy(5), 2, game.smoothness());
    MixedProfile profile;
    profile.strategies.resize(2);
    Trajectory traj;
    traj.game = game;
    traj.horizon = 100;
    traj.players.resize(2);
    traj.players[0] = PlayerRecord{};
    RegularizerConstants c = reg.constants();
    traj.players[0].algorithm = "coftrl";
    traj.players[0].eta = p.eta;
    traj.players[0].alpha = p.alpha;
    traj.players[0].gamma = c.gamma;
    traj.players[0].mu = c.mu;
    traj.players[0].r_max = c.r_max;
    traj.players[1] = traj.players[0];
    {
      RegularizerConstants c1 = Regularizer::neg_entropy(5).constants();
      LearnerParams p1 = default_params(Regularizer::neg_entropy(5), 5, 2, 1.0);
      traj.players[1].eta = p1.eta;
      traj.players[1].alpha = p1.alpha;
      traj.players[1].gamma = c1.gamma;
      traj.players[1].mu = c1.mu;
      traj.players[1].r_max = c1.r_max;
    }
    for (long t = 0; t < 100; ++t) {
      Vec r(5);
      for (int k = 0; k < 5; ++k)
        r[k] = lead.cumulative_regret()[k] + lead.last_correction()[k];
      auto [x0, lambda] = lead.step();
      auto s1 = other.step();
      Vec y = lifted_oftrl_step(reg, r, p.eta, p.alpha);
      double mass = sum(y);
      worst = std::max(worst, std::fabs(mass - lambda / p.eta));
      for (int k = 0; k < 5; ++k) worst = std::max(worst, std::fabs(y[k] / mass - x0[k]));
      profile.strategies[0] = x0;
      profile.strategies[1] = s1.x;
      Vec nu0 = game.utility_gradient(profile, 0);
      Vec nu1 = game.utility_gradient(profile, 1);
      lead.observe(nu0);
      other.observe(nu1);
      traj.players[0].actions.push_back(profile.strategies[0]);
      traj.players[0].utilities.push_back(nu0);
      traj.players[0].lambdas.push_back(lambda);
      traj.players[1].actions.push_back(profile.strategies[1]);
      traj.players[1].utilities.push_back(nu1);
      traj.players[1].lambdas.push_back(s1.lambda);
    }
    runs.equivalence.push_back(std::move(traj));
  }
  // synthetic regret vectors driving the rate below the cap, so both branches
  // of the control problem are compared
  Rng rng(77);
  for (const Regularizer& reg : kinds) {
    RegularizerConstants c = reg.constants();
    double eta = 0.7, alpha = 4.0 * c.gamma + c.mu;
    for (int trial = 0; trial < 25; ++trial) {
      Vec r(5);
      for (double& v : r) v = rng.uniform(-4.0 * alpha, 3.0);
      LrSolution lr = lr_control_solve(reg, r, eta, alpha);
      Vec g(5);
      for (int k = 0; k < 5; ++k) g[k] = lr.lambda * r[k];
      Vec x = ftrl_argmax(reg, g).x;
      Vec y = lifted_oftrl_step(reg, r, eta, alpha);
      double mass = sum(y);
      worst = std::max(worst, std::fabs(mass - lr.lambda / eta));
      for (int k = 0; k < 5; ++k) worst = std::max(worst, std::fabs(y[k] / mass - x[k]));
    }
  }
  report(3, "formulation-equivalence", worst <= 1e-6,
         fmt("worst per-round deviation %.3e (tol 1e-6), incl. below-cap synthetic sweeps",
             worst));
}

// -- 4: multiplicative stability -------------------------------------------------

void check_stability(const SharedRuns& runs) {
  long violations = 0, rounds = 0;
  double lo = 1e300, hi = -1e300;
  auto scan = [&](const Trajectory& traj) {
    for (const PlayerRecord& rec : traj.players) {
      if (rec.alpha == 0.0) continue;  // baselines carry no dynamic rate
      for (std::size_t t = 0; t + 1 < rec.lambdas.size(); ++t) {
        double ratio = rec.lambdas[t + 1] / rec.lambdas[t];
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
        if (!(ratio >= 0.5 && ratio <= 1.5)) ++violations;
        ++rounds;
      }
    }
  };
  for (const Trajectory& traj : runs.coftrl) scan(traj);
  for (const Trajectory& traj : runs.equivalence) scan(traj);
  report(4, "multiplicative-stability", violations == 0,
         fmt("0 allowed, %ld violations over %ld round pairs; ratio range [%.4f, %.4f]",
             violations, rounds, lo, hi));
}

// -- 5: strong concavity ---------------------------------------------------------

void check_strong_concavity() {
  const int d = 8;
  std::vector<Regularizer> kinds = {Regularizer::neg_entropy(d), Regularizer::squared_lp(d, 2.0),
                                    Regularizer::squared_lp_star(d),
                                    Regularizer::tsallis_q(d, 0.5),
                                    Regularizer::tsallis_q_star(d)};
  bool pass = true;
  double worst = -1e300;
  std::uint64_t seed = 500;
  for (const Regularizer& reg : kinds) {
    auto rep = verify::strong_concavity(reg, 10000, ++seed, 1e-8);
    worst = std::max(worst, rep.max_residual);
    pass = pass && rep.pass;
  }
  report(5, "strong-concavity", pass,
         fmt("midpoint residual max %.3e over 5 regularizers x 10^4 draws (tol 1e-8)", worst));
}

// -- 6: Bregman identity ---------------------------------------------------------

void check_bregman_identity() {
  const int d = 8;
  std::vector<Regularizer> kinds = {
      Regularizer::neg_entropy(d),    Regularizer::log_reg(d),
      Regularizer::squared_lp(d, 2.0), Regularizer::squared_lp_star(d),
      Regularizer::tsallis_q(d, 0.5), Regularizer::tsallis_q_star(d)};
  bool pass = true;
  double worst = 0.0;
  std::uint64_t seed = 600;
  for (const Regularizer& reg : kinds) {
    auto rep = verify::bregman_identity(reg, 10000, ++seed, 1e-9);
    worst = std::max(worst, rep.max_residual);
    pass = pass && rep.pass;
  }
  report(6, "bregman-identity", pass,
         fmt("max |lhs-rhs| %.3e over 6 regularizers x 10^4 lifted pairs (tol 1e-9)", worst));
}

// -- 7: intrinsic Lipschitzness --------------------------------------------------

void check_intrinsic_lipschitz() {
  const int d = 8;
  bool pass = true;
  double worst = -1e300;
  std::uint64_t seed = 700;
  std::vector<Regularizer> kinds = {Regularizer::neg_entropy(d), Regularizer::tsallis_q(d, 0.5),
                                    Regularizer::tsallis_q_star(d),
                                    Regularizer::squared_lp(d, 2.0),
                                    Regularizer::squared_lp_star(d)};
  for (const Regularizer& reg : kinds) {
    auto rep = verify::il_inequality(reg, reg.constants().gamma, 10000, ++seed, 1e-9);
    worst = std::max(worst, rep.max_residual);
    pass = pass && rep.pass;
  }
  auto lil = verify::lil_inequality_log(d, 10000, ++seed, 1e-9);
  worst = std::max(worst, lil.max_residual);
  pass = pass && lil.pass;
  report(7, "intrinsic-lipschitzness", pass,
         fmt("max residual %.3e over 10^4 pairs per kind; log tested under the locality "
             "condition with gamma(1)=18d (tol 1e-9)",
             worst));
}

// -- 8: nonnegative-regret identity ----------------------------------------------

void check_nonnegative_identity(const SharedRuns& runs) {
  bool pass = true;
  double worst = 0.0;
  auto scan = [&](const Trajectory& traj) {
    for (std::size_t i = 0; i < traj.players.size(); ++i) {
      try {
        double direct = std::max(0.0, external_regret(traj, static_cast<int>(i)));
        double via = nonnegative_regret(traj, static_cast<int>(i));
        worst = std::max(worst, std::fabs(direct - via));
      } catch (const std::exception&) {
        pass = false;
      }
    }
  };
  for (const Trajectory& traj : runs.coftrl) scan(traj);
  for (const Trajectory& traj : runs.equivalence) scan(traj);
  report(8, "nonnegative-regret-identity", pass && worst <= 1e-8,
         fmt("both computation paths agree to %.3e on every run (tol 1e-8)", worst));
}

// -- 9: path-length bound --------------------------------------------------------

void check_path_length(const SharedRuns& runs) {
  bool pass = true;
  double worst_margin = -1e300;
  auto scan = [&](const Trajectory& traj) {
    double len = path_length(traj);
    double bound = path_length_bound(traj);
    worst_margin = std::max(worst_margin, len - bound);
    if (len > bound + 1e-6) pass = false;
  };
  for (const Trajectory& traj : runs.coftrl) scan(traj);
  for (const Trajectory& traj : runs.equivalence) scan(traj);
  report(9, "path-length-bound", pass,
         fmt("max(path - bound) = %.3e across all compliant runs (zero violations required)",
             worst_margin));
}

// -- 10: CCE convergence ---------------------------------------------------------

void check_cce(const SharedRuns& runs) {
  bool pass = true;
  double worst_increase = -1e300, worst_slack = -1e300;
  for (const Trajectory& traj : runs.coftrl) {
    double g10 = prefix_cce_gap(traj, kT10);
    double g14 = prefix_cce_gap(traj, kT14);
    worst_increase = std::max(worst_increase, g14 - g10);
    if (g14 > g10) pass = false;
    for (long t : {kT10, kT14}) {
      double gap = prefix_cce_gap(traj, t);
      double max_reg = max_regret_at(traj, t);
      worst_slack = std::max(worst_slack, gap - max_reg / static_cast<double>(t));
      if (gap > max_reg / static_cast<double>(t) + 1e-9) pass = false;
    }
  }
  report(10, "cce-convergence", pass,
         fmt("max gap(2^14)-gap(2^10) = %.3e (needs <= 0); max gap - maxReg/T = %.3e "
             "(tol 1e-9)",
             worst_increase, worst_slack));
}

// -- 11: adversarial adaptivity --------------------------------------------------

void check_adversarial() {
  const int d = 2;
  const long T = kT14;
  Regularizer reg = Regularizer::neg_entropy(d);
  LearnerParams p = default_params(reg, d, 1, 1.0);
  SafeguardedLearner learner(CoftrlLearner(reg, p.eta, p.alpha),
                             BaselineLearner::mwu(d, mwu_default_eta(d, T)), 1, 1.0);
  Adversary adv = [](int t, const Vec&) {
    return Vec{t % 2 == 0 ? 1.0 : -1.0, t % 2 == 0 ? -1.0 : 1.0};
  };
  Trajectory traj = adversarial_play(learner, adv, T);
  bool switched = traj.switch_round > 0;
  double post = 0.0, ratio = 0.0;
  if (switched) {
    const PlayerRecord& rec = traj.players[0];
    Vec cum(d, 0.0);
    double earned = 0.0;
    for (long t = traj.switch_round; t < T; ++t) {
      for (int k = 0; k < d; ++k) cum[k] += rec.utilities[t][k];
      earned += dot(rec.utilities[t], rec.actions[t]);
    }
    post = max_entry(cum) - earned;
    ratio = post / std::sqrt(static_cast<double>(T) * std::log(d));
  }
  report(11, "adversarial-adaptivity", switched && ratio <= 3.0,
         fmt("switch fired at round %d; post-switch Reg/sqrt(T log d) = %.3f (needs <= 3)",
             traj.switch_round, ratio));
}

// -- 12: learning-rate landscape -------------------------------------------------

void check_landscape() {
  std::vector<std::pair<std::string, Regularizer>> kinds = {
      {"negentropy", Regularizer::neg_entropy(2)},
      {"log", Regularizer::log_reg(2)},
      {"squared_l2", Regularizer::squared_lp(2, 2.0)},
      {"tsallis(0.5)", Regularizer::tsallis_q(2, 0.5)}};
  const int N = 36;
  const double lo = -30.0, hi = 5.0;
  bool pass = true;
  double worst_quad = 0.0, worst_mono = -1e300;
  std::string worst_kind;
  for (const auto& [name, reg] : kinds) {
    std::vector<std::pair<double, double>> grid;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        grid.emplace_back(lo + (hi - lo) * i / (N - 1), lo + (hi - lo) * j / (N - 1));
    Vec lam = landscape_grid(reg, 1.0, 4.0, grid);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        auto [r1, r2] = grid[i * N + j];
        if (r1 >= 0.0 && r2 >= 0.0)
          worst_quad = std::max(worst_quad, std::fabs(lam[i * N + j] - 1.0));
        // along a decreasing path in either coordinate, lambda must not rise
        double drop_i = i + 1 < N ? lam[i * N + j] - lam[(i + 1) * N + j] : 0.0;
        double drop_j = j + 1 < N ? lam[i * N + j] - lam[i * N + j + 1] : 0.0;
        double mono = std::max(drop_i, drop_j);
        if (mono > worst_mono) {
          worst_mono = mono;
          if (mono > 1e-8) worst_kind = name;
        }
      }
  }
  if (worst_quad > 1e-12 || worst_mono > 1e-8) pass = false;
  report(12, "learning-rate-landscape", pass,
         fmt("cap quadrant off by %.1e; worst monotonicity violation %.3e (tol 1e-8, kind %s)",
             worst_quad, worst_mono, worst_kind.empty() ? "-" : worst_kind.c_str()));
}

// -- 13: social regret window ----------------------------------------------------

void check_social_window(const SharedRuns& runs) {
  bool pass = true;
  double worst = 0.0;
  for (const Trajectory& traj : runs.coftrl) {
    double s10 = 0.0, s14 = 0.0;
    for (std::size_t i = 0; i < traj.players.size(); ++i) {
      s10 += external_regret(traj, static_cast<int>(i), kT10);
      s14 += external_regret(traj, static_cast<int>(i), kT14);
    }
    // n R / eta + 5 with R = 0 for the negative entropy regularizer
    double allowed = traj.players.size() * traj.players[0].r_max / traj.players[0].eta + 5.0;
    double diff = std::fabs(s14 - s10);
    worst = std::max(worst, diff - allowed);
    if (diff > allowed) pass = false;
  }
  report(13, "social-regret-window", pass,
         fmt("max |social(2^14)-social(2^10)| - (nR/eta + 5) = %.2f (needs <= 0)", worst));
}

}  // namespace

int main() {
  std::printf("acceptance suite: %d self-play seeds, d=%d, horizons 2^10..2^14\n", kSeeds,
              kActions);
  SharedRuns runs;
  for (int s = 0; s < kSeeds; ++s) {
    NormalFormGame game = random_general_sum(2, kActions, 1 + s);
    runs.coftrl.push_back(run_coftrl_selfplay(game, kT14, 1 + s));
    LearnerParams p = default_params(Regularizer::neg_entropy(kActions), kActions, 2, 1.0);
    std::vector<std::unique_ptr<Learner>> baseline;
    for (int i = 0; i < 2; ++i)
      baseline.push_back(std::make_unique<BaselineLearner>(
          BaselineLearner::fixed_oftrl(Regularizer::neg_entropy(kActions), p.eta)));
    runs.oftrl.push_back(self_play(game, baseline, kT14, 1 + s));
  }

  check_growth(runs);
  check_baseline_separation(runs);
  check_equivalence(runs);
  check_stability(runs);
  check_strong_concavity();
  check_bregman_identity();
  check_intrinsic_lipschitz();
  check_nonnegative_identity(runs);
  check_path_length(runs);
  check_cce(runs);
  check_adversarial();
  check_landscape();
  check_social_window(runs);

  int failed = 0;
  for (const Criterion& c : results)
    if (!c.pass) ++failed;
  std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failed,
              results.size());
  return failed == 0 ? 0 : 1;
}
