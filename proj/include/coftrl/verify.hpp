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
#include <cstdio>
#include <string>
#include <vector>

#include "coftrl/common.hpp"
#include "coftrl/game.hpp"
#include "coftrl/harness.hpp"
#include "coftrl/learners.hpp"
#include "coftrl/regularizers.hpp"
#include "coftrl/solvers.hpp"

namespace coftrl::verify {

// Outcome of one property check over `samples` random draws. `max_residual`
// is the worst violation observed (negative or tiny positive means the
// property held). Checks marked not `enforced` are run for the record only.
struct PropertyReport {
  std::string name;
  long samples = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  bool enforced = true;
};

inline bool all_pass(const std::vector<PropertyReport>& reports) {
  for (const auto& r : reports)
    if (r.enforced && !r.pass) return false;
  return true;
}

inline std::string format_report(const std::vector<PropertyReport>& reports) {
  std::string out;
  char line[256];
  for (const auto& r : reports) {
    std::snprintf(line, sizeof(line), "%-52s samples=%-7ld max_residual=%11.3e tol=%8.1e  %s\n",
                  r.name.c_str(), r.samples, r.max_residual, r.tolerance,
                  !r.enforced ? "REPORT-ONLY" : (r.pass ? "PASS" : "FAIL"));
    out += line;
  }
  return out;
}

namespace detail {

inline PropertyReport make_report(std::string name, long samples, double max_residual,
                                  double tol, bool enforced = true) {
  PropertyReport r;
  r.name = std::move(name);
  r.samples = samples;
  r.max_residual = max_residual;
  r.tolerance = tol;
  r.pass = max_residual <= tol;
  r.enforced = enforced;
  return r;
}

// Non-local regularizer kinds exercised by the suites, at dimension d.
inline std::vector<Regularizer> global_kinds(int d) {
  std::vector<Regularizer> kinds = {Regularizer::neg_entropy(d),
                                    Regularizer::squared_lp(d, 2.0),
                                    Regularizer::tsallis_q(d, 0.5)};
  if (std::log(static_cast<double>(d)) > 1.0) {
    kinds.push_back(Regularizer::squared_lp_star(d));
    kinds.push_back(Regularizer::tsallis_q_star(d));
  }
  return kinds;
}

inline std::string label(const Regularizer& reg) {
  switch (reg.kind()) {
    case RegKind::kSquaredLp: {
      char buf[48];
      std::snprintf(buf, sizeof(buf), "squared_lp(p=%.3f)", reg.p());
      return buf;
    }
    case RegKind::kTsallisQ: {
      char buf[48];
      std::snprintf(buf, sizeof(buf), "tsallis(q=%.3f)", reg.q());
      return buf;
    }
    default:
      return kind_name(reg.kind());
  }
}

}  // namespace detail

// |psi(x') - psi(x)|^2 <= gamma D_psi(x' || x) over random simplex pairs.
inline PropertyReport il_inequality(const Regularizer& reg, double gamma, long samples,
                                    std::uint64_t seed, double tol = 1e-9) {
  Rng rng(seed);
  const int d = reg.dim();
  double worst = -std::numeric_limits<double>::infinity();
  for (long s = 0; s < samples; ++s) {
    Vec x = rng.interior_simplex_point(d, 1e-9);
    Vec xp = rng.simplex_point(d);
    double dv = reg.value(xp) - reg.value(x);
    double residual = dv * dv - gamma * reg.bregman(xp, x);
    worst = std::max(worst, residual);
  }
  return detail::make_report("il-inequality/" + detail::label(reg), samples, worst, tol);
}

// The locally-IL inequality for the log regularizer, over pairs produced as
// successive lifted steps whose regret vectors differ by at most 4 in the
// sup norm; such pairs satisfy the locality condition
// D_phi(y'||y) + D_phi(y||y') <= 1.
inline PropertyReport lil_inequality_log(int d, long samples, std::uint64_t seed,
                                         double tol = 1e-9) {
  Rng rng(seed);
  Regularizer reg = Regularizer::log_reg(d);
  RegularizerConstants c = reg.constants();
  LearnerParams params = default_params(reg, d, 1, 1.0);
  double worst = -std::numeric_limits<double>::infinity();
  long used = 0;
  for (long s = 0; s < samples; ++s) {
    Vec r(d), rp(d);
    for (int k = 0; k < d; ++k) {
      r[k] = rng.uniform(-10.0, 10.0);
      rp[k] = r[k] + rng.uniform(-4.0, 4.0);
    }
    LrSolution a = lr_control_solve(reg, r, params.eta, params.alpha);
    LrSolution b = lr_control_solve(reg, rp, params.eta, params.alpha);
    Vec ga(d), gb(d);
    for (int k = 0; k < d; ++k) {
      ga[k] = a.lambda * r[k];
      gb[k] = b.lambda * rp[k];
    }
    Vec x = ftrl_argmax(reg, ga).x;
    Vec xp = ftrl_argmax(reg, gb).x;
    Vec y(d), yp(d);
    for (int k = 0; k < d; ++k) {
      y[k] = (a.lambda / params.eta) * x[k];
      yp[k] = (b.lambda / params.eta) * xp[k];
    }
    double locality = phi_bregman(reg, params.alpha, yp, y) +
                      phi_bregman(reg, params.alpha, y, yp);
    if (locality > 1.0) continue;  // outside the locality regime
    ++used;
    double dv = reg.value(xp) - reg.value(x);
    worst = std::max(worst, dv * dv - c.gamma * reg.bregman(xp, x));
  }
  PropertyReport rep = detail::make_report("lil-inequality/log", used, worst, tol);
  rep.pass = rep.pass && used > samples / 2;  // the locality regime must actually occur
  return rep;
}

// D_psi(x'||x) + D_psi(x||x') >= mu ||x' - x||_1^2 over interior pairs.
inline PropertyReport strong_convexity(const Regularizer& reg, long samples,
                                       std::uint64_t seed, double tol = 1e-9) {
  Rng rng(seed);
  const int d = reg.dim();
  double mu = reg.constants().mu;
  double worst = -std::numeric_limits<double>::infinity();
  for (long s = 0; s < samples; ++s) {
    Vec x = rng.interior_simplex_point(d, 1e-6);
    Vec xp = rng.interior_simplex_point(d, 1e-6);
    double l1 = l1_distance(xp, x);
    double residual = mu * l1 * l1 - (reg.bregman(xp, x) + reg.bregman(x, xp));
    worst = std::max(worst, residual);
  }
  return detail::make_report("strong-convexity/" + detail::label(reg), samples, worst, tol);
}

// Analytic gradient against central finite differences, relative error.
inline PropertyReport gradient_finite_difference(const Regularizer& reg, long samples,
                                                 std::uint64_t seed, double tol = 1e-6) {
  Rng rng(seed);
  const int d = reg.dim();
  double worst = 0.0;
  for (long s = 0; s < samples; ++s) {
    Vec x = rng.interior_simplex_point(d, 1e-3);
    Vec grad = reg.gradient(x);
    for (int k = 0; k < d; ++k) {
      double h = 1e-6 * std::max(1.0, std::fabs(x[k]));
      Vec hi(x), lo(x);
      hi[k] += h;
      lo[k] -= h;
      // raw coordinate perturbation; the formulas extend off the simplex
      double fd = (reg.value_raw(hi) - reg.value_raw(lo)) / (2.0 * h);
      double rel = std::fabs(fd - grad[k]) / std::max(1.0, std::fabs(grad[k]));
      worst = std::max(worst, rel);
    }
  }
  return detail::make_report("gradient-fd/" + detail::label(reg), samples, worst, tol);
}

// Any L-Lipschitz, mu-strongly-convex regularizer is (2 L^2 / mu)-IL; spot
// check for the squared Euclidean norm on the simplex (L = 1).
inline PropertyReport lipschitz_implies_il(int d, long samples, std::uint64_t seed,
                                           double tol = 1e-9) {
  Regularizer reg = Regularizer::squared_lp(d, 2.0);
  double mu = reg.constants().mu;
  PropertyReport rep = il_inequality(reg, 2.0 / mu, samples, seed, tol);
  rep.name = "lipschitz-implies-il/squared_l2";
  return rep;
}

// Midpoint strong concavity of the learning rate control objective:
// f((l1+l2)/2) >= f(l1)/2 + f(l2)/2 + ((alpha-gamma)/8)(l2-l1)^2.
inline PropertyReport strong_concavity(const Regularizer& reg, long samples,
                                       std::uint64_t seed, double tol = 1e-8,
                                       bool enforced = true) {
  Rng rng(seed);
  const int d = reg.dim();
  RegularizerConstants c = reg.constants();
  double alpha = 4.0 * c.gamma + c.mu;
  double worst = -std::numeric_limits<double>::infinity();
  for (long s = 0; s < samples; ++s) {
    Vec r(d);
    for (double& v : r) v = rng.uniform(-10.0, 10.0);
    double l1 = rng.uniform(1e-3, 1.0);
    double l2 = rng.uniform(1e-3, 1.0);
    double f1 = lr_objective(reg, r, alpha, l1);
    double f2 = lr_objective(reg, r, alpha, l2);
    double fm = lr_objective(reg, r, alpha, 0.5 * (l1 + l2));
    double residual =
        0.5 * f1 + 0.5 * f2 + ((alpha - c.gamma) / 8.0) * (l2 - l1) * (l2 - l1) - fm;
    worst = std::max(worst, residual);
  }
  std::string name = "strong-concavity/" + detail::label(reg);
  if (!enforced) name += " (report-only)";
  return detail::make_report(name, samples, worst, tol, enforced);
}

// Envelope-theorem derivative f'(l) = alpha/l + <r, x_l> against central
// finite differences of f.
inline PropertyReport envelope_derivative(const Regularizer& reg, long samples,
                                          std::uint64_t seed, double tol = 1e-5) {
  Rng rng(seed);
  const int d = reg.dim();
  RegularizerConstants c = reg.constants();
  double alpha = 4.0 * c.gamma + c.mu;
  double worst = 0.0;
  for (long s = 0; s < samples; ++s) {
    Vec r(d);
    for (double& v : r) v = rng.uniform(-10.0, 10.0);
    double l = rng.uniform(0.05, 1.0);
    double fp = lr_derivative(reg, r, alpha, l);
    double h = 1e-6 * l;
    double fd = (lr_objective(reg, r, alpha, l + h) - lr_objective(reg, r, alpha, l - h)) /
                (2.0 * h);
    worst = std::max(worst, std::fabs(fd - fp) / std::max(1.0, std::fabs(fp)));
  }
  return detail::make_report("envelope-derivative/" + detail::label(reg), samples, worst, tol);
}

// D_phi(y'||y) = alpha D_{-log}(l'||l) + (l'/l) D_psi(x'||x)
//                + (1 - l'/l)(psi(x') - psi(x)).
inline PropertyReport bregman_identity(const Regularizer& reg, long samples,
                                       std::uint64_t seed, double tol = 1e-9) {
  Rng rng(seed);
  const int d = reg.dim();
  RegularizerConstants c = reg.constants();
  double alpha = 4.0 * c.gamma + c.mu;
  double worst = 0.0;
  for (long s = 0; s < samples; ++s) {
    Vec x = rng.interior_simplex_point(d, 1e-3);
    Vec xp = rng.interior_simplex_point(d, 1e-3);
    double l = rng.uniform(0.05, 1.0);
    double lp = rng.uniform(0.05, 1.0);
    Vec y(d), yp(d);
    for (int k = 0; k < d; ++k) {
      y[k] = l * x[k];
      yp[k] = lp * xp[k];
    }
    double lhs = phi_bregman(reg, alpha, yp, y);
    double ratio = lp / l;
    double rhs = alpha * neg_log_bregman(lp, l) + ratio * reg.bregman(xp, x) +
                 (1.0 - ratio) * (reg.value(xp) - reg.value(x));
    worst = std::max(worst, std::fabs(lhs - rhs));
  }
  return detail::make_report("bregman-identity/" + detail::label(reg), samples, worst, tol);
}

// D_phi(y'||y) + D_phi(y||y') >= (alpha - gamma)(l'/l + l/l' - 2).
inline PropertyReport joint_divergence_bound(const Regularizer& reg, long samples,
                                             std::uint64_t seed, double tol = 1e-9) {
  Rng rng(seed);
  const int d = reg.dim();
  RegularizerConstants c = reg.constants();
  double alpha = 4.0 * c.gamma + c.mu;
  double worst = -std::numeric_limits<double>::infinity();
  for (long s = 0; s < samples; ++s) {
    Vec x = rng.interior_simplex_point(d, 1e-3);
    Vec xp = rng.interior_simplex_point(d, 1e-3);
    double l = rng.uniform(0.05, 1.0);
    double lp = rng.uniform(0.05, 1.0);
    Vec y(d), yp(d);
    for (int k = 0; k < d; ++k) {
      y[k] = l * x[k];
      yp[k] = lp * xp[k];
    }
    double lhs = phi_bregman(reg, alpha, yp, y) + phi_bregman(reg, alpha, y, yp);
    double rhs = (alpha - c.gamma) * (lp / l + l / lp - 2.0);
    worst = std::max(worst, rhs - lhs);
  }
  return detail::make_report("joint-divergence-bound/" + detail::label(reg), samples, worst,
                             tol);
}

// With alpha >= 4 gamma + a and l'/l in [1/2, 3/2]:
// D_phi(y'||y) >= (gamma + a) D_{-log}(l'||l) + (1/4) D_psi(x'||x).
inline PropertyReport curvature_transfer(const Regularizer& reg, long samples,
                                         std::uint64_t seed, double tol = 1e-9) {
  Rng rng(seed);
  const int d = reg.dim();
  RegularizerConstants c = reg.constants();
  double a = c.mu;
  double alpha = 4.0 * c.gamma + a;
  double worst = -std::numeric_limits<double>::infinity();
  for (long s = 0; s < samples; ++s) {
    Vec x = rng.interior_simplex_point(d, 1e-3);
    Vec xp = rng.interior_simplex_point(d, 1e-3);
    double l = rng.uniform(0.1, 0.6);
    double lp = l * rng.uniform(0.5, 1.5);
    Vec y(d), yp(d);
    for (int k = 0; k < d; ++k) {
      y[k] = l * x[k];
      yp[k] = lp * xp[k];
    }
    double lhs = phi_bregman(reg, alpha, yp, y);
    double rhs = (c.gamma + a) * neg_log_bregman(lp, l) + 0.25 * reg.bregman(xp, x);
    worst = std::max(worst, rhs - lhs);
  }
  return detail::make_report("curvature-transfer/" + detail::label(reg), samples, worst, tol);
}

// -- Suites ---------------------------------------------------------------------

inline std::vector<PropertyReport> verify_regularizers(int dim, long samples,
                                                       std::uint64_t seed,
                                                       double gamma_scale = 1.0) {
  std::vector<PropertyReport> reports;
  std::uint64_t s = seed;
  for (const Regularizer& reg : detail::global_kinds(dim))
    reports.push_back(
        il_inequality(reg, gamma_scale * reg.constants().gamma, samples, ++s));
  reports.push_back(lil_inequality_log(dim, samples / 10 + 1, ++s));
  std::vector<Regularizer> all = detail::global_kinds(dim);
  all.push_back(Regularizer::log_reg(dim));
  for (const Regularizer& reg : all) {
    reports.push_back(strong_convexity(reg, samples, ++s));
    reports.push_back(gradient_finite_difference(reg, samples / 20 + 1, ++s));
  }
  reports.push_back(lipschitz_implies_il(dim, samples, ++s));
  return reports;
}

inline std::vector<PropertyReport> verify_solvers(int dim, long samples,
                                                  std::uint64_t seed) {
  std::vector<PropertyReport> reports;
  std::uint64_t s = seed;
  for (const Regularizer& reg : detail::global_kinds(dim))
    reports.push_back(strong_concavity(reg, samples, ++s));
  reports.push_back(
      strong_concavity(Regularizer::log_reg(dim), samples / 10 + 1, ++s, 1e-8, false));
  std::vector<Regularizer> all = detail::global_kinds(dim);
  all.push_back(Regularizer::log_reg(dim));
  for (const Regularizer& reg : all) {
    reports.push_back(envelope_derivative(reg, samples / 50 + 1, ++s));
    reports.push_back(bregman_identity(reg, samples, ++s));
    reports.push_back(curvature_transfer(reg, samples, ++s));
  }
  for (const Regularizer& reg : detail::global_kinds(dim))
    reports.push_back(joint_divergence_bound(reg, samples, ++s));
  return reports;
}

// -- Run-based checks -------------------------------------------------------------

// Drives a compliant self-play run and checks the per-round learner
// invariants: multiplicative stability of the learning rate, the cap regime
// whenever some accumulated regret is nonnegative, and orthogonality
// <u^t, x^t> = 0.
inline std::vector<PropertyReport> verify_learners(std::uint64_t seed, long rounds = 300) {
  std::vector<PropertyReport> reports;
  std::vector<Regularizer> kinds = {
      Regularizer::neg_entropy(5), Regularizer::squared_lp(5, 2.0),
      Regularizer::tsallis_q(5, 0.5), Regularizer::log_reg(5)};
  for (const Regularizer& reg : kinds) {
    NormalFormGame game = random_general_sum(2, 5, seed + 11);
    LearnerParams p = default_params(reg, 5, 2, game.smoothness());
    CoftrlLearner watched(reg, p.eta, p.alpha);
    CoftrlLearner opponent(Regularizer::neg_entropy(5), 2, game.smoothness());
    double stability_worst = 0.0, cap_worst = 0.0, ortho_worst = 0.0;
    double prev_lambda = -1.0;
    MixedProfile profile;
    profile.strategies.resize(2);
    for (long t = 0; t < rounds; ++t) {
      Vec r(5);
      for (int k = 0; k < 5; ++k)
        r[k] = watched.cumulative_regret()[k] + watched.last_correction()[k];
      auto [x0, lambda] = watched.step();
      auto [x1, l1] = opponent.step();
      if (max_entry(r) >= 0.0 && !watched.last_at_cap())
        cap_worst = std::max(cap_worst, watched.eta() - lambda);
      if (prev_lambda > 0.0) {
        double ratio = lambda / prev_lambda;
        stability_worst = std::max(stability_worst,
                                   std::max(0.5 - ratio, ratio - 1.5));
      }
      prev_lambda = lambda;
      profile.strategies[0] = x0;
      profile.strategies[1] = x1;
      Vec nu0 = game.utility_gradient(profile, 0);
      Vec nu1 = game.utility_gradient(profile, 1);
      watched.observe(nu0);
      opponent.observe(nu1);
      ortho_worst = std::max(ortho_worst,
                             std::fabs(dot(watched.last_correction(), x0)));
    }
    std::string tag = detail::label(reg);
    reports.push_back(detail::make_report("multiplicative-stability/" + tag, rounds,
                                          stability_worst, 0.0));
    reports.push_back(detail::make_report("cap-regime/" + tag, rounds, cap_worst, 1e-12));
    reports.push_back(detail::make_report("orthogonality/" + tag, rounds, ortho_worst, 1e-10));
  }
  // shift invariance of the argmax and monotonicity of lambda in the shift
  Rng rng(seed + 99);
  Regularizer reg = Regularizer::neg_entropy(6);
  LearnerParams p = default_params(reg, 6, 2, 1.0);
  double shift_worst = 0.0, mono_worst = 0.0;
  const long shift_samples = 50;
  for (long s = 0; s < shift_samples; ++s) {
    Vec r(6);
    for (double& v : r) v = rng.uniform(-30.0, 5.0);
    double prev_lambda = 0.0;
    Vec base_x;
    for (int step = 0; step < 5; ++step) {
      double c = -2.0 + step * 1.0;
      Vec rc(6);
      for (int k = 0; k < 6; ++k) rc[k] = r[k] + c;
      LrSolution lr = lr_control_solve(reg, rc, p.eta, p.alpha);
      Vec g(6);
      for (int k = 0; k < 6; ++k) g[k] = lr.lambda * rc[k];
      Vec x = ftrl_argmax(reg, g).x;
      if (step == 0) {
        base_x = x;
        prev_lambda = lr.lambda;
      } else {
        mono_worst = std::max(mono_worst, prev_lambda - lr.lambda);
        prev_lambda = lr.lambda;
      }
    }
    // the argmax is invariant to the shift only at equal lambda; compare at
    // the cap regime where lambda is pinned to eta
    Vec rpos(6), rpos_shift(6);
    for (int k = 0; k < 6; ++k) {
      rpos[k] = std::fabs(r[k]);
      rpos_shift[k] = rpos[k] + 3.0;
    }
    Vec ga(6), gb(6);
    for (int k = 0; k < 6; ++k) {
      ga[k] = p.eta * rpos[k];
      gb[k] = p.eta * rpos_shift[k];
    }
    shift_worst = std::max(shift_worst, linf_distance(ftrl_argmax(reg, ga).x,
                                                      ftrl_argmax(reg, gb).x));
  }
  reports.push_back(
      detail::make_report("argmax-shift-invariance/negentropy", shift_samples, shift_worst, 1e-9));
  reports.push_back(
      detail::make_report("lambda-monotone-in-shift/negentropy", shift_samples, mono_worst, 1e-8));
  return reports;
}

// Runs a mixed-regularizer self-play trajectory and checks the metric-level
// identities and bounds, plus the per-round equivalence of the two
// formulations of the update.
inline std::vector<PropertyReport> verify_harness(std::uint64_t seed, long rounds = 200) {
  std::vector<PropertyReport> reports;
  NormalFormGame game = random_general_sum(2, 5, seed);
  std::vector<std::unique_ptr<Learner>> learners;
  learners.push_back(
      std::make_unique<CoftrlLearner>(Regularizer::neg_entropy(5), 2, game.smoothness()));
  learners.push_back(
      std::make_unique<CoftrlLearner>(Regularizer::tsallis_q_star(5), 2, game.smoothness()));
  Trajectory traj = self_play(game, learners, rounds, seed);

  double nonneg_worst = 0.0;
  for (int i = 0; i < 2; ++i) {
    double direct = std::max(0.0, external_regret(traj, i));
    double via = nonnegative_regret(traj, i);  // throws if the paths disagree
    nonneg_worst = std::max(nonneg_worst, std::fabs(direct - via));
  }
  reports.push_back(detail::make_report("nonnegative-regret-identity", 2, nonneg_worst, 1e-8));

  double max_reg = std::max(external_regret(traj, 0), external_regret(traj, 1));
  double gap = cce_gap(traj);
  reports.push_back(detail::make_report(
      "cce-gap-inequality", 1, gap - (max_reg / static_cast<double>(rounds)), 1e-9));

  double stability_worst = 0.0;
  for (const PlayerRecord& rec : traj.players)
    for (std::size_t t = 0; t + 1 < rec.lambdas.size(); ++t) {
      double ratio = rec.lambdas[t + 1] / rec.lambdas[t];
      stability_worst = std::max(stability_worst, std::max(0.5 - ratio, ratio - 1.5));
    }
  reports.push_back(
      detail::make_report("multiplicative-stability-run", 2 * (rounds - 1), stability_worst, 0.0));

  reports.push_back(detail::make_report("path-length-bound", 1,
                                        path_length(traj) - path_length_bound(traj), 1e-6));

  // formulation equivalence, all four kinds, 100 rounds each
  double equiv_worst = 0.0;
  std::vector<Regularizer> kinds = {
      Regularizer::neg_entropy(5), Regularizer::squared_lp_star(5),
      Regularizer::tsallis_q_star(5), Regularizer::log_reg(5)};
  for (const Regularizer& reg : kinds) {
    NormalFormGame g2 = random_general_sum(2, 5, seed + 7);
    LearnerParams p = default_params(reg, 5, 2, g2.smoothness());
    CoftrlLearner lead(reg, p.eta, p.alpha);
    CoftrlLearner other(Regularizer::neg_entropy(5), 2, g2.smoothness());
    MixedProfile profile;
    profile.strategies.resize(2);
    for (long t = 0; t < 100; ++t) {
      Vec r(5);
      for (int k = 0; k < 5; ++k)
        r[k] = lead.cumulative_regret()[k] + lead.last_correction()[k];
      auto [x0, lambda] = lead.step();
      auto [x1, l1] = other.step();
      Vec y = lifted_oftrl_step(reg, r, p.eta, p.alpha);
      double mass = sum(y);
      equiv_worst = std::max(equiv_worst, std::fabs(mass - lambda / p.eta));
      for (int k = 0; k < 5; ++k)
        equiv_worst = std::max(equiv_worst, std::fabs(y[k] / mass - x0[k]));
      profile.strategies[0] = x0;
      profile.strategies[1] = x1;
      lead.observe(g2.utility_gradient(profile, 0));
      other.observe(g2.utility_gradient(profile, 1));
    }
  }
  reports.push_back(detail::make_report("formulation-equivalence", 4 * 100, equiv_worst, 1e-6));
  return reports;
}

inline std::vector<PropertyReport> run_suite(const std::string& name, int dim, long samples,
                                             std::uint64_t seed, double gamma_scale = 1.0) {
  std::vector<PropertyReport> reports;
  auto append = [&](std::vector<PropertyReport> r) {
    for (auto& x : r) reports.push_back(std::move(x));
  };
  if (name == "regularizers" || name == "all")
    append(verify_regularizers(dim, samples, seed, gamma_scale));
  if (name == "solvers" || name == "all") append(verify_solvers(dim, samples / 10 + 1, seed + 1));
  if (name == "learners" || name == "all") append(verify_learners(seed + 2));
  if (name == "harness" || name == "all") append(verify_harness(seed + 3));
  if (reports.empty()) throw std::invalid_argument("unknown verify suite: " + name);
  return reports;
}

}  // namespace coftrl::verify
