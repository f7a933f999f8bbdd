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
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "coftrl/common.hpp"
#include "coftrl/regularizers.hpp"
#include "coftrl/solvers.hpp"

namespace coftrl {

struct LearnerParams {
  double eta = 0.0;
  double alpha = 0.0;
};

// Largest certified learning-rate cap and smallest certified alpha for a
// d-action learner in an n-player L-smooth game:
//   alpha = 4 gamma + mu,
//   eta   = min{ 3 gamma / 80, mu / (32 sqrt 2), mu / (L n 32 sqrt 6) },
// with the extra cap 1/8 for locally intrinsically Lipschitz regularizers.
inline LearnerParams default_params(const Regularizer& reg, int d, int n, double L) {
  (void)d;  // the constants already depend on the regularizer's own dimension
  RegularizerConstants c = reg.constants();
  LearnerParams p;
  p.alpha = 4.0 * c.gamma + c.mu;
  double eta = std::min(3.0 * c.gamma / 80.0, c.mu / (32.0 * std::sqrt(2.0)));
  eta = std::min(eta, c.mu / (L * n * 32.0 * std::sqrt(6.0)));
  if (c.is_local) eta = std::min(eta, 1.0 / 8.0);
  p.eta = eta;
  return p;
}

struct StepResult {
  Vec x;
  double lambda = 0.0;
};

// Round-based no-regret learner: step() commits to a mixed strategy, then
// observe() feeds back the utility vector for the round. Calls must alternate.
class Learner {
 public:
  virtual ~Learner() = default;
  virtual StepResult step() = 0;
  virtual void observe(ConstSpan nu) = 0;
  virtual int actions() const = 0;
  virtual std::string name() const = 0;
};

namespace detail {

inline void check_bounded_utility(ConstSpan nu, int d) {
  if (static_cast<int>(nu.size()) != d)
    throw std::invalid_argument("observe: utility vector has wrong length");
  if (linf_norm(nu) > 1.0 + 1e-9)
    throw std::invalid_argument("observe: utilities must be bounded by 1");
}

}  // namespace detail

// Optimistic FTRL with dynamic learning rate control. Keeps the accumulated
// corrected regrets U, the last correction u, and picks each round
//   r = U + u,
//   lambda = argmax_{(0, eta]} alpha log(lambda) + psi*(lambda r),
//   x = argmax_{simplex} lambda <r, x> - psi(x).
class CoftrlLearner : public Learner {
 public:
  CoftrlLearner(Regularizer reg, double eta, double alpha)
      : reg_(std::move(reg)),
        eta_(eta),
        alpha_(alpha),
        cum_regret_(reg_.dim(), 0.0),
        last_correction_(reg_.dim(), 0.0),
        last_x_(reg_.dim(), 1.0 / reg_.dim()),
        last_lambda_(eta) {
    if (!(eta_ > 0.0)) throw std::invalid_argument("coftrl: eta must be positive");
    RegularizerConstants c = reg_.constants();
    if (!c.is_local && !(alpha_ > c.gamma))
      throw std::invalid_argument("coftrl: alpha must exceed gamma");
  }

  CoftrlLearner(Regularizer reg, int n_players, double smoothness)
      : CoftrlLearner(reg,
                      default_params(reg, reg.dim(), n_players, smoothness).eta,
                      default_params(reg, reg.dim(), n_players, smoothness).alpha) {}

  StepResult step() override {
    Vec r(reg_.dim());
    for (int k = 0; k < reg_.dim(); ++k) r[k] = cum_regret_[k] + last_correction_[k];
    LrSolution lr = lr_control_solve(reg_, r, eta_, alpha_);
    Vec g(reg_.dim());
    for (int k = 0; k < reg_.dim(); ++k) g[k] = lr.lambda * r[k];
    last_x_ = ftrl_argmax(reg_, g).x;
    last_lambda_ = lr.lambda;
    last_at_cap_ = lr.at_cap;
    stepped_ = true;
    return {last_x_, last_lambda_};
  }

  void observe(ConstSpan nu) override {
    if (!stepped_) throw std::logic_error("observe: step() must be called first");
    detail::check_bounded_utility(nu, reg_.dim());
    double avg = dot(nu, last_x_);
    Vec u(reg_.dim());
    double step_norm = 0.0;  // || r^{t+1} - r^t ||_inf = || 2 u^t - u^{t-1} ||_inf
    for (int k = 0; k < reg_.dim(); ++k) {
      u[k] = nu[k] - avg;
      step_norm = std::max(step_norm, std::fabs(2.0 * u[k] - last_correction_[k]));
      cum_regret_[k] += u[k];
    }
    max_regret_step_ = std::max(max_regret_step_, step_norm);
    last_correction_ = std::move(u);
    ++round_;
    stepped_ = false;
  }

  int actions() const override { return reg_.dim(); }
  std::string name() const override { return "coftrl-" + kind_name(reg_.kind()); }

  const Regularizer& regularizer() const { return reg_; }
  double eta() const { return eta_; }
  double alpha() const { return alpha_; }
  int round() const { return round_; }
  double last_lambda() const { return last_lambda_; }
  bool last_at_cap() const { return last_at_cap_; }
  const Vec& last_x() const { return last_x_; }
  const Vec& cumulative_regret() const { return cum_regret_; }
  const Vec& last_correction() const { return last_correction_; }
  // Empirical max of ||r^{t+1} - r^t||_inf over the run so far.
  double max_regret_step() const { return max_regret_step_; }

 private:
  Regularizer reg_;
  double eta_, alpha_;
  Vec cum_regret_, last_correction_, last_x_;
  double last_lambda_;
  bool last_at_cap_ = true;
  bool stepped_ = false;
  int round_ = 1;
  double max_regret_step_ = 0.0;
};

enum class BaselineKind { kFixedOftrl, kMwu, kOmwu };

// Classical baselines. FixedOftrl plays the optimistic FTRL step with a fixed
// learning rate eta; Mwu drops the optimism term; Omwu is FixedOftrl with the
// negative-entropy regularizer.
class BaselineLearner : public Learner {
 public:
  static BaselineLearner fixed_oftrl(Regularizer reg, double eta) {
    return BaselineLearner(BaselineKind::kFixedOftrl, std::move(reg), eta);
  }
  static BaselineLearner mwu(int dim, double eta) {
    return BaselineLearner(BaselineKind::kMwu, Regularizer::neg_entropy(dim), eta);
  }
  static BaselineLearner omwu(int dim, double eta) {
    return BaselineLearner(BaselineKind::kOmwu, Regularizer::neg_entropy(dim), eta);
  }

  StepResult step() override {
    Vec g(reg_.dim());
    for (int k = 0; k < reg_.dim(); ++k) {
      double r = cum_regret_[k];
      if (kind_ != BaselineKind::kMwu) r += last_correction_[k];
      g[k] = eta_ * r;
    }
    last_x_ = ftrl_argmax(reg_, g).x;
    stepped_ = true;
    return {last_x_, eta_};
  }

  void observe(ConstSpan nu) override {
    if (!stepped_) throw std::logic_error("observe: step() must be called first");
    detail::check_bounded_utility(nu, reg_.dim());
    double avg = dot(nu, last_x_);
    for (int k = 0; k < reg_.dim(); ++k) {
      double u = nu[k] - avg;
      cum_regret_[k] += u;
      last_correction_[k] = u;
    }
    ++round_;
    stepped_ = false;
  }

  int actions() const override { return reg_.dim(); }
  std::string name() const override {
    switch (kind_) {
      case BaselineKind::kFixedOftrl: return "oftrl-" + kind_name(reg_.kind());
      case BaselineKind::kMwu: return "mwu";
      case BaselineKind::kOmwu: return "omwu";
    }
    return "?";
  }

  BaselineKind baseline_kind() const { return kind_; }
  double eta() const { return eta_; }
  const Vec& last_x() const { return last_x_; }

 private:
  BaselineLearner(BaselineKind kind, Regularizer reg, double eta)
      : kind_(kind),
        reg_(std::move(reg)),
        eta_(eta),
        cum_regret_(reg_.dim(), 0.0),
        last_correction_(reg_.dim(), 0.0),
        last_x_(reg_.dim(), 1.0 / reg_.dim()) {
    if (!(eta_ > 0.0)) throw std::invalid_argument("baseline: eta must be positive");
  }

  BaselineKind kind_;
  Regularizer reg_;
  double eta_;
  Vec cum_regret_, last_correction_, last_x_;
  bool stepped_ = false;
  int round_ = 1;
};

// MWU rate with the classical sqrt(T) guarantee for utilities in [-1, 1]:
// regret <= sqrt(2 T log d).
inline double mwu_default_eta(int d, long horizon) {
  return std::sqrt(2.0 * std::log(static_cast<double>(d)) /
                   static_cast<double>(horizon));
}

// Wraps a COFTRL learner with the adversarial safeguard: it tracks the
// cumulative squared utility variation and permanently hands control to an
// MWU fallback once the variation exceeds what compliant self-play could
// produce, restoring the sqrt(T) adversarial guarantee.
class SafeguardedLearner : public Learner {
 public:
  SafeguardedLearner(CoftrlLearner inner, BaselineLearner fallback,
                     int n_players = 1, double smoothness = 1.0)
      : inner_(std::move(inner)),
        fallback_(std::move(fallback)),
        n_(n_players),
        smoothness_(smoothness) {
    if (inner_.actions() != fallback_.actions())
      throw std::invalid_argument("safeguard: learner dimensions differ");
  }

  StepResult step() override {
    return switched_ ? fallback_.step() : inner_.step();
  }

  void observe(ConstSpan nu) override {
    if (switched_)
      fallback_.observe(nu);
    else
      inner_.observe(nu);
    if (last_nu_.has_value()) {
      double d = linf_distance(nu, *last_nu_);
      variation_sum_ += d * d;
    }
    last_nu_ = Vec(nu.begin(), nu.end());
    ++rounds_seen_;
    safeguard_check(rounds_seen_);
  }

  // Threshold from the compliant-play variation bound
  //   L^2 n^2 (128 eta / mu) (3 + (alpha log t + R) / eta),
  // evaluated anytime at the current round. Returns the (sticky) switch state.
  bool safeguard_check(int t) {
    if (switched_) return true;
    if (variation_sum_ > variation_threshold(t)) {
      switched_ = true;
      switch_round_ = t;
    }
    return switched_;
  }

  double variation_threshold(int t) const {
    RegularizerConstants c = inner_.regularizer().constants();
    double r_max = effective_r_max(inner_.regularizer(), std::max(t, 2));
    double eta = inner_.eta(), alpha = inner_.alpha();
    double log_t = std::log(static_cast<double>(std::max(t, 1)));
    return smoothness_ * smoothness_ * n_ * n_ * (128.0 * eta / c.mu) *
           (3.0 + (alpha * log_t + r_max) / eta);
  }

  int actions() const override { return inner_.actions(); }
  std::string name() const override { return "safeguarded-" + inner_.name(); }

  bool switched() const { return switched_; }
  int switch_round() const { return switch_round_; }
  double variation_sum() const { return variation_sum_; }
  const CoftrlLearner& inner() const { return inner_; }

 private:
  CoftrlLearner inner_;
  BaselineLearner fallback_;
  int n_;
  double smoothness_;
  bool switched_ = false;
  int switch_round_ = -1;
  double variation_sum_ = 0.0;
  int rounds_seen_ = 0;
  std::optional<Vec> last_nu_;
};

}  // namespace coftrl
