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
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "coftrl/common.hpp"
#include "coftrl/regularizers.hpp"

namespace coftrl {

// Solution of argmax_{x in simplex} <g, x> - psi(x).
struct FtrlSolution {
  Vec x;
  double objective = 0.0;     // <g, x> - psi(x) at the argmax
  double kkt_residual = 0.0;  // duality-gap bound, see kkt_residual() below
};

// Solution of the learning rate control problem
//   argmax_{lambda in (0, eta]}  alpha log lambda + psi*(lambda r).
struct LrSolution {
  double lambda = 0.0;
  double objective = 0.0;
  bool at_cap = false;
};

namespace detail {

constexpr int kMaxBisectIters = 200;
constexpr double kDefaultTol = 1e-10;

// Stationarity-gap certificate for the simplex argmax: with grad = g - psi'(x),
// max_k grad_k - <grad, x> upper-bounds the suboptimality of x for the concave
// objective, and vanishes exactly at the optimum. The regularizer gradient is
// evaluated from log-coordinates so the certificate stays exact when entries
// of x underflow.
inline double kkt_residual(const Regularizer& reg, ConstSpan g, ConstSpan x,
                           ConstSpan log_x) {
  Vec grad = reg.gradient_log(log_x);
  double max_grad = -std::numeric_limits<double>::infinity();
  double avg = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    double gk = g[k] - grad[k];
    max_grad = std::max(max_grad, gk);
    if (x[k] != 0.0) avg += x[k] * gk;
  }
  return max_grad - avg;
}

inline Vec log_of(ConstSpan x) {
  Vec lx(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) lx[k] = std::log(x[k]);
  return lx;
}

inline void normalize(Vec& x) {
  double s = sum(x);
  for (double& v : x) v /= s;
}

inline Vec softmax(ConstSpan g) {
  double m = max_entry(g);
  Vec x(g.size());
  double s = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    x[k] = std::exp(g[k] - m);
    s += x[k];
  }
  for (double& v : x) v /= s;
  return x;
}

// Log regularizer: stationarity gives x_k = 1/(nu - g_k) with nu > max g and
// sum_k x_k = 1; the sum is strictly decreasing in nu with the root bracketed
// by [max g + 1, max g + d].
inline Vec log_argmax(ConstSpan g) {
  const int d = static_cast<int>(g.size());
  double m = max_entry(g);
  double lo = m + 1.0, hi = m + static_cast<double>(d);
  auto mass = [&](double nu) {
    double s = 0.0;
    for (double gk : g) s += 1.0 / (nu - gk);
    return s;
  };
  for (int it = 0; it < kMaxBisectIters && (hi - lo) > 1e-16 * std::max(1.0, std::fabs(hi)); ++it) {
    double mid = 0.5 * (lo + hi);
    (mass(mid) > 1.0 ? lo : hi) = mid;
  }
  double nu = 0.5 * (lo + hi);
  Vec x(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) x[k] = 1.0 / (nu - g[k]);
  normalize(x);
  return x;
}

// Tsallis regularizer: x_k = [q / ((1-q)(nu - g_k))]^{1/(1-q)} with nu > max g.
// The total mass is strictly decreasing in nu.
inline Vec tsallis_argmax(ConstSpan g, double q) {
  const double d = static_cast<double>(g.size());
  double m = max_entry(g);
  double c = q / (1.0 - q);
  double lo = m + c;                              // top coordinate alone reaches mass 1
  double hi = m + c * std::pow(d, 1.0 - q);       // mass <= 1 from this point on
  auto mass = [&](double nu) {
    double s = 0.0;
    for (double gk : g) s += std::pow(c / (nu - gk), 1.0 / (1.0 - q));
    return s;
  };
  for (int it = 0; it < kMaxBisectIters && (hi - lo) > 1e-16 * std::max(1.0, std::fabs(hi)); ++it) {
    double mid = 0.5 * (lo + hi);
    (mass(mid) > 1.0 ? lo : hi) = mid;
  }
  double nu = 0.5 * (lo + hi);
  Vec x(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) x[k] = std::pow(c / (nu - g[k]), 1.0 / (1.0 - q));
  normalize(x);
  return x;
}

// Squared-lp regularizer. For multiplier nu the positive-orthant maximizer of
// <g - nu 1, x> - psi(x) is x_k = m * ||h/m||_{p'}^{2-p'} (h_k/m)^{p'-1} with
// h = (g - nu 1)_+, m = max h and p' the dual exponent; its total mass is
// nonincreasing in nu by convexity of the Lagrange dual, so the normalization
// nu solves by bisection. p = 2 reduces to the Euclidean simplex projection.
inline Vec lp_argmax(ConstSpan g, double p) {
  const double pdual = p / (p - 1.0);
  auto mass_at = [&](double nu, Vec* out) {
    double m = 0.0;
    for (double gk : g) m = std::max(m, gk - nu);
    if (m <= 0.0) {
      if (out) std::fill(out->begin(), out->end(), 0.0);
      return 0.0;
    }
    double norm_pd = 0.0;
    for (double gk : g) {
      double h = std::max(gk - nu, 0.0) / m;
      norm_pd += std::pow(h, pdual);
    }
    double scale = m * std::pow(norm_pd, (2.0 - pdual) / pdual);
    double s = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      double h = std::max(g[k] - nu, 0.0) / m;
      double xk = scale * std::pow(h, pdual - 1.0);
      if (out) (*out)[k] = xk;
      s += xk;
    }
    return s;
  };
  double hi = max_entry(g);  // mass 0 here
  double step = 1.0, lo = hi - step;
  for (int it = 0; it < kMaxBisectIters && mass_at(lo, nullptr) < 1.0; ++it) {
    step *= 2.0;
    lo = hi - step;
  }
  for (int it = 0; it < kMaxBisectIters && (hi - lo) > 1e-16 * std::max(1.0, std::fabs(hi) + std::fabs(lo)); ++it) {
    double mid = 0.5 * (lo + hi);
    (mass_at(mid, nullptr) > 1.0 ? lo : hi) = mid;
  }
  Vec x(g.size());
  mass_at(0.5 * (lo + hi), &x);
  normalize(x);
  return x;
}

// Generic fallback (used for combinations): entropic mirror ascent on
// F(x) = <g, x> - psi(x), run until the stationarity gap drops below tol.
// Steps are accepted on objective increase while improvements are visible,
// then on residual decrease once progress falls under the floating-point
// floor of the objective.
inline std::pair<Vec, Vec> mirror_ascent_argmax(const Regularizer& reg, ConstSpan g,
                                                double tol) {
  const std::size_t d = g.size();
  Vec logx(d, -std::log(static_cast<double>(d)));
  Vec x(d, 1.0 / static_cast<double>(d));
  auto eval = [&](const Vec& lz, const Vec& z, Vec& grad_out) {
    grad_out = reg.gradient_log(lz);
    double max_g = -std::numeric_limits<double>::infinity(), avg = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      grad_out[k] = g[k] - grad_out[k];
      max_g = std::max(max_g, grad_out[k]);
      avg += z[k] * grad_out[k];
    }
    return max_g - avg;
  };
  auto objective = [&](const Vec& z) { return dot(g, z) - reg.value_raw(z); };
  Vec grad(d);
  double fx = objective(x);
  double residual = eval(logx, x, grad);
  double step = 1.0;
  const int max_iters = 20000;
  for (int it = 0; it < max_iters; ++it) {
    if (residual <= tol) return {x, logx};
    bool improved = false;
    for (int bt = 0; bt < 80 && !improved; ++bt) {
      Vec cand_log(d), cand(d);
      double m = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < d; ++k) {
        cand_log[k] = logx[k] + step * grad[k];
        m = std::max(m, cand_log[k]);
      }
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        cand[k] = std::exp(cand_log[k] - m);
        s += cand[k];
      }
      double log_s = std::log(s);
      for (std::size_t k = 0; k < d; ++k) {
        cand[k] /= s;
        cand_log[k] -= m + log_s;
      }
      double fc = objective(cand);
      Vec cand_grad(d);
      double cand_residual = eval(cand_log, cand, cand_grad);
      if (fc > fx + 1e-15 || cand_residual < residual * (1.0 - 1e-3)) {
        logx = std::move(cand_log);
        x = std::move(cand);
        grad = std::move(cand_grad);
        fx = fc;
        residual = cand_residual;
        step *= 1.3;
        improved = true;
      } else {
        step *= 0.5;
      }
    }
    if (!improved) {
      if (residual <= 1e3 * tol) return {x, logx};  // stalled at arithmetic precision
      throw ConvergenceError("mirror ascent stalled", residual);
    }
  }
  throw ConvergenceError("mirror ascent did not converge", residual);
}

}  // namespace detail

// Argmax over the simplex of <g, x> - psi(x). Closed forms and 1-D dual
// bisections cover the built-in kinds; combinations run mirror ascent.
inline FtrlSolution ftrl_argmax(const Regularizer& reg, ConstSpan g,
                                double tol = detail::kDefaultTol) {
  if (!all_finite(g)) throw std::invalid_argument("ftrl_argmax: non-finite input");
  if (static_cast<int>(g.size()) != reg.dim())
    throw std::invalid_argument("ftrl_argmax: dimension mismatch");
  if (!(tol > 0.0)) throw std::invalid_argument("ftrl_argmax: tol must be positive");
  FtrlSolution sol;
  Vec log_x;
  switch (reg.kind()) {
    case RegKind::kNegEntropy: {
      sol.x = detail::softmax(g);
      sol.objective = logsumexp(g);
      double lse = sol.objective;
      log_x.resize(g.size());
      for (std::size_t k = 0; k < g.size(); ++k) log_x[k] = g[k] - lse;
      break;
    }
    case RegKind::kLog:
      sol.x = detail::log_argmax(g);
      sol.objective = dot(g, sol.x) - reg.value(sol.x);
      log_x = detail::log_of(sol.x);
      break;
    case RegKind::kTsallisQ:
      sol.x = detail::tsallis_argmax(g, reg.q());
      sol.objective = dot(g, sol.x) - reg.value(sol.x);
      log_x = detail::log_of(sol.x);
      break;
    case RegKind::kSquaredLp:
      sol.x = detail::lp_argmax(g, reg.p());
      sol.objective = dot(g, sol.x) - reg.value(sol.x);
      log_x = detail::log_of(sol.x);
      break;
    case RegKind::kCombination: {
      auto [x, lx] = detail::mirror_ascent_argmax(reg, g, tol);
      sol.x = std::move(x);
      log_x = std::move(lx);
      sol.objective = dot(g, sol.x) - reg.value_raw(sol.x);
      break;
    }
  }
  sol.kkt_residual = detail::kkt_residual(reg, g, sol.x, log_x);
  return sol;
}

// Restricted convex conjugate psi*(g) = max_{x in simplex} <g, x> - psi(x),
// returned together with its argmax.
inline std::pair<double, Vec> conjugate(const Regularizer& reg, ConstSpan g,
                                        double tol = detail::kDefaultTol) {
  FtrlSolution sol = ftrl_argmax(reg, g, tol);
  return {sol.objective, std::move(sol.x)};
}

// f(lambda) = alpha log lambda + psi*(lambda r), the learning rate control
// objective.
inline double lr_objective(const Regularizer& reg, ConstSpan r, double alpha,
                           double lambda, double tol = detail::kDefaultTol) {
  Vec g(r.size());
  for (std::size_t k = 0; k < r.size(); ++k) g[k] = lambda * r[k];
  return alpha * std::log(lambda) + ftrl_argmax(reg, g, tol).objective;
}

// f'(lambda) = alpha/lambda + <r, x_lambda> by the envelope theorem.
inline double lr_derivative(const Regularizer& reg, ConstSpan r, double alpha,
                            double lambda, double tol = detail::kDefaultTol) {
  Vec g(r.size());
  for (std::size_t k = 0; k < r.size(); ++k) g[k] = lambda * r[k];
  return alpha / lambda + dot(r, ftrl_argmax(reg, g, tol).x);
}

/**
 * Solves the learning rate control problem over (0, eta].
 *
 * f is (alpha - gamma)-strongly concave for intrinsically Lipschitz
 * regularizers, so the solver checks the cap regime f'(eta) >= 0 first and
 * otherwise bisects on the sign of f'. `require_concave` enforces
 * alpha > gamma for globally IL kinds; callers probing the landscape outside
 * the certified parameter regime can disable it.
 */
inline LrSolution lr_control_solve(const Regularizer& reg, ConstSpan r, double eta,
                                   double alpha, double tol = detail::kDefaultTol,
                                   bool require_concave = true) {
  if (!(eta > 0.0)) throw std::invalid_argument("lr_control_solve: eta must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("lr_control_solve: tol must be positive");
  if (require_concave) {
    RegularizerConstants c = reg.constants();
    if (!c.is_local && !(alpha > c.gamma))
      throw std::invalid_argument("lr_control_solve: alpha must exceed gamma");
  }
  LrSolution sol;
  double fp_eta = lr_derivative(reg, r, alpha, eta, tol);
  if (fp_eta >= 0.0) {
    sol.lambda = eta;
    sol.at_cap = true;
    sol.objective = lr_objective(reg, r, alpha, eta, tol);
    return sol;
  }
  double lo = 1e-12 * eta, hi = eta;
  double fp_lo = lr_derivative(reg, r, alpha, lo, tol);
  if (fp_lo < 0.0)
    throw ConvergenceError("lr_control_solve: no bracket above lambda_min", fp_lo);
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < detail::kMaxBisectIters; ++it) {
    mid = 0.5 * (lo + hi);
    double fp = lr_derivative(reg, r, alpha, mid, tol);
    if (std::fabs(fp) <= tol) break;
    (fp > 0.0 ? lo : hi) = mid;
    if ((hi - lo) <= 1e-15 * hi) {
      mid = 0.5 * (lo + hi);
      break;
    }
  }
  sol.lambda = mid;
  sol.at_cap = false;
  sol.objective = lr_objective(reg, r, alpha, mid, tol);
  return sol;
}

// -- Lifted space --------------------------------------------------------------
//
// The equivalent single-step formulation lives on (0,1] * simplex with the
// composite regularizer phi(y) = -alpha log(1'y) + psi(y / 1'y). The mapping
// between the two formulations is y = (lambda/eta) x, so the total mass of y
// is lambda/eta.

inline double phi_value(const Regularizer& reg, double alpha, ConstSpan y) {
  double s = sum(y);
  if (!(s > 0.0)) throw std::domain_error("phi_value: total mass must be positive");
  Vec x(y.size());
  for (std::size_t k = 0; k < y.size(); ++k) x[k] = y[k] / s;
  return -alpha * std::log(s) + reg.value(x);
}

inline Vec phi_gradient(const Regularizer& reg, double alpha, ConstSpan y) {
  double s = sum(y);
  if (!(s > 0.0)) throw std::domain_error("phi_gradient: total mass must be positive");
  Vec x(y.size());
  for (std::size_t k = 0; k < y.size(); ++k) x[k] = y[k] / s;
  Vec gpsi = reg.gradient(x);
  double inner = dot(gpsi, x);
  Vec g(y.size());
  for (std::size_t k = 0; k < y.size(); ++k) g[k] = (-alpha - inner + gpsi[k]) / s;
  return g;
}

inline double phi_bregman(const Regularizer& reg, double alpha, ConstSpan y_new,
                          ConstSpan y_ref) {
  Vec g = phi_gradient(reg, alpha, y_ref);
  double d = phi_value(reg, alpha, y_new) - phi_value(reg, alpha, y_ref);
  for (std::size_t k = 0; k < y_new.size(); ++k) d -= g[k] * (y_new[k] - y_ref[k]);
  return d;
}

// Bregman divergence of -log on scalars.
inline double neg_log_bregman(double lp, double l) {
  return -std::log(lp) + std::log(l) + (lp - l) / l;
}

// Value of the lifted objective eta <r, y> + alpha log(1'y) - psi(y/1'y) at
// total mass s, maximized over the direction (the inner conjugate).
inline double lifted_objective_at_mass(const Regularizer& reg, ConstSpan r, double eta,
                                       double alpha, double s,
                                       double tol = detail::kDefaultTol) {
  Vec g(r.size());
  for (std::size_t k = 0; k < r.size(); ++k) g[k] = eta * s * r[k];
  return alpha * std::log(s) + ftrl_argmax(reg, g, tol).objective;
}

/**
 * One step of the lifted formulation: maximizes
 *   eta <r, y> + alpha log(1'y) - psi(y / 1'y)  over  y in (0,1] * simplex
 * by golden-section search on the total mass (a value-only route, independent
 * of the derivative bisection used by lr_control_solve) and returns y.
 */
inline Vec lifted_oftrl_step(const Regularizer& reg, ConstSpan r, double eta,
                             double alpha, double tol = detail::kDefaultTol) {
  const double inv_phi = 0.6180339887498949;  // (sqrt(5)-1)/2
  double a = 1e-12, b = 1.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = lifted_objective_at_mass(reg, r, eta, alpha, x1, tol);
  double f2 = lifted_objective_at_mass(reg, r, eta, alpha, x2, tol);
  for (int it = 0; it < 200 && (b - a) > 1e-13; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = lifted_objective_at_mass(reg, r, eta, alpha, x2, tol);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = lifted_objective_at_mass(reg, r, eta, alpha, x1, tol);
    }
  }
  double s = 0.5 * (a + b);
  Vec g(r.size());
  for (std::size_t k = 0; k < r.size(); ++k) g[k] = eta * s * r[k];
  Vec x = ftrl_argmax(reg, g, tol).x;
  for (double& v : x) v *= s;
  return x;
}

// Learning rate at each grid point of optimistic regrets, for 2-action
// regularizers. Runs outside the certified alpha > gamma regime on purpose,
// so the concavity check is disabled.
inline Vec landscape_grid(const Regularizer& reg, double eta, double alpha,
                          const std::vector<std::pair<double, double>>& grid) {
  if (reg.dim() != 2)
    throw std::invalid_argument("landscape_grid: regularizer must have dimension 2");
  Vec lambdas;
  lambdas.reserve(grid.size());
  for (const auto& [r1, r2] : grid) {
    Vec r = {r1, r2};
    lambdas.push_back(
        lr_control_solve(reg, r, eta, alpha, detail::kDefaultTol, /*require_concave=*/false)
            .lambda);
  }
  return lambdas;
}

}  // namespace coftrl
