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
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "coftrl/common.hpp"

namespace coftrl {

enum class RegKind { kNegEntropy, kLog, kSquaredLp, kTsallisQ, kCombination };

// Certified parameters of a simplex regularizer: intrinsic-Lipschitz constant
// gamma (gamma(1) for the locally-IL log regularizer), strong convexity mu
// with respect to the l1 norm, and r_max = max over the simplex of the value.
struct RegularizerConstants {
  double gamma = 0.0;
  double mu = 0.0;
  double r_max = 0.0;
  bool is_local = false;
};

// A convex regularizer on the probability simplex with value, gradient and
// Bregman-divergence oracles. Instances are immutable value objects.
//
// Supported kinds (d = dimension):
//   NegEntropy     sum_k x_k log x_k                        (0 log 0 = 0)
//   Log            -sum_k log x_k
//   SquaredLp(p)   (1/2) ||x||_p^2, p in (1, 2]
//   TsallisQ(q)    (1 - sum_k x_k^q) / (1 - q), q in (0, 1)
//   Combination    positively weighted sum of the above
class Regularizer {
 public:
  static Regularizer neg_entropy(int dim) { return Regularizer(RegKind::kNegEntropy, dim); }

  static Regularizer log_reg(int dim) { return Regularizer(RegKind::kLog, dim); }

  static Regularizer squared_lp(int dim, double p) {
    if (!(p > 1.0 && p <= 2.0))
      throw std::invalid_argument("squared_lp: p must lie in (1, 2]");
    Regularizer r(RegKind::kSquaredLp, dim);
    r.p_ = p;
    return r;
  }

  // p* = 1 + 1/log d, the regret-optimal exponent. Requires log d > 1.
  static Regularizer squared_lp_star(int dim) {
    double p = 1.0 + 1.0 / std::log(static_cast<double>(dim));
    return squared_lp(dim, p);
  }

  static Regularizer tsallis_q(int dim, double q) {
    if (!(q > 0.0 && q < 1.0))
      throw std::invalid_argument("tsallis_q: q must lie in (0, 1)");
    Regularizer r(RegKind::kTsallisQ, dim);
    r.q_ = q;
    return r;
  }

  // q* = 1 - 1/log d, the regret-optimal index. Requires log d > 1.
  static Regularizer tsallis_q_star(int dim) {
    double q = 1.0 - 1.0 / std::log(static_cast<double>(dim));
    return tsallis_q(dim, q);
  }

  RegKind kind() const { return kind_; }
  int dim() const { return dim_; }
  double p() const { return p_; }
  double q() const { return q_; }
  const std::vector<std::pair<double, Regularizer>>& parts() const { return parts_; }

  bool is_symmetric() const { return true; }  // all supported kinds are permutation-symmetric

  double value(ConstSpan x) const {
    validate_simplex(x, 1e-10, "regularizer value");
    return value_unchecked(x);
  }

  // Raw formula evaluation without the simplex-membership check; finite
  // differencing and other off-simplex probes go through here.
  double value_raw(ConstSpan x) const { return value_unchecked(x); }

  // Analytic gradient. Kinds with a singular gradient at the boundary
  // (NegEntropy, Log, TsallisQ) require strictly positive input.
  Vec gradient(ConstSpan x) const {
    if (requires_positive())
      for (double v : x)
        if (!(v > 0.0)) throw std::domain_error("regularizer gradient: zero entry");
    Vec g(x.size(), 0.0);
    gradient_into(x, g);
    return g;
  }

  // Gradient evaluated from log-coordinates. Exact even where exp(log_x)
  // underflows to zero, which matters when certifying solutions whose
  // iterates concentrate sharply.
  Vec gradient_log(ConstSpan log_x) const {
    Vec g(log_x.size(), 0.0);
    gradient_log_into(log_x, g);
    return g;
  }

  // D_psi(x_new || x_ref) = psi(x_new) - psi(x_ref) - <grad psi(x_ref), x_new - x_ref>.
  double bregman(ConstSpan x_new, ConstSpan x_ref) const {
    if (requires_positive())
      for (double v : x_ref)
        if (!(v > 0.0)) throw std::domain_error("bregman: singular reference point");
    Vec g = gradient_ref(x_ref);
    double d = value_unchecked(x_new) - value_unchecked(x_ref);
    for (std::size_t k = 0; k < x_new.size(); ++k) d -= g[k] * (x_new[k] - x_ref[k]);
    return d;
  }

  RegularizerConstants constants() const {
    RegularizerConstants c;
    const double d = static_cast<double>(dim_);
    switch (kind_) {
      case RegKind::kNegEntropy: {
        double logd = std::log(d);
        c.gamma = 3.0 * logd * logd;
        c.mu = 1.0;
        c.r_max = 0.0;  // attained at the vertices
        break;
      }
      case RegKind::kLog: {
        c.gamma = 18.0 * d;  // gamma(1); the log regularizer is only locally IL
        c.mu = 1.0;
        c.r_max = std::numeric_limits<double>::infinity();
        c.is_local = true;
        break;
      }
      case RegKind::kSquaredLp: {
        c.gamma = 2.0 / (p_ - 1.0);
        c.mu = (p_ - 1.0) * std::pow(d, 2.0 / p_ - 2.0);
        c.r_max = 0.5;  // ||e_k||_p = 1
        break;
      }
      case RegKind::kTsallisQ: {
        c.gamma = 4.0 * std::pow(d, 1.0 - q_) / ((1.0 - q_) * (1.0 - q_));
        c.mu = q_;
        c.r_max = 0.0;  // psi <= 0 on the simplex, zero at the vertices
        break;
      }
      case RegKind::kCombination: {
        for (const auto& [w, part] : parts_) {
          RegularizerConstants pc = part.constants();
          c.gamma += w * pc.gamma;
          c.mu += w * pc.mu;
          c.r_max += w * pc.r_max;
          c.is_local = c.is_local || pc.is_local;
        }
        break;
      }
    }
    return c;
  }

  // Minimum of the value over the simplex (attained at the uniform point).
  double min_value() const {
    Vec u(dim_, 1.0 / dim_);
    return value_unchecked(u);
  }

  friend Regularizer combine(std::vector<std::pair<double, Regularizer>> parts);

 private:
  Regularizer(RegKind kind, int dim) : kind_(kind), dim_(dim) {
    if (dim < 2) throw std::invalid_argument("regularizer: dimension must be >= 2");
  }

  bool requires_positive() const {
    switch (kind_) {
      case RegKind::kNegEntropy:
      case RegKind::kLog:
      case RegKind::kTsallisQ:
        return true;
      case RegKind::kSquaredLp:
        return false;
      case RegKind::kCombination:
        for (const auto& [w, part] : parts_)
          if (part.requires_positive()) return true;
        return false;
    }
    return true;
  }

  double value_unchecked(ConstSpan x) const {
    switch (kind_) {
      case RegKind::kNegEntropy: {
        double s = 0.0;
        for (double v : x)
          if (v > 0.0) s += v * std::log(v);
        return s;
      }
      case RegKind::kLog: {
        double s = 0.0;
        for (double v : x) {
          if (v <= 0.0) return std::numeric_limits<double>::infinity();
          s -= std::log(v);
        }
        return s;
      }
      case RegKind::kSquaredLp: {
        double s = 0.0;
        for (double v : x) s += std::pow(std::fabs(v), p_);
        return 0.5 * std::pow(s, 2.0 / p_);
      }
      case RegKind::kTsallisQ: {
        double s = 0.0;
        for (double v : x) s += std::pow(std::max(v, 0.0), q_);
        return (1.0 - s) / (1.0 - q_);
      }
      case RegKind::kCombination: {
        double s = 0.0;
        for (const auto& [w, part] : parts_) s += w * part.value_unchecked(x);
        return s;
      }
    }
    return 0.0;
  }

  Vec gradient_ref(ConstSpan x) const {
    Vec g(x.size(), 0.0);
    gradient_into(x, g);
    return g;
  }

  void gradient_into(ConstSpan x, Vec& g) const {
    switch (kind_) {
      case RegKind::kNegEntropy:
        for (std::size_t k = 0; k < x.size(); ++k) g[k] += 1.0 + std::log(x[k]);
        return;
      case RegKind::kLog:
        for (std::size_t k = 0; k < x.size(); ++k) g[k] += -1.0 / x[k];
        return;
      case RegKind::kSquaredLp: {
        double s = 0.0;
        for (double v : x) s += std::pow(std::fabs(v), p_);
        double scale = std::pow(s, 2.0 / p_ - 1.0);  // ||x||_p^{2-p}
        for (std::size_t k = 0; k < x.size(); ++k)
          g[k] += scale * std::pow(std::max(x[k], 0.0), p_ - 1.0);
        return;
      }
      case RegKind::kTsallisQ: {
        double coef = -q_ / (1.0 - q_);
        for (std::size_t k = 0; k < x.size(); ++k) g[k] += coef * std::pow(x[k], q_ - 1.0);
        return;
      }
      case RegKind::kCombination: {
        Vec tmp(x.size(), 0.0);
        for (const auto& [w, part] : parts_) {
          std::fill(tmp.begin(), tmp.end(), 0.0);
          part.gradient_into(x, tmp);
          for (std::size_t k = 0; k < x.size(); ++k) g[k] += w * tmp[k];
        }
        return;
      }
    }
  }

  void gradient_log_into(ConstSpan log_x, Vec& g) const {
    switch (kind_) {
      case RegKind::kNegEntropy:
        for (std::size_t k = 0; k < log_x.size(); ++k) g[k] += 1.0 + log_x[k];
        return;
      case RegKind::kLog:
        for (std::size_t k = 0; k < log_x.size(); ++k) g[k] += -std::exp(-log_x[k]);
        return;
      case RegKind::kSquaredLp: {
        double s = 0.0;
        for (double lv : log_x) s += std::exp(p_ * lv);
        double scale = std::pow(s, 2.0 / p_ - 1.0);
        for (std::size_t k = 0; k < log_x.size(); ++k)
          g[k] += scale * std::exp((p_ - 1.0) * log_x[k]);
        return;
      }
      case RegKind::kTsallisQ: {
        double coef = -q_ / (1.0 - q_);
        for (std::size_t k = 0; k < log_x.size(); ++k)
          g[k] += coef * std::exp((q_ - 1.0) * log_x[k]);
        return;
      }
      case RegKind::kCombination: {
        Vec tmp(log_x.size(), 0.0);
        for (const auto& [w, part] : parts_) {
          std::fill(tmp.begin(), tmp.end(), 0.0);
          part.gradient_log_into(log_x, tmp);
          for (std::size_t k = 0; k < log_x.size(); ++k) g[k] += w * tmp[k];
        }
        return;
      }
    }
  }

  RegKind kind_;
  int dim_;
  double p_ = 0.0;
  double q_ = 0.0;
  std::vector<std::pair<double, Regularizer>> parts_;
};

// Positively weighted sum of regularizers of equal dimension. Value, gradient
// and Bregman oracles add up; the certified constants follow the sum rule
// gamma = sum a_i gamma_i, mu = sum a_i mu_i.
inline Regularizer combine(std::vector<std::pair<double, Regularizer>> parts) {
  if (parts.empty()) throw std::invalid_argument("combine: no parts");
  int dim = parts.front().second.dim();
  for (const auto& [w, part] : parts) {
    if (!(w > 0.0)) throw std::invalid_argument("combine: weights must be positive");
    if (part.dim() != dim) throw std::invalid_argument("combine: dimension mismatch");
  }
  Regularizer r(RegKind::kCombination, dim);
  r.parts_ = std::move(parts);
  return r;
}

// r_max as used in regret and path-length bounds. The log regularizer is
// unbounded on the simplex; its bound comparator is interior, which costs
// d log(dT) at horizon T. All other kinds return the stored constant.
inline double effective_r_max(const Regularizer& reg, long horizon) {
  RegularizerConstants c = reg.constants();
  if (std::isfinite(c.r_max)) return c.r_max;
  double d = static_cast<double>(reg.dim());
  return d * std::log(d * static_cast<double>(horizon));
}

inline std::string kind_name(RegKind k) {
  switch (k) {
    case RegKind::kNegEntropy: return "negentropy";
    case RegKind::kLog: return "log";
    case RegKind::kSquaredLp: return "squared_lp";
    case RegKind::kTsallisQ: return "tsallis";
    case RegKind::kCombination: return "combination";
  }
  return "?";
}

}  // namespace coftrl
