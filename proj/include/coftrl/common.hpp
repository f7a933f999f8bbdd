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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace coftrl {

using Vec = std::vector<double>;
using ConstSpan = std::span<const double>;

// Thrown by iterative solvers that exhaust their iteration budget; carries the
// best residual reached so callers can report it.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

inline double dot(ConstSpan a, ConstSpan b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

inline double l1_norm(ConstSpan a) {
  double s = 0.0;
  for (double v : a) s += std::fabs(v);
  return s;
}

inline double l1_distance(ConstSpan a, ConstSpan b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += std::fabs(a[k] - b[k]);
  return s;
}

inline double linf_norm(ConstSpan a) {
  double s = 0.0;
  for (double v : a) s = std::max(s, std::fabs(v));
  return s;
}

inline double linf_distance(ConstSpan a, ConstSpan b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s = std::max(s, std::fabs(a[k] - b[k]));
  return s;
}

inline double max_entry(ConstSpan a) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : a) m = std::max(m, v);
  return m;
}

inline double sum(ConstSpan a) {
  double s = 0.0;
  for (double v : a) s += v;
  return s;
}

inline bool all_finite(ConstSpan a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

inline bool is_simplex_point(ConstSpan x, double tol = 1e-10) {
  if (x.empty()) return false;
  double s = 0.0;
  for (double v : x) {
    if (!(v >= -tol) || !std::isfinite(v)) return false;
    s += v;
  }
  return std::fabs(s - 1.0) <= tol;
}

inline void validate_simplex(ConstSpan x, double tol, const char* what) {
  if (!is_simplex_point(x, tol))
    throw std::invalid_argument(std::string(what) + ": not a probability vector");
}

// Clamps entries to at least `floor` and renormalizes. Iterates produced by the
// inner solvers pass through here before any regularizer oracle with a singular
// gradient sees them.
inline Vec clamped_simplex(ConstSpan x, double floor = 1e-14) {
  Vec out(x.begin(), x.end());
  double s = 0.0;
  for (double& v : out) {
    v = std::max(v, floor);
    s += v;
  }
  for (double& v : out) v /= s;
  return out;
}

inline double logsumexp(ConstSpan g) {
  double m = max_entry(g);
  double s = 0.0;
  for (double v : g) s += std::exp(v - m);
  return m + std::log(s);
}

// Deterministic random source. Draws are reduced from raw mt19937_64 output by
// fixed arithmetic so streams are reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  int uniform_int(int n) { return static_cast<int>(engine_() % static_cast<std::uint64_t>(n)); }

  // Uniform point on the simplex (flat Dirichlet).
  Vec simplex_point(int d) {
    Vec x(d);
    double s = 0.0;
    for (double& v : x) {
      v = -std::log(1.0 - uniform());
      s += v;
    }
    for (double& v : x) v /= s;
    return x;
  }

  // Simplex point with every entry at least `floor` (mixes with uniform).
  Vec interior_simplex_point(int d, double floor) {
    Vec x = simplex_point(d);
    double w = floor * d;
    for (double& v : x) v = (1.0 - w) * v + w / d;
    return x;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace coftrl
