// Copyright 2026 The fbf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Separating equilibria of the forecasting game: affine rules that are a best
// response to a DM who conjectures exactly that rule.
//
// Substituting c for both the conjecture and the best-response slope gives
// c^2 + (2 mu - 1) c + mu (mu - 1) + tau2 = 0, with real roots iff
// tau2 <= 1/4. Root 1 is the one that reduces to the "natural" forecast
// theta + mu (y_target - theta) as tau2 -> 0 and is selected by default.

#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "fbf/error.hpp"
#include "fbf/model.hpp"

namespace fbf {

inline constexpr double kMaxEquilibriumTau2 = 0.25;

struct EquilibriumRoot {
  LinearRule rule{std::numeric_limits<double>::quiet_NaN(),
                  std::numeric_limits<double>::quiet_NaN()};
  // k = (tau2 + mu (mu + c)) / (tau2 + (mu + c)^2); intercept = k / (1 - k) c y_target.
  double k = std::numeric_limits<double>::quiet_NaN();
  // Zero slope: the DM cannot invert the forecast, so the rule is not an
  // equilibrium. Flagged, never thrown, at solve time.
  bool degenerate = false;
  // tau2 = 0 and mu + c = 0: the forecaster is indifferent among all
  // forecasts and the rule is only an equilibrium through that indifference.
  // k and the intercept take their tau2 -> 0 limits.
  bool indifferent = false;
};

struct EquilibriumSolution {
  bool exists = false;
  bool repeated = false;  // tau2 == 1/4: both roots coincide
  std::array<EquilibriumRoot, 2> roots{};
  int selected_index = 1;  // 1-based

  const EquilibriumRoot& root(int index) const {
    if (index != 1 && index != 2) {
      fail(ErrorCode::kInvalidArgument, "equilibrium index must be 1 or 2");
    }
    if (!exists) {
      fail(ErrorCode::kNoEquilibrium, "tau2 > 1/4: no linear equilibrium exists");
    }
    return roots[static_cast<std::size_t>(index - 1)];
  }

  // The equilibrium rule; throws when the rule cannot be used.
  const LinearRule& rule(int index) const {
    const EquilibriumRoot& r = root(index);
    if (r.degenerate) {
      fail(ErrorCode::kDegenerateEquilibrium,
           "equilibrium " + std::to_string(index) + " has zero slope");
    }
    return r.rule;
  }

  const LinearRule& selected() const { return rule(selected_index); }
};

inline EquilibriumSolution solve_equilibria(const ModelParams& p) {
  validate(p);
  EquilibriumSolution sol;
  if (p.tau2 > kMaxEquilibriumTau2) return sol;

  sol.exists = true;
  const double q = std::sqrt(1.0 - 4.0 * p.tau2);
  sol.repeated = (q == 0.0);
  const std::array<double, 2> slopes{0.5 - p.mu + q / 2.0, 0.5 - p.mu - q / 2.0};

  for (std::size_t i = 0; i < 2; ++i) {
    EquilibriumRoot& r = sol.roots[i];
    const double c = slopes[i];
    const double s = p.mu + c;
    const double den = p.tau2 + s * s;
    r.rule.slope = c;
    if (den == 0.0) {
      // Only reachable for root 2 at tau2 = 0. On the root tau2 + s^2 = s, so
      // k = tau2 / s + mu -> 1 + mu.
      r.indifferent = true;
      r.k = 1.0 + p.mu;
    } else {
      r.k = (p.tau2 + p.mu * s) / den;
    }
    if (c == 0.0) {
      r.degenerate = true;
      continue;
    }
    // 1 - k evaluated as s c / (tau2 + s^2), which is exact on the root and
    // avoids cancelling k against 1 when c is small.
    const double one_minus_k = r.indifferent ? -p.mu : s * c / den;
    r.rule.intercept = r.k / one_minus_k * c * p.y_target;
  }
  return sol;
}

struct EquilibriumProperties {
  BiasLine bias;
  MZLine mz;
};

// Bias and MZ line of the selected (first) equilibrium forecast:
//   E(y - f | theta) = 2 tau2 / (1 + sqrt(1 - 4 tau2)) (theta - y_target)
//   E(y | f) = tau2 / (tau2 - (1 - mu) r) y_target
//              + (1 - mu) r / ((1 - mu) r - tau2) f,   r = (1 + sqrt(1 - 4 tau2)) / 2.
inline EquilibriumProperties equilibrium_bias_and_mz(const ModelParams& p) {
  const EquilibriumSolution sol = solve_equilibria(p);
  if (!sol.exists) fail(ErrorCode::kNoEquilibrium, "tau2 > 1/4: no linear equilibrium exists");
  if (sol.roots[0].degenerate) {
    fail(ErrorCode::kDegenerateEquilibrium,
         "mu = (1 + sqrt(1 - 4 tau2)) / 2: the first equilibrium has zero slope");
  }
  const double q = std::sqrt(1.0 - 4.0 * p.tau2);
  const double r = 0.5 + q / 2.0;
  const double coef = 2.0 * p.tau2 / (1.0 + q);
  const double adj = (1.0 - p.mu) * r;
  EquilibriumProperties out;
  out.bias = {coef, -coef * p.y_target};
  out.mz.intercept = (p.tau2 / (p.tau2 - adj)) * p.y_target;
  out.mz.slope = adj / (adj - p.tau2);
  return out;
}

}  // namespace fbf
