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

// Conditional forecasts: the forecaster assumes a fixed policy action a0 and
// ignores the DM's actual reaction, so f = theta + a0.

#pragma once

#include <cmath>
#include <optional>

#include "fbf/error.hpp"
#include "fbf/model.hpp"

namespace fbf {

// Two-action menu for a constrained DM with adjustment cost t (> -1).
struct ActionMenu {
  double a0 = 0.0;
  double a1 = 0.0;
  double t_cost = 0.0;
};

struct ConditionalForecastSpec {
  double assumed_action = 0.0;  // a0
  std::optional<ActionMenu> menu;
};

inline double conditional_forecast(double theta, const ConditionalForecastSpec& spec) {
  return theta + spec.assumed_action;
}

// Conjecture of a fully rational DM facing conditional forecasts made under
// a0: she knows the forecast is theta + a0.
inline LinearRule rational_conditional_conjecture(const ConditionalForecastSpec& spec) {
  return {spec.assumed_action, 1.0};
}

struct ConditionalProperties {
  BiasLine bias;
  MZLine mz;
};

//   E(y - f | theta) = mu (y_target + b/c) - ((mu + c)/c) a0 - (mu/c) theta
//   E(y | f)         = -a0 + mu (y_target + b/c) - ((mu - c)/c) f
inline ConditionalProperties conditional_bias_and_mz(const ConditionalForecastSpec& spec,
                                                     const LinearRule& conjecture,
                                                     const ModelParams& p) {
  validate(p);
  detail::require_conjecture(conjecture);
  const double b = conjecture.intercept;
  const double c = conjecture.slope;
  const double a0 = spec.assumed_action;
  const double level = p.mu * (p.y_target + b / c);
  ConditionalProperties out;
  out.bias = {-(p.mu / c), level - ((p.mu + c) / c) * a0};
  out.mz = {-a0 + level, -((p.mu - c) / c)};
  return out;
}

// Menu choice of a constrained DM shown conditional forecasts f0 (under a0)
// and f1 (under a1). Returns 0 for a0, 1 for a1. She picks a0 iff
// (f0 - y_target)^2 - (f1 - y_target)^2 <= t (a1^2 - a0^2); ties go to a0.
inline int constrained_dm_choice(double f0, double f1, const ConditionalForecastSpec& spec,
                                 const ModelParams& p) {
  validate(p);
  if (!spec.menu) fail(ErrorCode::kMissingMenu, "constrained DM needs an action menu");
  const ActionMenu& m = *spec.menu;
  if (!(m.t_cost > -1.0)) fail(ErrorCode::kInvalidArgument, "adjustment cost t must be > -1");
  const double d0 = f0 - p.y_target;
  const double d1 = f1 - p.y_target;
  const double lhs = d0 * d0 - d1 * d1;
  const double rhs = m.t_cost * (m.a1 * m.a1 - m.a0 * m.a0);
  return lhs <= rhs ? 0 : 1;
}

}  // namespace fbf
