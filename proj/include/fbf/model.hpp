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

// Closed-form quantities of the forecaster / decision-maker feedback game.
//
// The outcome is y = theta + a + eps. The decision maker (DM) reacts to a
// published forecast f with a = x * (y_target - E(theta | f)), where the
// policy strength x > 0 is her private type with mean mu and variance tau2.
// When the DM conjectures the affine rule f = b + c * theta she inverts the
// forecast as E(theta | f) = (f - b) / c. The forecaster knows (b, c) and the
// distribution of x and minimises E[(y - f)^2 | theta].

#pragma once

#include <cmath>
#include <string>

#include "fbf/error.hpp"

namespace fbf {

// Primitives of the game. The DM's adjustment cost t enters only through
// x = 1 / (1 + t), so it never appears here.
struct ModelParams {
  double mu = 1.0;        // E(x), must be > 0
  double tau2 = 0.0;      // var(x), >= 0
  double sigma2 = 1.0;    // var(eps), > 0
  double y_target = 0.0;  // the DM's target
};

inline void validate(const ModelParams& p) {
  if (!std::isfinite(p.mu) || !(p.mu > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "mu must be finite and > 0");
  }
  if (!std::isfinite(p.tau2) || p.tau2 < 0.0) {
    fail(ErrorCode::kInvalidArgument, "tau2 must be finite and >= 0");
  }
  if (!std::isfinite(p.sigma2) || !(p.sigma2 > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "sigma2 must be finite and > 0");
  }
  if (!std::isfinite(p.y_target)) {
    fail(ErrorCode::kInvalidArgument, "y_target must be finite");
  }
}

// f(theta) = intercept + slope * theta. Used for DM conjectures, best
// responses and equilibria alike.
struct LinearRule {
  double intercept = 0.0;
  double slope = 1.0;

  double operator()(double theta) const { return intercept + slope * theta; }
  bool operator==(const LinearRule&) const = default;
};

// The Taylor-rule DM takes the forecast at face value: b = 0, c = 1.
inline constexpr LinearRule kTaylorConjecture{0.0, 1.0};

// Population regression line E(y | f) = intercept + slope * f.
struct MZLine {
  double intercept = 0.0;
  double slope = 1.0;

  double operator()(double f) const { return intercept + slope * f; }
};

// Conditional bias E(y - f | theta) = coef_const + coef_theta * theta.
struct BiasLine {
  double coef_theta = 0.0;
  double coef_const = 0.0;

  double operator()(double theta) const { return coef_const + coef_theta * theta; }
};

struct MseTerms {
  double variance_term = 0.0;  // Var(y | theta)
  double bias_sq_term = 0.0;   // (E(y | theta) - f)^2

  double total() const { return variance_term + bias_sq_term; }
};

namespace detail {

inline void require_conjecture(const LinearRule& conjecture) {
  if (!std::isfinite(conjecture.intercept) || !std::isfinite(conjecture.slope)) {
    fail(ErrorCode::kInvalidArgument, "conjecture coefficients must be finite");
  }
  if (conjecture.slope == 0.0) {
    fail(ErrorCode::kDegenerateConjecture,
         "the DM cannot invert a forecast rule with zero slope");
  }
}

// tau2 + (mu + c)^2, the common denominator of the best response.
inline double best_response_denominator(const LinearRule& conjecture,
                                        const ModelParams& p) {
  const double s = p.mu + conjecture.slope;
  const double den = p.tau2 + s * s;
  if (!(den > 0.0)) {
    fail(ErrorCode::kSingularDenominator,
         "tau2 + (mu + c)^2 vanishes; the forecaster is indifferent among all forecasts");
  }
  return den;
}

}  // namespace detail

// Optimal DM action given her realised policy strength x and her estimate of
// the state.
inline double dm_optimal_action(double x, double expected_state, const ModelParams& p) {
  validate(p);
  if (!(x > 0.0)) fail(ErrorCode::kInvalidArgument, "policy strength x must be > 0");
  return x * (p.y_target - expected_state);
}

// The DM's action after seeing forecast_value, when she believes the forecast
// was produced by `conjecture`.
inline double reaction_from_conjecture(double x, const LinearRule& conjecture,
                                       double forecast_value, const ModelParams& p) {
  validate(p);
  detail::require_conjecture(conjecture);
  if (!(x > 0.0)) fail(ErrorCode::kInvalidArgument, "policy strength x must be > 0");
  const double b = conjecture.intercept;
  const double c = conjecture.slope;
  return x * (p.y_target - forecast_value / c + b / c);
}

// MSE-minimising affine forecast against the DM's conjecture (b, c):
//   slope     = c (mu + c) / (tau2 + (mu + c)^2)
//   intercept = c (tau2 + mu (mu + c)) / (tau2 + (mu + c)^2) * (y_target + b / c)
inline LinearRule optimal_forecast(const LinearRule& conjecture, const ModelParams& p) {
  validate(p);
  detail::require_conjecture(conjecture);
  const double den = detail::best_response_denominator(conjecture, p);
  const double b = conjecture.intercept;
  const double c = conjecture.slope;
  const double s = p.mu + c;
  const double slope = c * s / den;
  const double intercept = c * ((p.tau2 + p.mu * s) / den) * (p.y_target + b / c);
  return {intercept, slope};
}

// E(y - f* | theta) = tau2 / (tau2 + (mu + c)^2) * (theta - c y_target - b).
inline BiasLine bias_line(const LinearRule& conjecture, const ModelParams& p) {
  validate(p);
  detail::require_conjecture(conjecture);
  const double den = detail::best_response_denominator(conjecture, p);
  const double k = p.tau2 / den;
  return {k, -k * (conjecture.slope * p.y_target + conjecture.intercept)};
}

// Population MZ line of the optimal forecast under the conjecture:
//   E(y | f*) = -(tau2 / (mu + c)) (y_target + b / c)
//               + (tau2 + c (mu + c)) / (c (mu + c)) * f*.
inline MZLine mz_line(const LinearRule& conjecture, const ModelParams& p) {
  validate(p);
  detail::require_conjecture(conjecture);
  const double b = conjecture.intercept;
  const double c = conjecture.slope;
  const double s = p.mu + c;
  if (s == 0.0) {
    fail(ErrorCode::kSingularMZ, "mu + c = 0: the optimal forecast does not depend on the state");
  }
  return {-(p.tau2 / s) * (p.y_target + b / c), (p.tau2 + c * s) / (c * s)};
}

// Conditional MSE of an arbitrary forecast value split into the outcome's
// conditional variance and the squared conditional bias.
inline MseTerms mse_decomposition(double forecast_value, double theta,
                                  const LinearRule& conjecture, const ModelParams& p) {
  validate(p);
  detail::require_conjecture(conjecture);
  const double b = conjecture.intercept;
  const double c = conjecture.slope;
  const double f = forecast_value;
  const double gap = p.y_target - f / c + b / c;
  const double bias = theta + p.mu * (p.y_target + b / c) - ((p.mu + c) / c) * f;
  return {p.tau2 * gap * gap + p.sigma2, bias * bias};
}

// The forecast rule that sets the conditional bias to zero; it differs from
// the optimal rule whenever tau2 > 0.
inline LinearRule unbiased_forecast(const LinearRule& conjecture, const ModelParams& p) {
  validate(p);
  detail::require_conjecture(conjecture);
  const double b = conjecture.intercept;
  const double c = conjecture.slope;
  const double s = p.mu + c;
  if (s == 0.0) {
    fail(ErrorCode::kSingularMZ, "mu + c = 0: no forecast removes the bias");
  }
  const double slope = c / s;
  return {slope * p.mu * (p.y_target + b / c), slope};
}

}  // namespace fbf
