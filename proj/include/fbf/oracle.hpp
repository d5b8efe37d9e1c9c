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

// Brute-force verifiers for the closed forms in model.hpp. Nothing here calls
// the best-response formula to produce an answer: the minimisers search the
// objective directly. The Monte Carlo oracle only borrows the analytic value
// to centre its search bracket.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <boost/random/normal_distribution.hpp>

#include "fbf/error.hpp"
#include "fbf/model.hpp"
#include "fbf/shocks.hpp"

namespace fbf::oracle {

struct OracleConfig {
  std::size_t sample_count = 200000;
  double bracket_halfwidth = 1.0;
  double tolerance = 1e-10;
  std::uint64_t seed = 1;
};

inline void validate(const OracleConfig& cfg) {
  if (cfg.sample_count < 10000) {
    fail(ErrorCode::kInvalidArgument, "oracle sample_count must be >= 10^4");
  }
  if (!(cfg.bracket_halfwidth > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "bracket_halfwidth must be > 0");
  }
  if (!(cfg.tolerance > 0.0)) fail(ErrorCode::kInvalidArgument, "tolerance must be > 0");
}

struct MinimizeResult {
  double argmin = 0.0;
  double value = 0.0;
  int iterations = 0;
};

inline constexpr int kGoldenMaxIterations = 200;

// Golden-section search for the minimum of a unimodal `fn` on [lo, hi].
// Stops when the bracket is narrower than tol * (1 + |x|) or after
// kGoldenMaxIterations steps.
template <class Fn>
MinimizeResult golden_section_minimize(Fn&& fn, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = fn(x1);
  double f2 = fn(x2);
  int it = 0;
  for (; it < kGoldenMaxIterations; ++it) {
    if (b - a <= tol * (1.0 + std::abs(0.5 * (a + b)))) break;
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = fn(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = fn(x2);
    }
  }
  const double x = f1 <= f2 ? x1 : x2;
  return {x, std::min(f1, f2), it};
}

// E[(y - f)^2 | theta] expanded in raw moments of (x, eps):
//   (theta - f)^2 + 2 (theta - f) mu g + (tau2 + mu^2) g^2 + sigma2,
// with g = y_target - f/c + b/c the DM's reaction per unit of x.
inline double conditional_mse(double forecast_value, double theta, const LinearRule& conjecture,
                              const ModelParams& p) {
  fbf::validate(p);
  if (conjecture.slope == 0.0) {
    fail(ErrorCode::kDegenerateConjecture, "conjecture slope must be nonzero");
  }
  const double g = p.y_target - forecast_value / conjecture.slope +
                   conjecture.intercept / conjecture.slope;
  const double d = theta - forecast_value;
  const double ex2 = p.tau2 + p.mu * p.mu;
  return d * d + 2.0 * d * p.mu * g + ex2 * g * g + p.sigma2;
}

// Minimiser of conditional_mse over f. The objective is quadratic, so the
// vertex of the parabola through three points solves the first-order
// condition; two passes re-centred on the previous vertex remove rounding.
inline double exact_mse_minimizer(double theta, const LinearRule& conjecture,
                                  const ModelParams& p) {
  auto mse = [&](double f) { return conditional_mse(f, theta, conjecture, p); };
  double centre = theta;
  for (int pass = 0; pass < 3; ++pass) {
    const double h = 1.0 + std::abs(centre);
    const double lo = mse(centre - h);
    const double mid = mse(centre);
    const double hi = mse(centre + h);
    const double curvature = lo - 2.0 * mid + hi;
    if (!(curvature > 0.0)) {
      fail(ErrorCode::kSingularDenominator, "conditional MSE is not strictly convex in f");
    }
    centre += h * (lo - hi) / (2.0 * curvature);
  }
  return centre;
}

struct McMinimizerResult {
  double argmin = 0.0;
  double std_error = 0.0;  // Monte Carlo standard error of argmin
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int iterations = 0;
};

// One common-random-number sample of (x_i, eps_i), stored as
// y_i(f) - f = level_i - slope_i * f. Its sample MSE is an exact quadratic in f.
struct CrnMseSample {
  std::vector<double> level;
  std::vector<double> slope;

  double operator()(double f) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < level.size(); ++i) {
      const double e = level[i] - slope[i] * f;
      acc += e * e;
    }
    return acc / static_cast<double>(level.size());
  }
};

// x draws come from stream (seed, 0) and eps draws from (seed, 1).
inline CrnMseSample draw_crn_sample(double theta, const LinearRule& conjecture,
                                    const ModelParams& p, const PolicyShockSpec& dist,
                                    const OracleConfig& cfg) {
  fbf::validate(p);
  validate(cfg);
  detail::require_conjecture(conjecture);
  const double mean_tol = 1e-9 * std::max(1.0, std::abs(p.mu));
  const double var_tol = 1e-9 * std::max(1.0, p.tau2);
  if (std::abs(dist.target_mean - p.mu) > mean_tol ||
      std::abs(dist.target_var - p.tau2) > var_tol) {
    fail(ErrorCode::kInvalidArgument, "shock distribution moments do not match (mu, tau2)");
  }
  const double b = conjecture.intercept;
  const double c = conjecture.slope;
  PolicyShockSampler sampler(dist);
  Engine x_eng = make_engine(cfg.seed, 0);
  Engine eps_eng = make_engine(cfg.seed, 1);
  boost::random::normal_distribution<double> eps_dist(0.0, std::sqrt(p.sigma2));
  CrnMseSample s;
  s.level.resize(cfg.sample_count);
  s.slope.resize(cfg.sample_count);
  for (std::size_t i = 0; i < cfg.sample_count; ++i) {
    const double x = sampler(x_eng);
    const double eps = eps_dist(eps_eng);
    s.level[i] = theta + x * (p.y_target + b / c) + eps;
    s.slope[i] = 1.0 + x / c;
  }
  return s;
}

// Golden-section minimisation of the CRN sample MSE over a bracket centred on
// the analytic optimum with half-width max(bracket_halfwidth, 10 |pilot|).
inline McMinimizerResult mc_mse_minimizer(double theta, const LinearRule& conjecture,
                                          const ModelParams& p, const PolicyShockSpec& dist,
                                          const OracleConfig& cfg) {
  const CrnMseSample sample_mse = draw_crn_sample(theta, conjecture, p, dist, cfg);
  const std::vector<double>& level = sample_mse.level;
  const std::vector<double>& slope = sample_mse.slope;
  const std::size_t n = level.size();

  const double pilot = optimal_forecast(conjecture, p)(theta);
  const double half = std::max(cfg.bracket_halfwidth, 10.0 * std::abs(pilot));
  McMinimizerResult out;
  out.bracket_lo = pilot - half;
  out.bracket_hi = pilot + half;
  const MinimizeResult m = golden_section_minimize(sample_mse, out.bracket_lo, out.bracket_hi,
                                                   cfg.tolerance);
  if (!(m.value < sample_mse(out.bracket_lo) && m.value < sample_mse(out.bracket_hi))) {
    fail(ErrorCode::kBracketFailure, "sample MSE minimum is not interior to the bracket");
  }
  out.argmin = m.argmin;
  out.iterations = m.iterations;

  // Delta method for the ratio estimator mean(level*slope) / mean(slope^2).
  double sum_b2 = 0.0;
  double sum_r = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum_b2 += slope[i] * slope[i];
    sum_r += level[i] * slope[i] - m.argmin * slope[i] * slope[i];
  }
  const double nd = static_cast<double>(n);
  const double mean_r = sum_r / nd;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = level[i] * slope[i] - m.argmin * slope[i] * slope[i] - mean_r;
    ss += r * r;
  }
  out.std_error = std::sqrt(ss / (nd - 1.0) / nd) / (sum_b2 / nd);
  return out;
}

// DM loss E[(theta + a + eps - y_target)^2 | f] + t a^2 when she reads the
// state off the forecast as (f - b) / c.
inline double dm_expected_loss(double action, double forecast_value, double t_cost,
                               const LinearRule& conjecture, const ModelParams& p) {
  const double state = (forecast_value - conjecture.intercept) / conjecture.slope;
  const double miss = state + action - p.y_target;
  return miss * miss + p.sigma2 + t_cost * action * action;
}

// Grid search with successive refinement over the DM's action.
inline double grid_action_minimizer(double forecast_value, double t_cost,
                                    const LinearRule& conjecture, const ModelParams& p) {
  fbf::validate(p);
  detail::require_conjecture(conjecture);
  if (!(t_cost > -1.0)) fail(ErrorCode::kInvalidArgument, "adjustment cost t must be > -1");
  auto loss = [&](double a) { return dm_expected_loss(a, forecast_value, t_cost, conjecture, p); };

  const double state = (forecast_value - conjecture.intercept) / conjecture.slope;
  constexpr int kPoints = 200;
  double centre = 0.0;
  double radius = 4.0 * (std::abs(p.y_target - state) + 1.0);
  for (int round = 0; round < 200; ++round) {
    const double step = 2.0 * radius / kPoints;
    double best = centre;
    double best_loss = loss(centre);
    for (int i = 0; i <= kPoints; ++i) {
      const double a = centre - radius + step * i;
      const double l = loss(a);
      if (l < best_loss) {
        best = a;
        best_loss = l;
      }
    }
    centre = best;
    radius = step;
    if (step < 1e-13 * (1.0 + std::abs(centre))) break;
  }
  return centre;
}

}  // namespace fbf::oracle
