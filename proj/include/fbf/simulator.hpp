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

// Monte Carlo engine that plays the forecasting game end to end.
//
// Draws are generated in fixed-size blocks; block k always uses the stream
// derive_seed(seed, k), so the records do not depend on how many worker
// threads run or in which order blocks finish. Summaries are computed from
// the records in index order afterwards.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <boost/random/normal_distribution.hpp>

#include "fbf/conditional.hpp"
#include "fbf/equilibrium.hpp"
#include "fbf/error.hpp"
#include "fbf/model.hpp"
#include "fbf/regression.hpp"
#include "fbf/shocks.hpp"

namespace fbf {

enum class Scenario {
  kConjectureRule,   // forecaster best-responds to an arbitrary DM conjecture
  kEquilibrium,      // DM conjectures the equilibrium rule the forecaster uses
  kTaylorRule,       // DM reacts with x (y_target - f)
  kConditional,      // forecast theta + a0; DM reacts with her conjecture
  kConstrainedMenu,  // two conditional forecasts; DM picks from {a0, a1}
};

inline constexpr std::string_view scenario_name(Scenario s) {
  switch (s) {
    case Scenario::kConjectureRule: return "conjecture_rule";
    case Scenario::kEquilibrium: return "equilibrium";
    case Scenario::kTaylorRule: return "taylor_rule";
    case Scenario::kConditional: return "conditional";
    case Scenario::kConstrainedMenu: return "constrained_menu";
  }
  return "unknown";
}

inline Scenario parse_scenario(std::string_view name) {
  for (Scenario s : {Scenario::kConjectureRule, Scenario::kEquilibrium, Scenario::kTaylorRule,
                     Scenario::kConditional, Scenario::kConstrainedMenu}) {
    if (scenario_name(s) == name) return s;
  }
  fail(ErrorCode::kInvalidArgument, "unknown scenario '" + std::string(name) + "'");
}

struct SimulationRun {
  std::size_t draw_count = 100000;
  std::uint64_t seed = 1;
  Scenario scenario = Scenario::kEquilibrium;
  // DM conjecture for kConjectureRule and kConditional.
  LinearRule conjecture = kTaylorConjecture;
  int equilibrium_index = 1;
  // a0 for kConditional; menu (a0, a1) for kConstrainedMenu. In the menu
  // scenario each draw's DM uses her own cost t = 1/x - 1, not menu.t_cost.
  ConditionalForecastSpec conditional;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct DrawRecord {
  double theta = 0.0;
  double x = 0.0;
  double forecast = 0.0;
  double action = 0.0;
  double outcome = 0.0;
  double error = 0.0;  // outcome - forecast
};

struct SimulationSummary {
  // Empty when theta is held fixed, since the regressor is then constant.
  std::optional<OlsFit> mz;               // outcome on forecast
  std::optional<OlsFit> bias_regression;  // error on theta
  double mean_error = 0.0;
  double mean_error_se = 0.0;
  double mse = 0.0;
  // mse = variance_term + bias_sq_term, with variance_term the mean squared
  // deviation of the error from its mean and bias_sq_term the squared mean
  // error. With theta held fixed these estimate Var(y | theta) and
  // bias^2(f | theta).
  double variance_term = 0.0;
  double variance_term_se = 0.0;
  double bias_sq_term = 0.0;
  double bias_sq_term_se = 0.0;
};

struct SimulationOutput {
  std::vector<DrawRecord> records;
  SimulationSummary summary;
  LinearRule forecast_rule;  // rule in use; menu scenario: the a0 forecast theta + a0
  LinearRule dm_conjecture;  // conjecture the DM inverts with
};

inline SimulationSummary summarize(std::span<const DrawRecord> records) {
  const std::size_t n = records.size();
  if (n < 3) fail(ErrorCode::kInsufficientData, "need at least 3 draws to summarise");
  std::vector<double> theta(n);
  std::vector<double> forecast(n);
  std::vector<double> outcome(n);
  std::vector<double> error(n);
  for (std::size_t i = 0; i < n; ++i) {
    theta[i] = records[i].theta;
    forecast[i] = records[i].forecast;
    outcome[i] = records[i].outcome;
    error[i] = records[i].error;
  }
  SimulationSummary s;
  const auto [lo, hi] = std::minmax_element(theta.begin(), theta.end());
  if (*lo != *hi) {
    s.mz = ols_mz(forecast, outcome);
    s.bias_regression = ols_fit(theta, error);
  }

  const double nd = static_cast<double>(n);
  double sum_e = 0.0;
  double sum_e2 = 0.0;
  for (double e : error) {
    sum_e += e;
    sum_e2 += e * e;
  }
  s.mean_error = sum_e / nd;
  s.mse = sum_e2 / nd;
  double sum_d2 = 0.0;
  for (double e : error) sum_d2 += (e - s.mean_error) * (e - s.mean_error);
  s.variance_term = sum_d2 / nd;
  double sum_dev = 0.0;
  for (double e : error) {
    const double d = (e - s.mean_error) * (e - s.mean_error) - s.variance_term;
    sum_dev += d * d;
  }
  s.mean_error_se = std::sqrt(sum_d2 / (nd - 1.0) / nd);
  s.variance_term_se = std::sqrt(sum_dev / (nd - 1.0) / nd);
  s.bias_sq_term = s.mean_error * s.mean_error;
  s.bias_sq_term_se = 2.0 * std::abs(s.mean_error) * s.mean_error_se;
  return s;
}

inline constexpr std::size_t kSimulationBlock = 1u << 15;

inline SimulationOutput play_game(const SimulationRun& run, const PolicyShockSpec& shock,
                                  const StateNoiseSpec& sn, const ModelParams& p) {
  validate(p);
  validate(sn);
  if (run.draw_count < 3) {
    fail(ErrorCode::kInsufficientData, "draw_count must be at least 3");
  }
  if (std::abs(sn.noise_var - p.sigma2) > 1e-12 * std::max(1.0, p.sigma2)) {
    fail(ErrorCode::kInvalidArgument, "noise variance differs from sigma2 in the model");
  }
  if (std::abs(shock.target_mean - p.mu) > 1e-12 * std::max(1.0, p.mu) ||
      std::abs(shock.target_var - p.tau2) > 1e-12 * std::max(1.0, p.tau2)) {
    fail(ErrorCode::kInvalidArgument, "shock distribution moments differ from (mu, tau2)");
  }
  const PolicyShockSampler prototype(shock);

  SimulationOutput out;
  switch (run.scenario) {
    case Scenario::kConjectureRule:
      out.dm_conjecture = run.conjecture;
      out.forecast_rule = optimal_forecast(run.conjecture, p);
      break;
    case Scenario::kTaylorRule:
      out.dm_conjecture = kTaylorConjecture;
      out.forecast_rule = optimal_forecast(kTaylorConjecture, p);
      break;
    case Scenario::kEquilibrium:
      out.forecast_rule = solve_equilibria(p).rule(run.equilibrium_index);
      out.dm_conjecture = out.forecast_rule;
      break;
    case Scenario::kConditional:
      detail::require_conjecture(run.conjecture);
      out.dm_conjecture = run.conjecture;
      out.forecast_rule = {run.conditional.assumed_action, 1.0};
      break;
    case Scenario::kConstrainedMenu:
      if (!run.conditional.menu) fail(ErrorCode::kMissingMenu, "menu scenario needs (a0, a1)");
      out.dm_conjecture = {run.conditional.menu->a0, 1.0};
      out.forecast_rule = {run.conditional.menu->a0, 1.0};
      break;
  }

  const std::size_t n = run.draw_count;
  out.records.resize(n);
  const std::size_t blocks = (n + kSimulationBlock - 1) / kSimulationBlock;

  auto fill_block = [&](std::size_t block) {
    Engine eng = make_engine(run.seed, block);
    PolicyShockSampler x_dist = prototype;
    boost::random::normal_distribution<double> theta_dist(
        sn.theta_mean, std::sqrt(std::max(sn.theta_var, 0.0)));
    boost::random::normal_distribution<double> eps_dist(0.0, std::sqrt(sn.noise_var));
    const std::size_t begin = block * kSimulationBlock;
    const std::size_t end = std::min(n, begin + kSimulationBlock);
    for (std::size_t i = begin; i < end; ++i) {
      DrawRecord& r = out.records[i];
      r.theta = sn.theta_var > 0.0 ? theta_dist(eng) : sn.theta_mean;
      r.x = x_dist(eng);
      const double eps = eps_dist(eng);
      if (run.scenario == Scenario::kConstrainedMenu) {
        const ActionMenu& menu = *run.conditional.menu;
        ConditionalForecastSpec own = run.conditional;
        own.menu->t_cost = 1.0 / r.x - 1.0;
        const double f0 = r.theta + menu.a0;
        const double f1 = r.theta + menu.a1;
        const int pick = constrained_dm_choice(f0, f1, own, p);
        r.action = pick == 0 ? menu.a0 : menu.a1;
        r.forecast = pick == 0 ? f0 : f1;
      } else {
        r.forecast = out.forecast_rule(r.theta);
        r.action = reaction_from_conjecture(r.x, out.dm_conjecture, r.forecast, p);
      }
      r.outcome = r.theta + r.action + eps;
      r.error = r.outcome - r.forecast;
    }
  };

  unsigned workers = run.threads != 0 ? run.threads : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(blocks)));
  if (workers == 1) {
    for (std::size_t k = 0; k < blocks; ++k) fill_block(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    {
      std::vector<std::jthread> pool;
      pool.reserve(workers);
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
          try {
            for (std::size_t k = next++; k < blocks; k = next++) fill_block(k);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
            next = blocks;
          }
        });
      }
    }
    if (first_error) std::rethrow_exception(first_error);
  }

  out.summary = summarize(out.records);
  return out;
}

struct BestResponseTrace {
  enum class Status { kConverged, kZeroSlope, kSingular, kMaxIterations };
  std::vector<LinearRule> iterates;  // starts with the initial conjecture
  Status status = Status::kMaxIterations;
};

inline constexpr std::string_view status_name(BestResponseTrace::Status s) {
  switch (s) {
    case BestResponseTrace::Status::kConverged: return "converged";
    case BestResponseTrace::Status::kZeroSlope: return "zero_slope";
    case BestResponseTrace::Status::kSingular: return "singular";
    case BestResponseTrace::Status::kMaxIterations: return "max_iterations";
  }
  return "unknown";
}

// Repeatedly replaces the DM's conjecture with the forecaster's best response.
// A diagnostic only: convergence is not guaranteed. An iterate equal (within
// tol) to its predecessor is not appended, so a fixed point yields a trace of
// length 1.
inline BestResponseTrace best_response_iteration(const LinearRule& start, const ModelParams& p,
                                                 int max_iter, double tol) {
  detail::require_conjecture(start);
  BestResponseTrace trace;
  trace.iterates.push_back(start);
  LinearRule current = start;
  for (int it = 0; it < max_iter; ++it) {
    LinearRule next;
    try {
      next = optimal_forecast(current, p);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kSingularDenominator) throw;
      trace.status = BestResponseTrace::Status::kSingular;
      return trace;
    }
    if (std::abs(next.slope - current.slope) < tol &&
        std::abs(next.intercept - current.intercept) < tol) {
      trace.status = BestResponseTrace::Status::kConverged;
      return trace;
    }
    trace.iterates.push_back(next);
    if (next.slope == 0.0) {
      trace.status = BestResponseTrace::Status::kZeroSlope;
      return trace;
    }
    current = next;
  }
  trace.status = BestResponseTrace::Status::kMaxIterations;
  return trace;
}

}  // namespace fbf
