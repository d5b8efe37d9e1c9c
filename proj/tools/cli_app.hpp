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

// Command-line front end: solve, sweep, simulate, evaluate.
//
// Exit codes: 0 success, 1 usage or validation, 2 no usable equilibrium,
// 3 I/O. Every subcommand accepts `--config FILE` holding flat key=value
// lines or a flat JSON object; flags given on the command line win.

#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fbf/fbf.hpp"

namespace fbf::cli {

using nlohmann::ordered_json;

inline constexpr const char* kSeedEnvVar = "FBF_SEED";
inline constexpr std::uint64_t kDefaultSeed = 1;

inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNoEquilibrium:
    case ErrorCode::kDegenerateEquilibrium:
      return 2;
    case ErrorCode::kIoError:
      return 3;
    default:
      return 1;
  }
}

namespace detail {

inline std::string trim_ws(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

inline std::string json_scalar_text(const ordered_json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number()) return v.dump();
  if (v.is_array()) {
    std::string joined;
    for (const auto& item : v) {
      if (!joined.empty()) joined += ',';
      joined += json_scalar_text(item, key);
    }
    return joined;
  }
  fail(ErrorCode::kInvalidArgument, "config key '" + key + "' must be a scalar or a list");
}

// Flat key=value lines (# comments) or a flat JSON object.
inline std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot open config '" + path + "'");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<std::pair<std::string, std::string>> out;
  const std::string body = trim_ws(text);
  if (!body.empty() && body.front() == '{') {
    ordered_json doc;
    try {
      doc = ordered_json::parse(body);
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::kParseError, "config '" + path + "': " + e.what());
    }
    for (const auto& [key, value] : doc.items()) {
      out.emplace_back(normalize_key(key), json_scalar_text(value, key));
    }
    return out;
  }
  std::istringstream lines(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    const std::string t = trim_ws(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      fail(ErrorCode::kParseError,
           "config '" + path + "' line " + std::to_string(line_no) + ": expected key=value");
    }
    out.emplace_back(normalize_key(trim_ws(t.substr(0, eq))), trim_ws(t.substr(eq + 1)));
  }
  return out;
}

inline bool has_flag(const std::vector<std::string>& args, const std::string& name) {
  const std::string flag = "--" + name;
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

// Pulls `--config FILE` out of the arguments and appends the file's entries
// that the command line does not already set.
inline std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) fail(ErrorCode::kInvalidArgument, "--config needs a file");
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                 args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (!path) return args;
  for (const auto& [key, value] : read_config(*path)) {
    if (!has_flag(args, key)) args.push_back("--" + key + "=" + value);
  }
  return args;
}

inline std::uint64_t default_seed() {
  const char* env = std::getenv(kSeedEnvVar);
  if (env == nullptr || *env == '\0') return kDefaultSeed;
  const std::string text(env);
  std::uint64_t seed = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), seed);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    fail(ErrorCode::kInvalidArgument,
         std::string(kSeedEnvVar) + " must be an unsigned integer, got '" + text + "'");
  }
  return seed;
}

inline ordered_json to_json(const LinearRule& r) {
  return {{"intercept", r.intercept}, {"slope", r.slope}};
}

inline ordered_json to_json(const MZLine& m) {
  return {{"intercept", m.intercept}, {"slope", m.slope}};
}

inline ordered_json to_json(const BiasLine& b) {
  return {{"coef_theta", b.coef_theta}, {"coef_const", b.coef_const}};
}

inline ordered_json to_json(const OlsFit& f) {
  return {{"intercept", f.line.intercept}, {"slope", f.line.slope},
          {"intercept_se", f.intercept_se}, {"slope_se", f.slope_se},
          {"r_squared", f.r_squared},       {"n", f.n}};
}

inline ordered_json to_json(const ModelParams& p) {
  return {{"mu", p.mu}, {"tau2", p.tau2}, {"sigma2", p.sigma2}, {"y_target", p.y_target}};
}

// Optimal rule, bias line and MZ line for one DM conjecture. The MZ line is
// null when mu + c = 0.
inline ordered_json conjecture_report(const LinearRule& conj, const ModelParams& p) {
  ordered_json j;
  j["conjecture"] = to_json(conj);
  j["optimal_rule"] = to_json(optimal_forecast(conj, p));
  j["bias_line"] = to_json(bias_line(conj, p));
  try {
    j["mz_line"] = to_json(mz_line(conj, p));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kSingularMZ) throw;
    j["mz_line"] = nullptr;
  }
  return j;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIoError, "cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) fail(ErrorCode::kIoError, "write to '" + path + "' failed");
}

}  // namespace detail

struct SolveOptions {
  double mu = 0.0;
  double tau2 = 0.0;
  double sigma2 = 1.0;
  double y_target = 0.0;
  std::optional<double> b;
  std::optional<double> c;
};

inline int cmd_solve(const SolveOptions& o, std::ostream& out, std::ostream& err) {
  const ModelParams p{o.mu, o.tau2, o.sigma2, o.y_target};
  validate(p);
  const bool has_conjecture = o.b.has_value() && o.c.has_value();
  if (has_conjecture) fbf::detail::require_conjecture({*o.b, *o.c});

  const EquilibriumSolution sol = solve_equilibria(p);
  if (!sol.exists && !has_conjecture) {
    err << error_name(ErrorCode::kNoEquilibrium)
        << ": tau2 > 1/4: no linear equilibrium exists\n";
    return 2;
  }

  ordered_json report;
  report["params"] = detail::to_json(p);
  if (has_conjecture) report["conjecture"] = detail::conjecture_report({*o.b, *o.c}, p);
  report["taylor"] = detail::conjecture_report(kTaylorConjecture, p);

  ordered_json eq;
  eq["exists"] = sol.exists;
  eq["repeated"] = sol.repeated;
  eq["selected_index"] = sol.selected_index;
  eq["roots"] = ordered_json::array();
  if (sol.exists) {
    for (int i = 1; i <= 2; ++i) {
      const EquilibriumRoot& r = sol.root(i);
      ordered_json rj;
      rj["index"] = i;
      rj["intercept"] = r.degenerate ? ordered_json(nullptr) : ordered_json(r.rule.intercept);
      rj["slope"] = r.rule.slope;
      rj["k"] = r.k;
      rj["degenerate"] = r.degenerate;
      rj["indifferent"] = r.indifferent;
      eq["roots"].push_back(rj);
    }
  }
  report["equilibria"] = eq;

  if (sol.exists && !sol.roots[0].degenerate) {
    const EquilibriumProperties props = equilibrium_bias_and_mz(p);
    report["equilibrium"] = {{"bias_line", detail::to_json(props.bias)},
                             {"mz_line", detail::to_json(props.mz)}};
  } else {
    report["equilibrium"] = nullptr;
  }
  out << report.dump(2) << '\n';
  return 0;
}

struct SweepOptions {
  std::vector<double> mu_list;
  double tau2_min = 0.0;
  double tau2_max = 0.0;
  std::size_t steps = 0;
  double y_target = 0.0;
  std::optional<double> clip;
  std::string out_path;  // empty: stdout
};

inline void write_sweep_csv(const SweepOptions& o, std::ostream& out) {
  out << "mu,tau2,mz_slope,mz_intercept,exists";
  if (o.clip) out << ",mz_slope_clipped";
  out << '\n';
  const double span = o.tau2_max - o.tau2_min;
  for (const double mu : o.mu_list) {
    for (std::size_t i = 0; i < o.steps; ++i) {
      const double tau2 = i + 1 == o.steps
                              ? o.tau2_max
                              : o.tau2_min + span * static_cast<double>(i) /
                                                 static_cast<double>(o.steps - 1);
      const ModelParams p{mu, tau2, 1.0, o.y_target};
      const EquilibriumSolution sol = solve_equilibria(p);
      out << format_sig10(mu) << ',' << format_sig10(tau2) << ',';
      if (sol.exists && !sol.roots[0].degenerate) {
        const MZLine mz = equilibrium_bias_and_mz(p).mz;
        out << format_sig10(mz.slope) << ',' << format_sig10(mz.intercept) << ",true";
        if (o.clip) out << ',' << format_sig10(std::clamp(mz.slope, -*o.clip, *o.clip));
      } else {
        out << ",," << (sol.exists ? "true" : "false");
        if (o.clip) out << ',';
      }
      out << '\n';
    }
  }
}

inline int cmd_sweep(const SweepOptions& o, std::ostream& out) {
  if (o.mu_list.empty()) fail(ErrorCode::kInvalidArgument, "--mu-list is empty");
  for (const double mu : o.mu_list) validate(ModelParams{mu, 0.0, 1.0, o.y_target});
  if (!std::isfinite(o.tau2_min) || !std::isfinite(o.tau2_max) || o.tau2_min < 0.0 ||
      o.tau2_min > o.tau2_max) {
    fail(ErrorCode::kInvalidArgument, "need 0 <= tau2-min <= tau2-max");
  }
  if (o.steps < 2) fail(ErrorCode::kInvalidArgument, "--steps must be at least 2");
  if (o.clip && !(*o.clip > 0.0)) fail(ErrorCode::kInvalidArgument, "--clip must be > 0");
  if (o.out_path.empty()) {
    write_sweep_csv(o, out);
  } else {
    std::ostringstream buf;
    write_sweep_csv(o, buf);
    detail::write_file(o.out_path, buf.str());
  }
  return 0;
}

struct SimulateOptions {
  std::string scenario = "equilibrium";
  double mu = 0.0;
  double tau2 = 0.0;
  double sigma2 = 1.0;
  double y_target = 0.0;
  double b = 0.0;
  double c = 1.0;
  int equilibrium_index = 1;
  double a0 = 0.0;
  std::optional<double> a1;
  std::string dm = "taylor";  // conditional scenario: taylor | rational | conjecture
  double theta_mean = 0.0;
  double theta_var = 1.0;
  std::string shock_family = "beta_scaled";
  double shock_lower = 0.0;
  double shock_upper = 1.0;
  std::uint64_t seed = kDefaultSeed;
  std::size_t n = 100000;
  std::string out_prefix;
  unsigned threads = 0;
};

inline std::string draws_csv(const SimulationOutput& sim) {
  std::string s = "draw,theta,x,forecast,action,outcome,error\n";
  s.reserve(sim.records.size() * 96);
  for (std::size_t i = 0; i < sim.records.size(); ++i) {
    const DrawRecord& r = sim.records[i];
    s += std::to_string(i);
    for (const double v : {r.theta, r.x, r.forecast, r.action, r.outcome, r.error}) {
      s += ',';
      s += format_sig10(v);
    }
    s += '\n';
  }
  return s;
}

// Population values the summary should be compared against.
inline ordered_json analytic_block(const SimulationRun& run, const SimulationOutput& sim,
                                   const ModelParams& p) {
  ordered_json j;
  switch (run.scenario) {
    case Scenario::kConjectureRule:
    case Scenario::kTaylorRule:
    case Scenario::kEquilibrium: {
      j["bias_line"] = detail::to_json(bias_line(sim.dm_conjecture, p));
      try {
        j["mz_line"] = detail::to_json(mz_line(sim.dm_conjecture, p));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kSingularMZ) throw;
        j["mz_line"] = nullptr;
      }
      break;
    }
    case Scenario::kConditional: {
      const ConditionalProperties cp = conditional_bias_and_mz(run.conditional,
                                                               sim.dm_conjecture, p);
      j["bias_line"] = detail::to_json(cp.bias);
      j["mz_line"] = detail::to_json(cp.mz);
      break;
    }
    case Scenario::kConstrainedMenu:
      // The reported forecast matches the action taken, so it is unbiased.
      j["bias_line"] = detail::to_json(BiasLine{0.0, 0.0});
      j["mz_line"] = detail::to_json(MZLine{0.0, 1.0});
      break;
  }
  return j;
}

inline int cmd_simulate(const SimulateOptions& o, std::ostream& out) {
  const ModelParams p{o.mu, o.tau2, o.sigma2, o.y_target};
  validate(p);
  if (o.out_prefix.empty()) fail(ErrorCode::kInvalidArgument, "--out-prefix is required");

  SimulationRun run;
  run.draw_count = o.n;
  run.seed = o.seed;
  run.scenario = parse_scenario(o.scenario);
  run.conjecture = {o.b, o.c};
  run.equilibrium_index = o.equilibrium_index;
  run.threads = o.threads;
  run.conditional.assumed_action = o.a0;
  if (run.scenario == Scenario::kConditional) {
    if (o.dm == "taylor") {
      run.conjecture = kTaylorConjecture;
    } else if (o.dm == "rational") {
      run.conjecture = rational_conditional_conjecture(run.conditional);
    } else if (o.dm != "conjecture") {
      fail(ErrorCode::kInvalidArgument, "--dm must be taylor, rational or conjecture");
    }
  }
  if (run.scenario == Scenario::kConstrainedMenu) {
    if (!o.a1) fail(ErrorCode::kMissingMenu, "constrained_menu needs --a0 and --a1");
    run.conditional.menu = ActionMenu{o.a0, *o.a1, 0.0};
  }

  PolicyShockSpec shock;
  shock.family = parse_family(o.shock_family);
  shock.target_mean = o.mu;
  shock.target_var = o.tau2;
  shock.lower = o.shock_lower;
  shock.upper = o.shock_upper;
  const StateNoiseSpec sn{o.theta_mean, o.theta_var, o.sigma2};
  if (run.draw_count < 3) fail(ErrorCode::kInsufficientData, "-n must be at least 3");

  const SimulationOutput sim = play_game(run, shock, sn, p);
  const SimulationSummary& s = sim.summary;

  ordered_json j;
  j["scenario"] = std::string(scenario_name(run.scenario));
  j["seed"] = run.seed;
  j["draw_count"] = run.draw_count;
  j["params"] = detail::to_json(p);
  j["shock"] = {{"family", std::string(family_name(shock.family))},
                {"mean", shock.target_mean},
                {"var", shock.target_var},
                {"lower", shock.lower},
                {"upper", shock.upper}};
  j["state"] = {{"theta_mean", sn.theta_mean}, {"theta_var", sn.theta_var}};
  j["forecast_rule"] = detail::to_json(sim.forecast_rule);
  j["dm_conjecture"] = detail::to_json(sim.dm_conjecture);
  j["mz"] = s.mz ? detail::to_json(*s.mz) : ordered_json(nullptr);
  j["bias_regression"] =
      s.bias_regression ? detail::to_json(*s.bias_regression) : ordered_json(nullptr);
  j["mean_error"] = s.mean_error;
  j["mean_error_se"] = s.mean_error_se;
  j["mse"] = s.mse;
  j["decomposition"] = {{"variance_term", s.variance_term},
                        {"variance_term_se", s.variance_term_se},
                        {"bias_sq_term", s.bias_sq_term},
                        {"bias_sq_term_se", s.bias_sq_term_se}};
  j["analytic"] = analytic_block(run, sim, p);
  const std::string summary = j.dump(2) + "\n";

  detail::write_file(o.out_prefix + "_draws.csv", draws_csv(sim));
  detail::write_file(o.out_prefix + "_summary.json", summary);
  out << summary;
  return 0;
}

struct EvaluateOptions {
  std::string input;
  std::size_t window = kDefaultEvaluationWindow;
  std::string out_path;
};

inline int cmd_evaluate(const EvaluateOptions& o, std::ostream& out) {
  const ForecastSeries series = ingest_csv_file(o.input);
  const RollingResult rolling = rolling_mz(series, o.window);
  const OlsFit full = full_sample_mz(series);
  std::ostringstream csv;
  write_rolling_csv(csv, rolling);
  detail::write_file(o.out_path, csv.str());
  ordered_json j;
  j["input"] = o.input;
  j["window"] = o.window;
  j["rolling_rows"] = rolling.records.size();
  j["full_sample_mz"] = detail::to_json(full);
  out << j.dump(2) << '\n';
  return 0;
}

// Entry point shared by the binary and the tests. `args` excludes argv[0].
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Strategic forecasting with feedback: solver, simulator and evaluator", "fbf"};
  app.require_subcommand(1, 1);

  SolveOptions solve;
  double solve_b = 0.0;
  double solve_c = 0.0;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Best response, equilibria, bias and MZ lines");
  solve_cmd->add_option("--mu", solve.mu, "Mean policy strength E(x)")->required();
  solve_cmd->add_option("--tau2", solve.tau2, "Variance of policy strength")->required();
  solve_cmd->add_option("--ytarget", solve.y_target, "DM target")->capture_default_str();
  solve_cmd->add_option("--sigma2", solve.sigma2, "Outcome noise variance")->capture_default_str();
  CLI::Option* b_opt = solve_cmd->add_option("--b", solve_b, "Conjectured intercept");
  CLI::Option* c_opt = solve_cmd->add_option("--c", solve_c, "Conjectured slope");
  b_opt->needs(c_opt);
  c_opt->needs(b_opt);

  SweepOptions sweep;
  double clip = 0.0;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Equilibrium MZ line over a (mu, tau2) grid");
  sweep_cmd->add_option("--mu-list", sweep.mu_list, "Comma-separated mu values")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--tau2-min", sweep.tau2_min)->required();
  sweep_cmd->add_option("--tau2-max", sweep.tau2_max)->required();
  sweep_cmd->add_option("--steps", sweep.steps, "Grid points per mu, endpoints included")
      ->required();
  sweep_cmd->add_option("--ytarget", sweep.y_target)->capture_default_str();
  CLI::Option* clip_opt =
      sweep_cmd->add_option("--clip", clip, "Add a column with the slope clamped to [-v, v]");
  sweep_cmd->add_option("--out", sweep.out_path, "Output CSV (default stdout)");

  SimulateOptions sim;
  double a1 = 0.0;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Monte Carlo plays of the game");
  sim_cmd->add_option("--scenario", sim.scenario,
                      "conjecture_rule | equilibrium | taylor_rule | conditional | "
                      "constrained_menu")
      ->capture_default_str();
  sim_cmd->add_option("--mu", sim.mu)->required();
  sim_cmd->add_option("--tau2", sim.tau2)->required();
  sim_cmd->add_option("--sigma2", sim.sigma2)->capture_default_str();
  sim_cmd->add_option("--ytarget", sim.y_target)->capture_default_str();
  sim_cmd->add_option("--b", sim.b, "DM conjecture intercept")->capture_default_str();
  sim_cmd->add_option("--c", sim.c, "DM conjecture slope")->capture_default_str();
  sim_cmd->add_option("--equilibrium-index", sim.equilibrium_index)->capture_default_str();
  sim_cmd->add_option("--a0", sim.a0, "Assumed action / first menu action")->capture_default_str();
  CLI::Option* a1_opt = sim_cmd->add_option("--a1", a1, "Second menu action");
  sim_cmd->add_option("--dm", sim.dm, "Conditional scenario DM: taylor | rational | conjecture")
      ->capture_default_str();
  sim_cmd->add_option("--theta-mean", sim.theta_mean)->capture_default_str();
  sim_cmd->add_option("--theta-var", sim.theta_var)->capture_default_str();
  sim_cmd->add_option("--shock-family", sim.shock_family,
                      "beta_scaled | truncated_normal | degenerate")
      ->capture_default_str();
  sim_cmd->add_option("--shock-lower", sim.shock_lower)->capture_default_str();
  sim_cmd->add_option("--shock-upper", sim.shock_upper)->capture_default_str();
  CLI::Option* seed_opt =
      sim_cmd->add_option("--seed", sim.seed, std::string("Master seed (default $") +
                                                  kSeedEnvVar + " or 1)");
  sim_cmd->add_option("-n,--n", sim.n, "Number of draws")->capture_default_str();
  sim_cmd->add_option("--out-prefix", sim.out_prefix, "Writes PREFIX_draws.csv, PREFIX_summary.json")
      ->required();
  sim_cmd->add_option("--threads", sim.threads, "Worker threads (0: all cores)")
      ->capture_default_str();

  EvaluateOptions eval;
  CLI::App* eval_cmd = app.add_subcommand("evaluate", "Rolling MZ regressions on a forecast CSV");
  eval_cmd->add_option("--input", eval.input, "CSV with period,forecast,realization")->required();
  eval_cmd->add_option("--window", eval.window)->capture_default_str();
  eval_cmd->add_option("--out", eval.out_path, "Rolling result CSV")->required();

  try {
    args = detail::merge_config(std::move(args));
    std::reverse(args.begin(), args.end());
    try {
      app.parse(args);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? 0 : 1;
    }
    if (*solve_cmd) {
      if (*b_opt) {
        solve.b = solve_b;
        solve.c = solve_c;
      }
      return cmd_solve(solve, out, err);
    }
    if (*sweep_cmd) {
      if (*clip_opt) sweep.clip = clip;
      return cmd_sweep(sweep, out);
    }
    if (*sim_cmd) {
      if (*a1_opt) sim.a1 = a1;
      if (!*seed_opt) sim.seed = detail::default_seed();
      return cmd_simulate(sim, out);
    }
    return cmd_evaluate(eval, out);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace fbf::cli
