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

// Model-generated forecast panels for exercising the evaluation toolkit:
// each regime plays the equilibrium game for a number of periods.

#pragma once

#include <array>
#include <cstdint>
#include <cstdio>
#include <span>
#include <string>

#include "fbf/evaluation.hpp"
#include "fbf/shocks.hpp"
#include "fbf/simulator.hpp"

namespace fbf {

struct Regime {
  ModelParams params;
  PolicyShockSpec shock;
  StateNoiseSpec state;
  std::size_t periods = 0;
  int equilibrium_index = 1;
};

// Period labels are "t" plus a zero-padded 1-based index, so they sort
// lexicographically. Regime k draws from stream derive_seed(seed, k).
inline ForecastSeries synthesize_series(std::span<const Regime> regimes, std::uint64_t seed) {
  ForecastSeries out;
  std::size_t period = 0;
  for (std::size_t k = 0; k < regimes.size(); ++k) {
    const Regime& rg = regimes[k];
    SimulationRun run;
    run.draw_count = rg.periods;
    run.seed = derive_seed(seed, k);
    run.scenario = Scenario::kEquilibrium;
    run.equilibrium_index = rg.equilibrium_index;
    run.threads = 1;
    const SimulationOutput sim = play_game(run, rg.shock, rg.state, rg.params);
    for (const DrawRecord& r : sim.records) {
      std::array<char, 32> label{};
      std::snprintf(label.data(), label.size(), "t%07zu", ++period);
      out.rows.push_back({label.data(), r.forecast, r.outcome});
    }
  }
  return out;
}

}  // namespace fbf
