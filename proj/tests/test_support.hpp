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

// Small hand-rolled generators for property tests.

#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include <boost/random/uniform_real_distribution.hpp>

#include "fbf/model.hpp"
#include "fbf/shocks.hpp"

namespace fbf::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(derive_seed(seed, 0)) {}

  // Boost's uniform_real never returns when lo == hi.
  double uniform(double lo, double hi) {
    if (lo == hi) return lo;
    return boost::random::uniform_real_distribution<double>(lo, hi)(eng_);
  }
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }
  bool coin() { return uniform(0.0, 1.0) < 0.5; }

  // Nonzero slope with magnitude in [0.05, 3] and random sign.
  double slope() { return (coin() ? 1.0 : -1.0) * log_uniform(0.05, 3.0); }

  ModelParams params(double tau2_lo, double tau2_hi) {
    return {log_uniform(0.05, 2.0), uniform(tau2_lo, tau2_hi), log_uniform(0.05, 4.0),
            uniform(-3.0, 3.0)};
  }

  LinearRule conjecture() { return {uniform(-3.0, 3.0), slope()}; }

 private:
  Engine eng_;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Fresh per-test scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("fbf_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fbf::testing
