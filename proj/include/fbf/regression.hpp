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

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>

#include "fbf/error.hpp"
#include "fbf/model.hpp"

namespace fbf {

// Simple-regression fit with classical homoskedastic standard errors.
struct OlsFit {
  MZLine line;  // intercept + slope * regressor
  double intercept_se = 0.0;
  double slope_se = 0.0;
  double r_squared = 0.0;
  std::size_t n = 0;
};

// Least squares of `response` on a constant and `regressor`. Sums are taken
// in index order about the sample means, so results are reproducible.
// A constant response is fitted exactly and reported with R^2 = 1.
inline OlsFit ols_fit(std::span<const double> regressor, std::span<const double> response) {
  if (regressor.size() != response.size()) {
    fail(ErrorCode::kInvalidArgument, "regressor and response lengths differ");
  }
  const std::size_t n = regressor.size();
  if (n < 3) {
    fail(ErrorCode::kInsufficientData,
         "need at least 3 observations, got " + std::to_string(n));
  }
  const double nd = static_cast<double>(n);
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += regressor[i];
    sy += response[i];
  }
  const double mx = sx / nd;
  const double my = sy / nd;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = regressor[i] - mx;
    const double dy = response[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) fail(ErrorCode::kZeroVariance, "regressor has zero sample variance");

  OlsFit fit;
  fit.n = n;
  fit.line.slope = sxy / sxx;
  fit.line.intercept = my - fit.line.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = response[i] - fit.line(regressor[i]);
    sse += r * r;
  }
  const double s2 = sse / (nd - 2.0);
  fit.slope_se = std::sqrt(s2 / sxx);
  fit.intercept_se = std::sqrt(s2 * (1.0 / nd + mx * mx / sxx));
  fit.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  return fit;
}

// Mincer-Zarnowitz regression: realised outcome on the forecast.
inline OlsFit ols_mz(std::span<const double> forecasts, std::span<const double> outcomes) {
  return ols_fit(forecasts, outcomes);
}

}  // namespace fbf
