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

// Random primitives for the simulator and the Monte Carlo oracle: seed
// derivation, moment-matched policy-strength distributions, and the state /
// noise settings.
//
// Boost.Random is used instead of <random> distributions so that a given seed
// produces the same stream with any standard library.

#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <boost/random/beta_distribution.hpp>
#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include "fbf/error.hpp"

namespace fbf {

using Engine = boost::random::mt19937_64;

inline constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed of stream `index` under `master`. Streams depend only on this pair,
// never on scheduling.
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

inline Engine make_engine(std::uint64_t master, std::uint64_t index) {
  return Engine(derive_seed(master, index));
}

enum class ShockFamily { kBetaScaled, kTruncatedNormal, kDegenerate };

inline constexpr std::string_view family_name(ShockFamily f) {
  switch (f) {
    case ShockFamily::kBetaScaled: return "beta_scaled";
    case ShockFamily::kTruncatedNormal: return "truncated_normal";
    case ShockFamily::kDegenerate: return "degenerate";
  }
  return "unknown";
}

inline ShockFamily parse_family(std::string_view name) {
  if (name == "beta_scaled") return ShockFamily::kBetaScaled;
  if (name == "truncated_normal") return ShockFamily::kTruncatedNormal;
  if (name == "degenerate") return ShockFamily::kDegenerate;
  fail(ErrorCode::kInvalidArgument, "unknown shock family '" + std::string(name) + "'");
}

// Distribution of the policy strength x.
//   beta_scaled:      x = lower + (upper - lower) * Beta(alpha, beta)
//   truncated_normal: Normal(loc, scale) conditioned on x > lower; upper unused
//   degenerate:       x = target_mean, requires target_var == 0
struct PolicyShockSpec {
  ShockFamily family = ShockFamily::kBetaScaled;
  double target_mean = 0.5;
  double target_var = 0.05;
  double lower = 0.0;
  double upper = 1.0;
};

struct BetaShape {
  double alpha = 1.0;
  double beta = 1.0;
};

inline BetaShape match_beta(const PolicyShockSpec& spec) {
  const double width = spec.upper - spec.lower;
  if (!(spec.lower >= 0.0) || !(width > 0.0) || !std::isfinite(width)) {
    fail(ErrorCode::kMomentMatchInfeasible, "beta_scaled needs 0 <= lower < upper < inf");
  }
  const double m = (spec.target_mean - spec.lower) / width;
  const double v = spec.target_var / (width * width);
  if (!(m > 0.0 && m < 1.0)) {
    fail(ErrorCode::kMomentMatchInfeasible, "beta_scaled mean must lie inside (lower, upper)");
  }
  if (!(v > 0.0) || !(v < m * (1.0 - m))) {
    fail(ErrorCode::kMomentMatchInfeasible,
         "beta_scaled needs 0 < var < (mean - lower)(upper - mean)");
  }
  const double common = m * (1.0 - m) / v - 1.0;
  return {m * common, (1.0 - m) * common};
}

// Normal(loc, scale) truncated to (lower, inf). z is the standardised
// truncation point (lower - loc) / scale.
struct TruncatedNormalShape {
  double loc = 0.0;
  double scale = 1.0;
  double z = 0.0;
};

namespace detail {

// Inverse Mills ratio phi(z) / (1 - Phi(z)).
inline double inverse_mills(double z) {
  static const boost::math::normal_distribution<double> std_normal;
  return boost::math::pdf(std_normal, z) / boost::math::cdf(boost::math::complement(std_normal, z));
}

// Coefficient of variation of (x - lower) for a normal truncated at z.
// Increases monotonically from 0 (z -> -inf) towards 1 (z -> +inf).
inline double truncated_cv(double z) {
  const double lam = inverse_mills(z);
  return std::sqrt(1.0 + z * lam - lam * lam) / (lam - z);
}

}  // namespace detail

// Bisection on z over [-40, 10]; beyond z = 10 the variance factor loses
// precision, which caps the attainable coefficient of variation near 0.99.
inline TruncatedNormalShape match_truncated_normal(const PolicyShockSpec& spec) {
  const double shifted_mean = spec.target_mean - spec.lower;
  if (!(spec.lower >= 0.0) || !(shifted_mean > 0.0)) {
    fail(ErrorCode::kMomentMatchInfeasible, "truncated_normal needs 0 <= lower < mean");
  }
  if (!(spec.target_var > 0.0)) {
    fail(ErrorCode::kMomentMatchInfeasible, "truncated_normal needs var > 0");
  }
  const double target_cv = std::sqrt(spec.target_var) / shifted_mean;
  double lo = -40.0;
  double hi = 10.0;
  if (!(target_cv < detail::truncated_cv(hi))) {
    fail(ErrorCode::kMomentMatchInfeasible,
         "truncated_normal cannot reach this variance; need sd well below (mean - lower)");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    const double mid = 0.5 * (lo + hi);
    (detail::truncated_cv(mid) < target_cv ? lo : hi) = mid;
  }
  const double z = 0.5 * (lo + hi);
  const double scale = shifted_mean / (detail::inverse_mills(z) - z);
  return {spec.lower - z * scale, scale, z};
}

// Draws x from a validated, moment-matched PolicyShockSpec. Every draw is
// strictly positive.
class PolicyShockSampler {
 public:
  explicit PolicyShockSampler(const PolicyShockSpec& spec) : spec_(spec) {
    if (!std::isfinite(spec.target_mean) || !std::isfinite(spec.target_var) ||
        spec.target_var < 0.0) {
      fail(ErrorCode::kMomentMatchInfeasible, "shock moments must be finite with var >= 0");
    }
    switch (spec.family) {
      case ShockFamily::kDegenerate:
        if (spec.target_var != 0.0) {
          fail(ErrorCode::kMomentMatchInfeasible, "degenerate shock requires var = 0");
        }
        if (!(spec.target_mean > 0.0)) {
          fail(ErrorCode::kMomentMatchInfeasible, "policy strength must be > 0");
        }
        break;
      case ShockFamily::kBetaScaled: {
        const BetaShape shape = match_beta(spec);
        beta_ = boost::random::beta_distribution<double>(shape.alpha, shape.beta);
        break;
      }
      case ShockFamily::kTruncatedNormal:
        tn_ = match_truncated_normal(spec);
        tail_mass_ = boost::math::cdf(boost::math::complement(std_normal_, tn_.z));
        break;
    }
  }

  const PolicyShockSpec& spec() const { return spec_; }
  BetaShape beta_shape() const { return {beta_.alpha(), beta_.beta()}; }
  const TruncatedNormalShape& truncated_normal_shape() const { return tn_; }

  double operator()(Engine& eng) {
    switch (spec_.family) {
      case ShockFamily::kDegenerate:
        return spec_.target_mean;
      case ShockFamily::kBetaScaled: {
        double x = 0.0;
        do {
          x = spec_.lower + (spec_.upper - spec_.lower) * beta_(eng);
        } while (!(x > 0.0));
        return x;
      }
      case ShockFamily::kTruncatedNormal: {
        // Inverse-CDF draw from the upper tail beyond z.
        double x = 0.0;
        do {
          const double u = 1.0 - uniform_(eng);  // (0, 1]
          const double xs = boost::math::quantile(
              boost::math::complement(std_normal_, u * tail_mass_));
          x = tn_.loc + tn_.scale * xs;
        } while (!(x > 0.0));
        return x;
      }
    }
    return spec_.target_mean;
  }

 private:
  PolicyShockSpec spec_;
  boost::random::beta_distribution<double> beta_{1.0, 1.0};
  boost::random::uniform_real_distribution<double> uniform_{0.0, 1.0};
  boost::math::normal_distribution<double> std_normal_;
  TruncatedNormalShape tn_;
  double tail_mass_ = 1.0;
};

// n strictly positive draws of x from a single stream derived from `seed`.
inline std::vector<double> sample_policy_shock(const PolicyShockSpec& spec, std::size_t n,
                                               std::uint64_t seed) {
  PolicyShockSampler sampler(spec);
  Engine eng = make_engine(seed, 0);
  std::vector<double> out(n);
  for (double& x : out) x = sampler(eng);
  return out;
}

// theta ~ Normal(theta_mean, theta_var), eps ~ Normal(0, noise_var), drawn
// independently of each other and of x. A zero theta_var pins theta.
struct StateNoiseSpec {
  double theta_mean = 0.0;
  double theta_var = 1.0;
  double noise_var = 1.0;
};

inline void validate(const StateNoiseSpec& sn) {
  if (!std::isfinite(sn.theta_mean) || !std::isfinite(sn.theta_var) || sn.theta_var < 0.0) {
    fail(ErrorCode::kInvalidArgument, "theta mean must be finite and theta variance >= 0");
  }
  if (!std::isfinite(sn.noise_var) || !(sn.noise_var > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "noise variance must be finite and > 0");
  }
}

}  // namespace fbf
