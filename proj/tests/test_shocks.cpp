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

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "fbf/shocks.hpp"

namespace fbf {
namespace {

struct Moments {
  double mean = 0.0;
  double var = 0.0;
  double mean_se = 0.0;
  double var_se = 0.0;
};

Moments moments(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double m = 0.0;
  for (double x : xs) m += x;
  m /= n;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double x : xs) {
    const double d = (x - m) * (x - m);
    m2 += d;
    m4 += d * d;
  }
  m2 /= n;
  m4 /= n;
  return {m, m2, std::sqrt(m2 / n), std::sqrt((m4 - m2 * m2) / n)};
}

TEST(SplitMix, DerivedSeedsAreDistinct) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t master : {0ULL, 1ULL, 42ULL}) {
    for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(master, i));
  }
  EXPECT_EQ(seen.size(), 3000u);
  EXPECT_EQ(derive_seed(7, 3), derive_seed(7, 3));
}

TEST(ShockFamily, NamesRoundTrip) {
  for (ShockFamily f :
       {ShockFamily::kBetaScaled, ShockFamily::kTruncatedNormal, ShockFamily::kDegenerate}) {
    EXPECT_EQ(parse_family(family_name(f)), f);
  }
  EXPECT_THROW(parse_family("gamma"), Error);
}

TEST(MatchBeta, SymmetricCase) {
  const BetaShape s = match_beta({ShockFamily::kBetaScaled, 0.5, 0.05, 0.0, 1.0});
  EXPECT_NEAR(s.alpha, 2.0, 1e-12);
  EXPECT_NEAR(s.beta, 2.0, 1e-12);
}

TEST(MatchBeta, Infeasible) {
  try {
    match_beta({ShockFamily::kBetaScaled, 0.5, 0.3, 0.0, 1.0});
    FAIL() << "expected MomentMatchInfeasible";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMomentMatchInfeasible);
  }
  EXPECT_THROW(match_beta({ShockFamily::kBetaScaled, 1.5, 0.01, 0.0, 1.0}), Error);
  EXPECT_THROW(match_beta({ShockFamily::kBetaScaled, 0.5, 0.0, 0.0, 1.0}), Error);
}

TEST(SamplePolicyShock, DegenerateIsConstant) {
  const auto xs = sample_policy_shock({ShockFamily::kDegenerate, 0.5, 0.0, 0.0, 1.0}, 1000, 9);
  EXPECT_TRUE(std::all_of(xs.begin(), xs.end(), [](double x) { return x == 0.5; }));
  EXPECT_THROW(sample_policy_shock({ShockFamily::kDegenerate, 0.5, 0.1, 0.0, 1.0}, 10, 9), Error);
}

TEST(SamplePolicyShock, BetaMomentsWithinThreeSe) {
  const PolicyShockSpec spec{ShockFamily::kBetaScaled, 0.5, 0.05, 0.0, 1.0};
  const auto xs = sample_policy_shock(spec, 1000000, 20261016);
  const Moments m = moments(xs);
  EXPECT_LT(std::abs(m.mean - 0.5), 3.0 * m.mean_se);
  EXPECT_LT(std::abs(m.var - 0.05), 3.0 * m.var_se);
  EXPECT_TRUE(std::all_of(xs.begin(), xs.end(), [](double x) { return x > 0.0 && x < 1.0; }));
}

TEST(SamplePolicyShock, ScaledBetaOnWiderSupport) {
  const PolicyShockSpec spec{ShockFamily::kBetaScaled, 1.2, 0.3, 0.0, 3.0};
  const auto xs = sample_policy_shock(spec, 400000, 5);
  const Moments m = moments(xs);
  EXPECT_LT(std::abs(m.mean - 1.2), 3.0 * m.mean_se);
  EXPECT_LT(std::abs(m.var - 0.3), 3.0 * m.var_se);
}

TEST(SamplePolicyShock, TruncatedNormalMoments) {
  for (const auto& [mean, var] : {std::pair{0.7, 0.15}, std::pair{1.0, 0.3}, std::pair{0.5, 0.2}}) {
    const PolicyShockSpec spec{ShockFamily::kTruncatedNormal, mean, var, 0.0, 1.0};
    const auto xs = sample_policy_shock(spec, 400000, 77);
    const Moments m = moments(xs);
    EXPECT_LT(std::abs(m.mean - mean), 3.0 * m.mean_se) << mean << " " << var;
    EXPECT_LT(std::abs(m.var - var), 3.0 * m.var_se) << mean << " " << var;
    EXPECT_TRUE(std::all_of(xs.begin(), xs.end(), [](double x) { return x > 0.0; }));
  }
}

TEST(SamplePolicyShock, TruncatedNormalRejectsExtremeDispersion) {
  // A normal truncated below at 0 has coefficient of variation below 1.
  EXPECT_THROW(match_truncated_normal({ShockFamily::kTruncatedNormal, 0.1, 1.0, 0.0, 1.0}),
               Error);
}

TEST(SamplePolicyShock, SameSeedSameStream) {
  const PolicyShockSpec spec{ShockFamily::kBetaScaled, 0.3, 0.02, 0.0, 1.0};
  EXPECT_EQ(sample_policy_shock(spec, 5000, 123), sample_policy_shock(spec, 5000, 123));
  EXPECT_NE(sample_policy_shock(spec, 5000, 123), sample_policy_shock(spec, 5000, 124));
}

TEST(StateNoiseSpec, Validation) {
  EXPECT_NO_THROW(validate(StateNoiseSpec{0.0, 0.0, 1.0}));
  EXPECT_THROW(validate(StateNoiseSpec{0.0, -1.0, 1.0}), Error);
  EXPECT_THROW(validate(StateNoiseSpec{0.0, 1.0, 0.0}), Error);
}

}  // namespace
}  // namespace fbf
