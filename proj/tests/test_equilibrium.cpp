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

#include <cmath>

#include <gtest/gtest.h>

#include "fbf/equilibrium.hpp"
#include "fbf/simulator.hpp"
#include "test_support.hpp"

namespace fbf {
namespace {

// Reference values from a 40-digit numeric fixed-point search of the
// best-response map, with the MZ line computed from E(y | f) directly.
struct Reference {
  double mu, tau2, y_target;
  double c1, b1, c2, b2;
  double mz_intercept, mz_slope, bias_coef;
};

constexpr Reference kReferences[] = {
    {0.98, 0.1, 2.0, -0.092701665379258301, 2.1854033307585166, -0.86729833462074166,
     3.7345966692414833, 2.4314917087665386, -0.21574585438326929, 0.11270166537925832},
    {0.7, 0.15, 2.0, 0.11622776601683799, 1.767544467966324, -0.5162277660168379,
     3.0324555320336758, -3.1622776601683777, 2.5811388300841889, 0.18377223398316206},
    {0.1, 0.02, 2.0, 0.87958315233127195, 0.2408336953374561, -0.079583152331271959,
     2.1591663046625439, -0.046423917089850251, 1.0232119585449251, 0.020416847668728046},
    {0.4, 0.15, 2.0, 0.41622776601683792, 1.1675444679663242, -0.21622776601683796,
     2.4324555320336759, -0.88303688022450576, 1.4415184401122529, 0.18377223398316206},
};

TEST(SolveEquilibria, MatchesFrozenReferences) {
  for (const Reference& r : kReferences) {
    const ModelParams p{r.mu, r.tau2, 1.0, r.y_target};
    const EquilibriumSolution sol = solve_equilibria(p);
    ASSERT_TRUE(sol.exists);
    EXPECT_FALSE(sol.repeated);
    EXPECT_EQ(sol.selected_index, 1);
    EXPECT_NEAR(sol.rule(1).slope, r.c1, 1e-13);
    EXPECT_NEAR(sol.rule(1).intercept, r.b1, 1e-12);
    EXPECT_NEAR(sol.rule(2).slope, r.c2, 1e-13);
    EXPECT_NEAR(sol.rule(2).intercept, r.b2, 1e-12);
    const EquilibriumProperties props = equilibrium_bias_and_mz(p);
    EXPECT_NEAR(props.mz.slope, r.mz_slope, 1e-11);
    EXPECT_NEAR(props.mz.intercept, r.mz_intercept, 1e-11);
    EXPECT_NEAR(props.bias.coef_theta, r.bias_coef, 1e-13);
    EXPECT_NEAR(props.bias.coef_const, -r.bias_coef * r.y_target, 1e-12);
  }
}

TEST(SolveEquilibria, ReferencePoint) {
  const EquilibriumSolution sol = solve_equilibria({0.98, 0.1, 1.0, 2.0});
  // 1/2 - mu -+ sqrt(1 - 4 tau2) / 2
  EXPECT_NEAR(sol.rule(1).slope, -0.092701665379258301, 1e-14);
  EXPECT_NEAR(sol.rule(2).slope, -0.86729833462074166, 1e-14);
  EXPECT_NEAR(sol.rule(1).slope, -0.0927, 5e-5);
  EXPECT_NEAR(sol.rule(2).slope, -0.8673, 5e-5);
  EXPECT_NEAR(equilibrium_bias_and_mz({0.98, 0.1, 1.0, 2.0}).mz.slope, -0.22, 0.005);
}

TEST(SolveEquilibria, NoUncertaintyRoots) {
  for (const double mu : {0.2, 0.5, 0.9, 1.7}) {
    const EquilibriumSolution sol = solve_equilibria({mu, 0.0, 1.0, 2.0});
    ASSERT_TRUE(sol.exists);
    EXPECT_DOUBLE_EQ(sol.roots[0].rule.slope, 1.0 - mu);
    EXPECT_DOUBLE_EQ(sol.roots[1].rule.slope, -mu);
    EXPECT_TRUE(sol.roots[1].indifferent);
    EXPECT_FALSE(sol.roots[0].indifferent);
    // Root 1 is the rational forecast theta(1 - mu) + mu y_target.
    EXPECT_NEAR(sol.roots[0].rule.intercept, mu * 2.0, 1e-15);
  }
}

TEST(SolveEquilibria, NonExistenceAboveQuarter) {
  const EquilibriumSolution sol = solve_equilibria({0.5, 0.26, 1.0, 0.0});
  EXPECT_FALSE(sol.exists);
  try {
    (void)sol.rule(1);
    FAIL() << "expected NoEquilibrium";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoEquilibrium);
  }
  EXPECT_THROW(equilibrium_bias_and_mz({0.5, 0.26, 1.0, 0.0}), Error);
}

TEST(SolveEquilibria, RepeatedRootAtQuarter) {
  const EquilibriumSolution sol = solve_equilibria({0.3, 0.25, 1.0, 1.0});
  ASSERT_TRUE(sol.exists);
  EXPECT_TRUE(sol.repeated);
  EXPECT_EQ(sol.roots[0].rule.slope, sol.roots[1].rule.slope);
  EXPECT_DOUBLE_EQ(sol.roots[0].rule.slope, 0.2);
}

TEST(SolveEquilibria, DegenerateFirstRoot) {
  // mu = (1 + sqrt(1 - 4 tau2)) / 2 puts c1 at zero; tau2 = 3/16 gives mu = 3/4
  // with every intermediate exact in binary.
  const ModelParams p{0.75, 0.1875, 1.0, 1.0};
  const EquilibriumSolution sol = solve_equilibria(p);
  ASSERT_TRUE(sol.exists);
  EXPECT_TRUE(sol.roots[0].degenerate);
  try {
    (void)sol.selected();
    FAIL() << "expected DegenerateEquilibrium";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateEquilibrium);
  }
  EXPECT_THROW(equilibrium_bias_and_mz(p), Error);
  EXPECT_NO_THROW((void)sol.rule(2));
}

TEST(SolveEquilibria, RejectsBadIndex) {
  const EquilibriumSolution sol = solve_equilibria({0.5, 0.1, 1.0, 0.0});
  EXPECT_THROW((void)sol.rule(0), Error);
  EXPECT_THROW((void)sol.rule(3), Error);
}

// Property: every non-degenerate root is a fixed point of the best response.
TEST(SolveEquilibria, RootsAreFixedPoints) {
  testing::Gen g(41);
  int checked = 0;
  for (int i = 0; i < 2000; ++i) {
    const ModelParams p = g.params(0.0, 0.25);
    const EquilibriumSolution sol = solve_equilibria(p);
    ASSERT_TRUE(sol.exists);
    for (int k = 1; k <= 2; ++k) {
      const EquilibriumRoot& root = sol.root(k);
      if (root.degenerate || root.indifferent) continue;
      const LinearRule br = optimal_forecast(root.rule, p);
      EXPECT_NEAR(br.slope, root.rule.slope, 1e-10);
      EXPECT_NEAR(br.intercept, root.rule.intercept,
                  1e-10 * std::max(1.0, std::abs(root.rule.intercept)));
      ++checked;
    }
  }
  EXPECT_GT(checked, 3900);
}

// Property: with tau2 > 1/4 every best response shrinks the slope.
TEST(OptimalForecast, AttenuatesSlopeWithoutEquilibrium) {
  testing::Gen g(43);
  for (int i = 0; i < 2000; ++i) {
    ModelParams p = g.params(0.2501, 3.0);
    const LinearRule conj = g.conjecture();
    const LinearRule br = optimal_forecast(conj, p);
    EXPECT_LT(std::abs(br.slope), std::abs(conj.slope)) << "case " << i;
  }
}

TEST(BestResponseIteration, ShrinksEveryStepWithoutEquilibrium) {
  const ModelParams p{0.6, 0.4, 1.0, 1.0};
  const BestResponseTrace trace = best_response_iteration({0.5, 2.0}, p, 50, 1e-14);
  ASSERT_GE(trace.iterates.size(), 2u);
  for (std::size_t i = 1; i < trace.iterates.size(); ++i) {
    EXPECT_LT(std::abs(trace.iterates[i].slope), std::abs(trace.iterates[i - 1].slope));
  }
}

TEST(BestResponseIteration, EquilibriumStartIsAlreadyFixed) {
  const ModelParams p{0.98, 0.1, 1.0, 2.0};
  const LinearRule eq = solve_equilibria(p).selected();
  const BestResponseTrace trace = best_response_iteration(eq, p, 100, 1e-10);
  EXPECT_EQ(trace.iterates.size(), 1u);
  EXPECT_EQ(trace.status, BestResponseTrace::Status::kConverged);
}

TEST(BestResponseIteration, NoUncertaintyFromTaylorStart) {
  // Convergence is not guaranteed in general. Here the slope map
  // c -> c / (mu + c) has derivative mu / (mu + c)^2 = 0.5 at c = 0.5.
  const ModelParams p{0.5, 0.0, 1.0, 2.0};
  const BestResponseTrace trace = best_response_iteration(kTaylorConjecture, p, 500, 1e-12);
  EXPECT_FALSE(trace.iterates.empty());
  EXPECT_EQ(status_name(trace.status), "converged");
  EXPECT_NEAR(trace.iterates.back().slope, 0.5, 1e-10);
}

TEST(EquilibriumBiasAndMz, NoUncertaintyIsExactlyRational) {
  for (const double mu : {0.2, 0.5, 0.9, 1.7}) {
    const EquilibriumProperties props = equilibrium_bias_and_mz({mu, 0.0, 1.0, 2.0});
    EXPECT_EQ(props.bias.coef_theta, 0.0);
    EXPECT_EQ(props.bias.coef_const, 0.0);
    EXPECT_EQ(props.mz.slope, 1.0);
    EXPECT_EQ(props.mz.intercept, 0.0);
  }
}

TEST(EquilibriumBiasAndMz, UnitMeanPolicyStrength) {
  for (const double tau2 : {0.01, 0.05, 0.1, 0.2, 0.25}) {
    for (const double y : {-1.5, 0.0, 2.0, 3.7}) {
      const EquilibriumProperties props = equilibrium_bias_and_mz({1.0, tau2, 1.0, y});
      EXPECT_LT(std::abs(props.mz.slope), 1e-12);
      EXPECT_EQ(props.mz.intercept, y);
    }
  }
}

TEST(EquilibriumBiasAndMz, BiasAtQuarter) {
  const EquilibriumProperties props = equilibrium_bias_and_mz({0.4, 0.25, 1.0, 1.0});
  EXPECT_DOUBLE_EQ(props.bias(2.0), 0.5);
}

// Property: the closed form agrees with the general conjecture formulas
// evaluated at the selected root.
TEST(EquilibriumBiasAndMz, AgreesWithConjectureFormulasAtRoot) {
  testing::Gen g(47);
  for (int i = 0; i < 1000; ++i) {
    const ModelParams p = g.params(0.0, 0.25);
    const EquilibriumSolution sol = solve_equilibria(p);
    const EquilibriumRoot& root = sol.roots[0];
    if (std::abs(root.rule.slope) < 1e-3) continue;
    const EquilibriumProperties props = equilibrium_bias_and_mz(p);
    const BiasLine bl = bias_line(root.rule, p);
    const MZLine mz = mz_line(root.rule, p);
    const double scale = std::max(1.0, std::abs(mz.slope));
    EXPECT_NEAR(props.bias.coef_theta, bl.coef_theta, 1e-12);
    EXPECT_NEAR(props.bias.coef_const, bl.coef_const, 1e-11 * std::max(1.0, std::abs(p.y_target)));
    EXPECT_NEAR(props.mz.slope, mz.slope, 1e-9 * scale);
    EXPECT_NEAR(props.mz.intercept, mz.intercept,
                1e-9 * scale * std::max(1.0, std::abs(p.y_target)));
  }
}

}  // namespace
}  // namespace fbf
