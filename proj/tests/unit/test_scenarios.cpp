// Copyright 2026 The qreduce Authors
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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "qreduce/error.hpp"
#include "qreduce/oracle.hpp"
#include "qreduce/scenarios.hpp"
#include "qreduce/spin.hpp"

namespace qreduce {
namespace {

TEST(BuiltinScenariosTest, StableNames) {
  const auto all = builtin_scenarios();
  ASSERT_EQ(all.size(), 5u);
  EXPECT_EQ(all[0].name, "s1-luders-2spin");
  EXPECT_EQ(all[1].name, "s2-vn-total-spin");
  EXPECT_EQ(all[2].name, "s3-consecutive");
  EXPECT_EQ(all[3].name, "s4-partial-3spin");
  EXPECT_EQ(all[4].name, "s5-nondegenerate");
  EXPECT_TRUE(find_builtin("s3-consecutive").has_value());
  EXPECT_FALSE(find_builtin("s9").has_value());
}

class BuiltinVerdictTest : public ::testing::TestWithParam<Scenario> {};

TEST_P(BuiltinVerdictTest, ExactVerdictMatchesExpectation) {
  const Scenario& s = GetParam();
  const auto built = build_scenario(s);
  const auto c = discriminate(built.initial, built.apparatus, built.observable, s.protocol);
  ASSERT_TRUE(s.expected_verdict.has_value());
  EXPECT_EQ(c.verdict, *s.expected_verdict);
  EXPECT_EQ(c.detected_at, s.expected_stage);
  const Verdict oracle = built.target_group
                             ? classify_refinement_oracle(built.refinement, *built.target_group)
                             : Verdict::kIndeterminate;
  EXPECT_EQ(c.verdict, oracle);
}

TEST_P(BuiltinVerdictTest, SampledVerdictMatchesExpectation) {
  Scenario s = GetParam();
  s.protocol.mode = Mode::kSampled;
  s.protocol.ensemble_size = 2000;
  s.protocol.seed = 2024;
  const auto built = build_scenario(s);
  const auto c = discriminate(built.initial, built.apparatus, built.observable, s.protocol);
  EXPECT_EQ(c.verdict, *s.expected_verdict);
  EXPECT_EQ(c.detected_at, s.expected_stage);
}

INSTANTIATE_TEST_SUITE_P(All, BuiltinVerdictTest, ::testing::ValuesIn(builtin_scenarios()),
                         [](const auto& info) {
                           std::string n = info.param.name;
                           std::replace(n.begin(), n.end(), '-', '_');
                           return n;
                         });

TEST(ScenarioTest, PartialThreeSpinTargetMultiplicity) {
  const auto built = build_scenario(*find_builtin("s4-partial-3spin"));
  ASSERT_TRUE(built.target_group.has_value());
  EXPECT_NEAR(built.base.eigenvalues[*built.target_group], 0.0, 1e-12);
  EXPECT_EQ(built.base.multiplicities[*built.target_group], 4u);
  EXPECT_EQ(built.refinement.block_count(*built.target_group), 2u);
  EXPECT_FALSE(built.refinement.is_full_von_neumann());
}

TEST(ScenarioTest, TotalSpinOutputPolynomial) {
  const auto a_prime = build_spin_operator("Z1 + Z2 + TOTAL_SPIN_SQ", 2);
  const auto f = apply_spectral_function(a_prime, [](double x) {
    return -8.0 / 3.0 * x + x * x - x * x * x / 12.0;
  });
  EXPECT_LE(max_abs_diff(f, build_spin_operator("Z1 + Z2", 2)), 1e-9);
}

TEST(ScenarioTest, ResolveTarget) {
  const auto base = spectral_decompose(build_spin_operator("Z1 + Z2", 2));
  EXPECT_EQ(resolve_target(base, std::nullopt), std::optional<std::size_t>(1));
  EXPECT_EQ(resolve_target(base, -2.0), std::optional<std::size_t>(2));
  EXPECT_THROW(resolve_target(base, 0.5), InvalidArgument);
  const auto nondegenerate = spectral_decompose(build_spin_operator("2*Z1 + Z2", 2));
  EXPECT_FALSE(resolve_target(nondegenerate, std::nullopt).has_value());
}

TEST(ConsecutiveTest, JointEigenspacesOfSingleSiteZ) {
  const auto base = spectral_decompose(build_spin_operator("Z1 + Z2", 3));
  const auto r = consecutive_refinement(
      base, {build_spin_operator("Z1", 3), build_spin_operator("Z2", 3)});
  for (std::size_t k = 0; k < base.group_count(); ++k) {
    std::size_t total = 0;
    for (const auto& cell : r.cells(k)) {
      EXPECT_EQ(projector_rank(cell.projector), 2u);
      total += cell.basis.size();
    }
    EXPECT_EQ(total, base.multiplicities[k]);
  }
}

TEST(ConsecutiveTest, NonCommutingRejected) {
  const auto base = spectral_decompose(build_spin_operator("Z1 + Z2", 2));
  EXPECT_THROW(consecutive_refinement(base, {build_spin_operator("Z1", 2), build_spin_operator("X1", 2)}),
               InvalidArgument);
}

TEST(ConsecutiveTest, CoarserThanObservableRejected) {
  const auto base = spectral_decompose(build_spin_operator("Z1 + 2*Z2", 2));
  EXPECT_THROW(consecutive_refinement(base, {build_spin_operator("Z1", 2)}), InvalidArgument);
}

TEST(ScenarioTest, DefaultStatePopulatesTargetAndOneOtherLevel) {
  const auto built = build_scenario(*find_builtin("s3-consecutive"));
  const auto& psi = std::get<PureState>(built.initial);
  const auto dist = born_distribution(built.base, DensityMatrix::from_pure(psi));
  EXPECT_NEAR(dist.probability_of(0.0), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(dist.probability_of(2.0), 1.0 / 3.0, 1e-12);
}

TEST(ScenarioTest, ProductAndAmplitudeStates) {
  Scenario s = *find_builtin("s1-luders-2spin");
  s.initial_state = ProductStateSpec{"-+"};
  EXPECT_NEAR(std::abs(std::get<PureState>(build_scenario(s).initial).vector()[2]), 1.0, 1e-15);
  s.initial_state = ProductStateSpec{"+"};
  EXPECT_THROW(build_scenario(s), Error);
  s.initial_state = AmplitudeStateSpec{ComplexVector{0.0, 3.0, 4.0, 0.0}};
  EXPECT_NEAR(std::get<PureState>(build_scenario(s).initial).vector()[1].real(), 0.6, 1e-15);
}

TEST(ScenarioTest, MatrixObservableDimensionChecked) {
  Scenario s = *find_builtin("s1-luders-2spin");
  s.observable = pauli::z();
  EXPECT_THROW(build_scenario(s), Error);
}

}  // namespace
}  // namespace qreduce
