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

#include <cmath>
#include <algorithm>
#include <map>

#include "qreduce/error.hpp"
#include "qreduce/protocol.hpp"
#include "qreduce/spin.hpp"
#include "test_support.hpp"

namespace qreduce {
namespace {

ComplexMatrix total_z_matrix() { return build_spin_operator("Z1 + Z2", 2); }
SpectralDecomposition total_z() { return spectral_decompose(total_z_matrix()); }

MeasurementApparatus von_neumann_diagonal() {
  return make_partial(total_z(), {{{0}}, {{0}, {1}}, {{0}}});
}

MeasurementApparatus von_neumann_bell() {
  const auto base = total_z();
  const double h = 1.0 / std::sqrt(2.0);
  return make_full_von_neumann(
      base, {base.eigenbasis[0], {ComplexVector{0.0, h, h, 0.0}, ComplexVector{0.0, h, -h, 0.0}},
             base.eigenbasis[2]});
}

InitialState uniform_state(std::size_t dim) {
  ComplexVector v(dim);
  for (std::size_t i = 0; i < dim; ++i) v[i] = 1.0;
  return PureState::from_amplitudes(v);
}

ProtocolConfig exact_config() {
  ProtocolConfig c;
  c.mode = Mode::kExact;
  return c;
}

ProtocolConfig sampled_config(std::size_t n, std::uint64_t seed) {
  ProtocolConfig c;
  c.mode = Mode::kSampled;
  c.ensemble_size = n;
  c.seed = seed;
  return c;
}

TEST(NamesTest, EnumNames) {
  EXPECT_EQ(verdict_name(Verdict::kNonLuders), "NON_LUDERS");
  EXPECT_EQ(mode_name(Mode::kSampled), "SAMPLED");
  EXPECT_EQ(stage_kind_name(StageKind::kSigmaPrime), "SIGMA_PRIME");
}

TEST(DiscriminateExactTest, LudersPassesBothStages) {
  const auto c = discriminate(uniform_state(4), make_luders(total_z()), total_z_matrix(), exact_config());
  EXPECT_EQ(c.verdict, Verdict::kLuders);
  EXPECT_FALSE(c.detected_at.has_value());
  ASSERT_EQ(c.evidence.size(), 2u);
  EXPECT_TRUE(c.evidence[0].consistent);
  EXPECT_TRUE(c.evidence[1].consistent);
  EXPECT_FALSE(c.false_acceptance_bound.has_value());
  EXPECT_NEAR(*c.target_eigenvalue, 0.0, 1e-12);
  EXPECT_EQ(c.target_multiplicity, 2u);
}

TEST(DiscriminateExactTest, BellVonNeumannCaughtAtSigma) {
  const auto c = discriminate(uniform_state(4), von_neumann_bell(), total_z_matrix(), exact_config());
  EXPECT_EQ(c.verdict, Verdict::kNonLuders);
  EXPECT_EQ(c.detected_at, StageKind::kSigma);
  ASSERT_EQ(c.evidence.size(), 1u);
  const auto& s = c.evidence[0];
  ASSERT_EQ(s.branch_support.size(), 2u);
  for (const auto& b : s.branch_support) {
    EXPECT_NEAR(b.reach_probability, 0.5, 1e-12);
    EXPECT_NEAR(b.second.probability_of(1.0), 0.5, 1e-12);
    EXPECT_NEAR(b.second.probability_of(0.0), 0.5, 1e-12);
    EXPECT_FALSE(b.point_mass);
  }
  EXPECT_NEAR(s.mismatch_probability, 0.5, 1e-12);
}

TEST(DiscriminateExactTest, DiagonalVonNeumannNeedsSigmaPrime) {
  const auto c = discriminate(uniform_state(4), von_neumann_diagonal(), total_z_matrix(), exact_config());
  EXPECT_EQ(c.verdict, Verdict::kNonLuders);
  EXPECT_EQ(c.detected_at, StageKind::kSigmaPrime);
  ASSERT_EQ(c.evidence.size(), 2u);
  EXPECT_TRUE(c.evidence[0].consistent);
  EXPECT_FALSE(c.evidence[1].consistent);
  EXPECT_NEAR(c.evidence[1].mismatch_probability, 0.5, 1e-12);
}

TEST(DiscriminateExactTest, NonDegenerateIsIndeterminate) {
  const auto a = build_spin_operator("2*Z1 + Z2", 2);
  const auto c = discriminate(uniform_state(4), make_luders(spectral_decompose(a)), a, exact_config());
  EXPECT_EQ(c.verdict, Verdict::kIndeterminate);
  EXPECT_TRUE(c.evidence.empty());
}

TEST(DiscriminateExactTest, ExplicitNonDegenerateTargetIsIndeterminate) {
  auto cfg = exact_config();
  cfg.target_eigenvalue = 2.0;
  const auto c = discriminate(uniform_state(4), von_neumann_diagonal(), total_z_matrix(), cfg);
  EXPECT_EQ(c.verdict, Verdict::kIndeterminate);
}

TEST(DiscriminateExactTest, UnknownTargetRejected) {
  auto cfg = exact_config();
  cfg.target_eigenvalue = 1.0;
  EXPECT_THROW(discriminate(uniform_state(4), von_neumann_diagonal(), total_z_matrix(), cfg),
               InvalidArgument);
}

TEST(DiscriminateExactTest, EmptySelection) {
  const InitialState psi = PureState(spin_product_state("++"));
  EXPECT_THROW(discriminate(psi, make_luders(total_z()), total_z_matrix(), exact_config()),
               EmptySelectionError);
}

TEST(DiscriminateExactTest, UnprobedLabelsReported) {
  const InitialState psi = PureState(spin_product_state("+-"));
  const auto c = discriminate(psi, make_luders(total_z()), total_z_matrix(), exact_config());
  EXPECT_EQ(c.verdict, Verdict::kLuders);
  ASSERT_EQ(c.evidence[0].unprobed_labels.size(), 1u);
  EXPECT_NEAR(c.evidence[0].unprobed_labels[0], 0.0, 1e-12);
  EXPECT_NEAR(*c.reference_label, 1.0, 1e-12);
}

TEST(DiscriminateExactTest, MixedInitialState) {
  const InitialState rho = DensityMatrix::maximally_mixed(4);
  EXPECT_EQ(discriminate(rho, von_neumann_diagonal(), total_z_matrix(), exact_config()).verdict,
            Verdict::kNonLuders);
  EXPECT_EQ(discriminate(rho, make_luders(total_z()), total_z_matrix(), exact_config()).verdict,
            Verdict::kLuders);
}

TEST(DiscriminateExactTest, ApparatusLabelsMustMatchObservable) {
  const auto other = build_spin_operator("Z1 + Z2 + I", 2);
  EXPECT_THROW(discriminate(uniform_state(4), make_luders(total_z()), other, exact_config()),
               InvalidArgument);
}

TEST(RunStageTest, RejectsNonCommutingAuxiliary) {
  const auto base = total_z();
  const auto app = make_luders(base);
  const auto cfg = exact_config();
  const auto e1 = prepare_ensemble(uniform_state(4), app, 0.0, cfg);
  const auto x = build_spin_operator("X1", 2);
  const AuxiliaryObservable aux{x, spectral_decompose(x)};
  EXPECT_THROW(run_stage(e1, aux, base, 1, app, StageKind::kSigma, cfg), InvalidArgument);
}

TEST(DiscriminateSampledTest, LudersZeroMismatchesWithBound) {
  const auto c = discriminate(uniform_state(4), make_luders(total_z()), total_z_matrix(), sampled_config(400, 7));
  EXPECT_EQ(c.verdict, Verdict::kLuders);
  ASSERT_EQ(c.evidence.size(), 2u);
  EXPECT_EQ(c.evidence[0].mismatch_count, 0u);
  EXPECT_EQ(c.evidence[1].mismatch_count, 0u);
  ASSERT_TRUE(c.false_acceptance_bound.has_value());
  EXPECT_DOUBLE_EQ(*c.false_acceptance_bound, std::pow(0.5, double(c.evidence[1].trials)));
}

TEST(DiscriminateSampledTest, BellVonNeumannMismatchRate) {
  const std::size_t n = 4000;
  const auto c = discriminate(uniform_state(4), von_neumann_bell(), total_z_matrix(), sampled_config(n, 3));
  EXPECT_EQ(c.verdict, Verdict::kNonLuders);
  EXPECT_EQ(c.detected_at, StageKind::kSigma);
  const auto& s = c.evidence[0];
  const double p = 0.5, sd = std::sqrt(p * (1 - p) / double(s.trials));
  EXPECT_NEAR(s.mismatch_probability, p, 5 * sd);
  EXPECT_NEAR(double(c.selected_systems) / n, 0.5, 5 * std::sqrt(0.25 / n));
  EXPECT_FALSE(c.false_acceptance_bound.has_value());
}

TEST(DiscriminateSampledTest, SameSeedSameTranscript) {
  const auto a = discriminate(uniform_state(4), von_neumann_diagonal(), total_z_matrix(), sampled_config(300, 11));
  const auto b = discriminate(uniform_state(4), von_neumann_diagonal(), total_z_matrix(), sampled_config(300, 11));
  ASSERT_EQ(a.transcript.size(), b.transcript.size());
  for (std::size_t i = 0; i < a.transcript.size(); ++i) {
    EXPECT_EQ(a.transcript[i].system_id, b.transcript[i].system_id);
    EXPECT_EQ(a.transcript[i].stage, b.transcript[i].stage);
    EXPECT_EQ(a.transcript[i].label, b.transcript[i].label);
  }
  const auto c = discriminate(uniform_state(4), von_neumann_diagonal(), total_z_matrix(), sampled_config(300, 12));
  const bool identical =
      a.transcript.size() == c.transcript.size() &&
      std::equal(a.transcript.begin(), a.transcript.end(), c.transcript.begin(),
                 [](const auto& x, const auto& y) { return x.label == y.label; });
  EXPECT_FALSE(identical);
}

TEST(DiscriminateSampledTest, TranscriptCompleteAndOrdered) {
  const auto c = discriminate(uniform_state(4), make_luders(total_z()), total_z_matrix(), sampled_config(200, 5));
  std::map<std::size_t, std::vector<Stage>> per_system;
  for (std::size_t i = 0; i < c.transcript.size(); ++i) {
    EXPECT_EQ(c.transcript[i].timestamp_index, i);
    per_system[c.transcript[i].system_id].push_back(c.transcript[i].stage);
  }
  EXPECT_EQ(per_system.size(), 200u);
  std::size_t selected = 0, sigma_prime = 0;
  for (const auto& [id, stages] : per_system) {
    ASSERT_FALSE(stages.empty());
    EXPECT_EQ(stages[0], Stage::kSelect);
    if (stages.size() == 1) continue;
    ++selected;
    ASSERT_GE(stages.size(), 4u);
    EXPECT_EQ(stages[1], Stage::kSigma1);
    EXPECT_EQ(stages[2], Stage::kApparatusA);
    EXPECT_EQ(stages[3], Stage::kSigma2);
    if (stages.size() > 4) {
      ASSERT_EQ(stages.size(), 7u);
      EXPECT_EQ(stages[4], Stage::kSigmaPrime1);
      EXPECT_EQ(stages[5], Stage::kApparatusA2);
      EXPECT_EQ(stages[6], Stage::kSigmaPrime2);
      ++sigma_prime;
    }
  }
  EXPECT_EQ(selected, c.selected_systems);
  EXPECT_EQ(sigma_prime, c.evidence[1].trials);
}

TEST(DiscriminateSampledTest, EmptySelectionHint) {
  const InitialState psi = PureState(spin_product_state("++"));
  try {
    discriminate(psi, make_luders(total_z()), total_z_matrix(), sampled_config(50, 1));
    FAIL();
  } catch (const EmptySelectionError& e) {
    EXPECT_NE(std::string(e.what()).find("ensemble_size"), std::string::npos);
  }
}

TEST(RequiredEnsembleSizeTest, ClosedForm) {
  EXPECT_EQ(required_ensemble_size(0.5, 0.001), 10u);
  EXPECT_EQ(required_ensemble_size(0.1, 0.01), 44u);
  for (double p : {0.05, 0.2, 0.5, 0.9}) {
    for (double d : {0.1, 0.01, 1e-6}) {
      const auto n = required_ensemble_size(p, d);
      EXPECT_LE(std::pow(1 - p, double(n)), d);
      if (n > 1) EXPECT_GT(std::pow(1 - p, double(n - 1)), d);
    }
  }
  EXPECT_THROW(required_ensemble_size(0.0, 0.1), InvalidArgument);
  EXPECT_THROW(required_ensemble_size(0.5, 1.0), InvalidArgument);
}

}  // namespace
}  // namespace qreduce
