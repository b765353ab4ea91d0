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

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qreduce/apparatus.hpp"
#include "qreduce/protocol.hpp"
#include "qreduce/refinement.hpp"
#include "qreduce/spin.hpp"

namespace qreduce {

using ObservableSource = std::variant<SpinExpression, ComplexMatrix>;

ComplexMatrix build_observable(const ObservableSource& source, double tol = kDefaultTol);

/// Lüders measurement of the observable itself.
struct LudersSpec {};

/// Lüders measurement of a refined observable A'. With a non-empty
/// output_polynomial (coefficients c0 + c1 x + c2 x^2 + ...) the device reports
/// f(a') and f is checked against the level structure.
struct RefinedObservableSpec {
  ObservableSource observable;
  std::vector<double> output_polynomial;
};

struct LevelBasis {
  double eigenvalue;
  std::vector<ComplexVector> vectors;
};

/// Rank-1 cells along the given bases; unlisted levels use the observable's
/// own eigenbasis.
struct FullVonNeumannSpec {
  std::vector<LevelBasis> bases;
};

struct LevelPartition {
  double eigenvalue;
  Partition cells;
};

/// Cells grouping the observable's eigenbasis vectors; unlisted levels stay
/// whole.
struct PartialSpec {
  std::vector<LevelPartition> blocks;
};

/// Lüders measurements of commuting observables performed one after another.
struct ConsecutiveSpec {
  std::vector<ObservableSource> observables;
};

using ApparatusSpec =
    std::variant<LudersSpec, RefinedObservableSpec, FullVonNeumannSpec, PartialSpec, ConsecutiveSpec>;

/// Uniform superposition over the target level's eigenbasis plus the first
/// eigenvector of another level (uniform over the whole basis when there is no
/// degenerate target).
struct DefaultStateSpec {};
/// Product of sigma_z eigenstates, e.g. "+-".
struct ProductStateSpec {
  std::string signs;
};
/// Explicit amplitudes, normalized on use.
struct AmplitudeStateSpec {
  ComplexVector amplitudes;
};

using InitialStateSpec = std::variant<DefaultStateSpec, ProductStateSpec, AmplitudeStateSpec>;

struct Scenario {
  std::string name;
  std::string description;
  std::size_t sites = 2;
  ObservableSource observable;
  ApparatusSpec apparatus;
  InitialStateSpec initial_state;
  ProtocolConfig protocol;
  bool seed_given = false;  // protocol.seed was set explicitly
  std::optional<Verdict> expected_verdict;
  std::optional<StageKind> expected_stage;
};

/// Everything needed to run a scenario. `refinement` is the device's hidden
/// structure, kept for ground-truth checks only.
struct BuiltScenario {
  ComplexMatrix observable;
  SpectralDecomposition base;
  Refinement refinement;
  MeasurementApparatus apparatus;
  InitialState initial;
  std::optional<std::size_t> target_group;
};

BuiltScenario build_scenario(const Scenario& scenario);

/// Level picked by `target` (or the first degenerate level when absent).
/// Throws InvalidArgument for a value that is not an eigenvalue.
std::optional<std::size_t> resolve_target(const SpectralDecomposition& base,
                                          std::optional<double> target,
                                          double grouping = kDefaultGroupingThreshold);

/// Joint eigenspaces of the listed observables, as a refinement of `base`.
/// Throws InvalidArgument if two observables do not commute or a joint
/// eigenspace is not inside a single level of `base`.
Refinement consecutive_refinement(const SpectralDecomposition& base,
                                  const std::vector<ComplexMatrix>& observables,
                                  const Tolerances& tols = {});
MeasurementApparatus build_consecutive(const SpectralDecomposition& base,
                                       const std::vector<ComplexMatrix>& observables,
                                       const Tolerances& tols = {});

/// s1-luders-2spin, s2-vn-total-spin, s3-consecutive, s4-partial-3spin,
/// s5-nondegenerate.
std::vector<Scenario> builtin_scenarios();
std::optional<Scenario> find_builtin(const std::string& name);

}  // namespace qreduce
