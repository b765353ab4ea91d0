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
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qreduce/apparatus.hpp"
#include "qreduce/auxiliary.hpp"
#include "qreduce/quantum.hpp"

namespace qreduce {

// Black-box test for the Lüders rule. Only the measured observable, the
// apparatus readings and auxiliary measurements are used; the apparatus'
// internal refinement is never consulted.

enum class Mode { kExact, kSampled };
enum class Verdict { kLuders, kNonLuders, kIndeterminate };
enum class StageKind { kSigma, kSigmaPrime };

std::string_view mode_name(Mode mode);
std::string_view verdict_name(Verdict verdict);
std::string_view stage_kind_name(StageKind stage);

struct ProtocolConfig {
  Mode mode = Mode::kExact;
  std::size_t ensemble_size = 1000;
  /// Eigenvalue a_1 to test; nullopt picks the first degenerate level.
  std::optional<double> target_eigenvalue;
  /// Assumed per-trial mismatch probability p* of a non-Lüders device.
  double min_disturbance = 0.5;
  /// Target false-acceptance probability delta.
  double confidence = 1e-3;
  Tolerances tolerances;
  std::uint64_t seed = 0;
};

using InitialState = std::variant<PureState, DensityMatrix>;

struct EnsembleMember {
  std::size_t system_id;
  PureState state;
};

/// Sampled mode carries individual systems; exact mode a single density
/// matrix describing the whole subensemble.
struct Ensemble {
  std::vector<EnsembleMember> systems;
  std::optional<DensityMatrix> state;
  std::string provenance;  // E1, E1i, E11', ...
};

/// Second-measurement statistics of one first-measurement branch.
struct BranchSupport {
  double first_label;
  double reach_probability;
  OutcomeDistribution second;
  bool point_mass;
};

struct StageResult {
  StageKind stage;
  bool consistent = true;
  std::vector<double> observed_first_labels;
  std::size_t mismatch_count = 0;
  std::size_t trials = 0;
  /// Exact: branch-weighted probability that the second reading differs.
  /// Sampled: mismatch_count / trials.
  double mismatch_probability = 0.0;
  std::vector<BranchSupport> branch_support;  // exact mode only
  /// Auxiliary labels on the target level never reached by the ensemble.
  std::vector<double> unprobed_labels;
};

struct StageOutput {
  StageResult result;
  /// Keyed by the auxiliary level index of the first reading.
  std::map<std::size_t, Ensemble> subensembles;
};

struct Classification {
  Verdict verdict = Verdict::kIndeterminate;
  Mode mode = Mode::kExact;
  std::optional<StageKind> detected_at;
  std::vector<StageResult> evidence;
  /// Sampled LUDERS verdicts: (1 - p*)^N with N the consistent sigma' trials.
  std::optional<double> false_acceptance_bound;
  std::vector<MeasurementRecord> transcript;
  std::optional<double> target_eigenvalue;
  std::size_t target_multiplicity = 0;
  std::optional<double> reference_label;
  std::size_t selected_systems = 0;
};

/// Appends records with increasing timestamps.
class Transcript {
 public:
  void record(std::size_t system_id, Stage stage, double label) {
    records_.push_back({system_id, stage, label, records_.size()});
  }
  const std::vector<MeasurementRecord>& records() const noexcept { return records_; }
  std::vector<MeasurementRecord> release() { return std::move(records_); }

 private:
  std::vector<MeasurementRecord> records_;
};

/// Selects E1: the systems for which the black box reports `target`.
/// Throws EmptySelectionError if none (or, exactly, zero probability) do.
Ensemble prepare_ensemble(const InitialState& initial, const MeasurementApparatus& app,
                          double target, const ProtocolConfig& config,
                          Transcript* transcript = nullptr);

/// One stage with auxiliary observable `aux`: measure aux, let the
/// black box measure A, measure aux again. `target_group` indexes `base`.
/// Throws InvalidArgument if aux does not commute with A and
/// RepeatabilityError if the black box reports anything but a_1.
StageOutput run_stage(const Ensemble& ensemble, const AuxiliaryObservable& aux,
                      const SpectralDecomposition& base, std::size_t target_group,
                      const MeasurementApparatus& app, StageKind stage,
                      const ProtocolConfig& config, Transcript* transcript = nullptr);

/// Full procedure: sigma stage on E1, then (if consistent) sigma' stage on
/// E11. Non-degenerate targets give INDETERMINATE.
Classification discriminate(const InitialState& initial, const MeasurementApparatus& app,
                            const ComplexMatrix& observable, const ProtocolConfig& config);

/// Smallest N with (1 - p*)^N <= delta.
std::size_t required_ensemble_size(double min_disturbance, double confidence);

}  // namespace qreduce
