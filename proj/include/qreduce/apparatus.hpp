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
#include <functional>
#include <string_view>
#include <vector>

#include "qreduce/quantum.hpp"
#include "qreduce/random.hpp"
#include "qreduce/refinement.hpp"

namespace qreduce {

/// Maps a refined label a'_{k beta} to the reported value a_k.
using OutputMap = std::function<double(double)>;

struct ApparatusReading {
  double label;
  PureState state;
};

struct ChannelBranch {
  double label;
  double probability;
  DensityMatrix state;  // normalized
};

/// A measuring device for an observable A whose reduction rule is hidden.
///
/// Internally it performs a Lüders measurement of a refinement A' and reports
/// f(a') = a_k. The refinement is fixed at construction and cannot be read
/// back: callers see only reported labels and post-measurement states.
class MeasurementApparatus {
 public:
  /// Reports the eigenvalue a_k of the level owning each cell.
  explicit MeasurementApparatus(Refinement refinement, double tol = kDefaultTol);
  /// Custom output map; throws InvalidArgument unless f(a'_{k beta}) equals
  /// a_k within grouping_threshold for every cell.
  MeasurementApparatus(Refinement refinement, const OutputMap& output_map,
                       double grouping_threshold = kDefaultGroupingThreshold,
                       double tol = kDefaultTol);

  std::size_t dim() const noexcept { return dim_; }
  /// Distinct values the device can report, descending.
  const std::vector<double>& labels() const noexcept { return labels_; }

  /// One system through the device. Cell (k, beta) is chosen with
  /// probability |P_k^beta psi|^2; the state collapses onto it.
  ApparatusReading measure_sampled(const PureState& state, Rng& rng) const;

  /// Selective channel: for each reported label with probability above tol,
  /// the normalized state sum_beta P_k^beta rho P_k^beta / p.
  std::vector<ChannelBranch> channel_exact(const DensityMatrix& rho) const;

 private:
  struct Branch {
    std::size_t level;
    ComplexMatrix projector;
  };

  std::size_t dim_;
  double tol_;
  std::vector<double> labels_;    // per level, descending
  std::vector<Branch> branches_;  // flattened (k, beta)
};

MeasurementApparatus make_luders(const SpectralDecomposition& base);
MeasurementApparatus make_full_von_neumann(const SpectralDecomposition& base,
                                           std::vector<std::vector<ComplexVector>> eigenbasis_choice,
                                           double tol = kDefaultTol);
MeasurementApparatus make_partial(const SpectralDecomposition& base,
                                  const std::vector<Partition>& blocks, double tol = kDefaultTol);

/// Stages at which a measurement of a single system is logged.
enum class Stage {
  kSelect,        // black box, selecting the subensemble with result a_1
  kSigma1,
  kApparatusA,
  kSigma2,
  kSigmaPrime1,
  kApparatusA2,
  kSigmaPrime2,
};

std::string_view stage_name(Stage stage);

struct MeasurementRecord {
  std::size_t system_id;
  Stage stage;
  double label;
  std::size_t timestamp_index;
};

}  // namespace qreduce
