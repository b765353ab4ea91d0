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

#include "qreduce/apparatus.hpp"

#include <cmath>
#include <string>

#include "qreduce/error.hpp"

namespace qreduce {

MeasurementApparatus::MeasurementApparatus(Refinement refinement, double tol)
    : dim_(refinement.base().dim()), tol_(tol), labels_(refinement.base().eigenvalues) {
  for (std::size_t k = 0; k < refinement.group_count(); ++k) {
    for (const auto& cell : refinement.cells(k)) branches_.push_back({k, cell.projector});
  }
}

MeasurementApparatus::MeasurementApparatus(Refinement refinement, const OutputMap& output_map,
                                           double grouping_threshold, double tol)
    : MeasurementApparatus(refinement, tol) {
  for (std::size_t k = 0; k < refinement.group_count(); ++k) {
    for (const auto& cell : refinement.cells(k)) {
      const double reported = output_map(cell.label);
      if (std::abs(reported - labels_[k]) > grouping_threshold) {
        throw InvalidArgument("output map sends refined label " + std::to_string(cell.label) +
                              " to " + std::to_string(reported) + ", expected " +
                              std::to_string(labels_[k]));
      }
    }
  }
}

ApparatusReading MeasurementApparatus::measure_sampled(const PureState& state, Rng& rng) const {
  if (state.dim() != dim_) throw DimensionError("measure_sampled: dimension mismatch");
  OutcomeDistribution dist;
  std::vector<ComplexVector> projected;
  projected.reserve(branches_.size());
  bool reachable = false;
  for (const auto& b : branches_) {
    ComplexVector v = b.projector.apply(state.vector());
    const double p = v.norm() * v.norm();
    reachable = reachable || p > tol_;
    dist.outcomes.push_back({labels_[b.level], p > tol_ ? p : 0.0});
    projected.push_back(std::move(v));
  }
  if (!reachable) throw InvalidArgument("measure_sampled: state is orthogonal to every branch");
  const std::size_t i = sample_index(dist, rng);
  return {labels_[branches_[i].level], PureState::from_amplitudes(projected[i], 0.0)};
}

std::vector<ChannelBranch> MeasurementApparatus::channel_exact(const DensityMatrix& rho) const {
  if (rho.dim() != dim_) throw DimensionError("channel_exact: dimension mismatch");
  std::vector<ComplexMatrix> weights(labels_.size(), ComplexMatrix(dim_));
  for (const auto& b : branches_) {
    weights[b.level] += matmul(b.projector, matmul(rho.matrix(), b.projector));
  }
  std::vector<ChannelBranch> out;
  for (std::size_t k = 0; k < labels_.size(); ++k) {
    const double p = weights[k].trace().real();
    if (p > tol_) out.push_back({labels_[k], p, DensityMatrix::from_branch(weights[k])});
  }
  return out;
}

MeasurementApparatus make_luders(const SpectralDecomposition& base) {
  return MeasurementApparatus(luders_refinement(base));
}

MeasurementApparatus make_full_von_neumann(const SpectralDecomposition& base,
                                           std::vector<std::vector<ComplexVector>> eigenbasis_choice,
                                           double tol) {
  return MeasurementApparatus(basis_refinement(base, std::move(eigenbasis_choice), tol), tol);
}

MeasurementApparatus make_partial(const SpectralDecomposition& base,
                                  const std::vector<Partition>& blocks, double tol) {
  return MeasurementApparatus(partition_refinement(base, blocks, tol), tol);
}

std::string_view stage_name(Stage stage) {
  switch (stage) {
    case Stage::kSelect: return "SELECT_A";
    case Stage::kSigma1: return "SIGMA_1";
    case Stage::kApparatusA: return "APPARATUS_A";
    case Stage::kSigma2: return "SIGMA_2";
    case Stage::kSigmaPrime1: return "SIGMA_PRIME_1";
    case Stage::kApparatusA2: return "APPARATUS_A_2";
    case Stage::kSigmaPrime2: return "SIGMA_PRIME_2";
  }
  return "UNKNOWN";
}

}  // namespace qreduce
