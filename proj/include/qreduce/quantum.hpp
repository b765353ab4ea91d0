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
#include <vector>

#include "qreduce/linalg.hpp"
#include "qreduce/random.hpp"

namespace qreduce {

/// Eigenvalues closer than this are treated as one degenerate level.
inline constexpr double kDefaultGroupingThreshold = 1e-7;

struct Tolerances {
  double tol = kDefaultTol;
  double grouping = kDefaultGroupingThreshold;
};

class PureState {
 public:
  /// Throws InvalidArgument unless |v| = 1 within tol.
  explicit PureState(ComplexVector v, double tol = kDefaultTol);
  /// Normalizes; throws InvalidArgument for a (numerically) zero vector.
  static PureState from_amplitudes(const ComplexVector& amplitudes, double tol = kDefaultTol);

  const ComplexVector& vector() const noexcept { return vector_; }
  std::size_t dim() const noexcept { return vector_.dim(); }
  ComplexMatrix density() const { return ComplexMatrix::outer(vector_, vector_); }

 private:
  ComplexVector vector_;
};

/// Hermitian, positive semidefinite, unit trace.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m, double tol = kDefaultTol);
  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed(std::size_t dim);
  /// Normalizes a branch weight P rho P, which is positive semidefinite by
  /// construction; only Hermiticity is enforced (by symmetrizing).
  static DensityMatrix from_branch(const ComplexMatrix& weight);

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  std::size_t dim() const noexcept { return matrix_.dim(); }

 private:
  struct Trusted {};
  DensityMatrix(Trusted, ComplexMatrix m) : matrix_(std::move(m)) {}

  ComplexMatrix matrix_;
};

/// Branch weight matrix P rho P; its trace is the branch probability.
struct UnnormalizedDensity {
  ComplexMatrix matrix;
  double trace() const { return matrix.trace().real(); }
};

/// Grouped spectrum of a Hermitian observable: A = sum_k a_k P_k.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;                  // one per level, descending
  std::vector<ComplexMatrix> projectors;            // P_k
  std::vector<std::size_t> multiplicities;          // n_k
  std::vector<std::vector<ComplexVector>> eigenbasis;  // |a_k^alpha>, n_k per level

  std::size_t dim() const { return projectors.front().dim(); }
  std::size_t group_count() const noexcept { return eigenvalues.size(); }
  /// Level whose eigenvalue lies within threshold of value.
  std::optional<std::size_t> find_group(double value,
                                        double threshold = kDefaultGroupingThreshold) const;
  /// sum_k a_k P_k
  ComplexMatrix reassemble() const;

  /// Builds a decomposition from known orthonormal level bases. Levels are
  /// sorted by descending eigenvalue; throws InvalidArgument if the bases are
  /// not jointly orthonormal and complete or two eigenvalues coincide.
  static SpectralDecomposition from_levels(std::vector<double> eigenvalues,
                                           std::vector<std::vector<ComplexVector>> bases,
                                           double tol = kDefaultTol);
};

struct Outcome {
  double label;
  double probability;
};

struct OutcomeDistribution {
  std::vector<Outcome> outcomes;

  double total() const;
  /// Probabilities >= -tol and summing to 1 within tol.
  bool is_valid(double tol = kDefaultTol) const;
  double probability_of(double label, double threshold = kDefaultGroupingThreshold) const;
};

/// Eigenvalues at pairwise (chained) distance <= grouping_threshold share a
/// level whose eigenvalue is their mean.
SpectralDecomposition spectral_decompose(const ComplexMatrix& observable,
                                         double grouping_threshold = kDefaultGroupingThreshold,
                                         double tol = kDefaultTol);

/// p(a_k) = tr(P_k rho).
OutcomeDistribution born_distribution(const SpectralDecomposition& decomp,
                                      const DensityMatrix& rho);

struct LudersBranch {
  double probability;
  UnnormalizedDensity state;
};

/// (tr(P_k rho P_k), P_k rho P_k) for level k.
LudersBranch luders_update(const SpectralDecomposition& decomp, const DensityMatrix& rho,
                           std::size_t k);

/// Non-selective Lüders channel, sum_k P_k rho P_k.
ComplexMatrix luders_channel(const SpectralDecomposition& decomp, const ComplexMatrix& rho);

/// Index of an outcome drawn with its probability. Zero-probability
/// outcomes are never drawn. Throws InvalidArgument on an empty distribution.
struct SampledMeasurement {
  std::size_t level;
  PureState state;
};

/// One Lüders measurement of a known observable on a single system: level k
/// is drawn with probability |P_k psi|^2 (levels at or below tol are
/// unreachable) and the state collapses to P_k psi / |P_k psi|.
SampledMeasurement measure_luders(const SpectralDecomposition& decomp, const PureState& psi,
                                  Rng& rng, double tol = kDefaultTol);

std::size_t sample_index(const OutcomeDistribution& dist, Rng& rng);
double sample_outcome(const OutcomeDistribution& dist, Rng& rng);

/// Levels of aux whose projector lies inside the range of `subspace`
/// (|P v|^2 >= 1 - tol for every basis vector of the level).
std::vector<std::size_t> levels_within(const SpectralDecomposition& aux,
                                       const ComplexMatrix& subspace, double tol = kDefaultTol);

}  // namespace qreduce
