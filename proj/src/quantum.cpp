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

#include "qreduce/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qreduce/error.hpp"

namespace qreduce {

PureState::PureState(ComplexVector v, double tol) : vector_(std::move(v)) {
  if (!vector_.is_unit(tol)) {
    throw InvalidArgument("pure state must have unit norm (got " + std::to_string(vector_.norm()) +
                          ")");
  }
}

PureState PureState::from_amplitudes(const ComplexVector& amplitudes, double tol) {
  return PureState(amplitudes.normalized(tol));
}

DensityMatrix::DensityMatrix(ComplexMatrix m, double tol) : matrix_(std::move(m)) {
  if (!matrix_.is_hermitian(tol)) throw NotHermitianError("density matrix is not Hermitian");
  const double tr = matrix_.trace().real();
  if (std::abs(tr - 1.0) > tol) {
    throw InvalidArgument("density matrix trace " + std::to_string(tr) + " != 1");
  }
  const auto eig = hermitian_eig(matrix_, tol);
  if (eig.eigenvalues.back() < -tol) {
    throw InvalidArgument("density matrix has negative eigenvalue " +
                          std::to_string(eig.eigenvalues.back()));
  }
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) { return DensityMatrix(psi.density()); }

DensityMatrix DensityMatrix::from_branch(const ComplexMatrix& weight) {
  const double tr = weight.trace().real();
  if (!(tr > 0.0)) throw InvalidArgument("branch weight has non-positive trace");
  return DensityMatrix(Trusted{}, (0.5 / tr) * (weight + adjoint(weight)));
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  return DensityMatrix((1.0 / static_cast<double>(dim)) * ComplexMatrix::identity(dim));
}

// ---------------------------------------------------------------------------

std::optional<std::size_t> SpectralDecomposition::find_group(double value,
                                                              double threshold) const {
  std::optional<std::size_t> best;
  double best_dist = threshold;
  for (std::size_t k = 0; k < eigenvalues.size(); ++k) {
    const double d = std::abs(eigenvalues[k] - value);
    if (d <= best_dist) {
      best = k;
      best_dist = d;
    }
  }
  return best;
}

ComplexMatrix SpectralDecomposition::reassemble() const {
  ComplexMatrix out(dim());
  for (std::size_t k = 0; k < eigenvalues.size(); ++k) out += eigenvalues[k] * projectors[k];
  return out;
}

SpectralDecomposition SpectralDecomposition::from_levels(
    std::vector<double> eigenvalues, std::vector<std::vector<ComplexVector>> bases, double tol) {
  if (eigenvalues.size() != bases.size() || eigenvalues.empty()) {
    throw InvalidArgument("from_levels: need one nonempty basis per eigenvalue");
  }
  std::vector<ComplexVector> all;
  for (const auto& b : bases) {
    if (b.empty()) throw InvalidArgument("from_levels: empty level basis");
    all.insert(all.end(), b.begin(), b.end());
  }
  require_orthonormal(all, tol);
  if (all.size() != all.front().dim()) {
    throw InvalidArgument("from_levels: level bases do not span the space");
  }

  std::vector<std::size_t> order(eigenvalues.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return eigenvalues[a] > eigenvalues[b]; });

  SpectralDecomposition out;
  for (std::size_t idx : order) {
    if (!out.eigenvalues.empty() && out.eigenvalues.back() == eigenvalues[idx]) {
      throw InvalidArgument("from_levels: repeated eigenvalue " + std::to_string(eigenvalues[idx]));
    }
    out.eigenvalues.push_back(eigenvalues[idx]);
    out.projectors.push_back(projector_from_vectors(bases[idx], tol));
    out.multiplicities.push_back(bases[idx].size());
    out.eigenbasis.push_back(std::move(bases[idx]));
  }
  return out;
}

// ---------------------------------------------------------------------------

double OutcomeDistribution::total() const {
  double sum = 0.0;
  for (const auto& o : outcomes) sum += o.probability;
  return sum;
}

bool OutcomeDistribution::is_valid(double tol) const {
  if (outcomes.empty()) return false;
  for (const auto& o : outcomes) {
    if (o.probability < -tol) return false;
  }
  return std::abs(total() - 1.0) <= tol;
}

double OutcomeDistribution::probability_of(double label, double threshold) const {
  double p = 0.0;
  for (const auto& o : outcomes) {
    if (std::abs(o.label - label) <= threshold) p += o.probability;
  }
  return p;
}

// ---------------------------------------------------------------------------

SpectralDecomposition spectral_decompose(const ComplexMatrix& observable,
                                         double grouping_threshold, double tol) {
  const HermitianEigen eig = hermitian_eig(observable, tol);

  SpectralDecomposition out;
  std::vector<double> members;
  auto flush = [&]() {
    const double mean =
        std::accumulate(members.begin(), members.end(), 0.0) / static_cast<double>(members.size());
    out.eigenvalues.push_back(mean);
    out.multiplicities.push_back(members.size());
    members.clear();
  };
  for (std::size_t i = 0; i < eig.eigenvalues.size(); ++i) {
    if (!members.empty() && members.back() - eig.eigenvalues[i] > grouping_threshold) flush();
    if (members.empty()) out.eigenbasis.emplace_back();
    members.push_back(eig.eigenvalues[i]);
    out.eigenbasis.back().push_back(eig.eigenvectors[i]);
  }
  flush();

  for (const auto& basis : out.eigenbasis) {
    ComplexMatrix p(observable.dim());
    for (const auto& v : basis) p += ComplexMatrix::outer(v, v);
    out.projectors.push_back(std::move(p));
  }
  return out;
}

OutcomeDistribution born_distribution(const SpectralDecomposition& decomp,
                                      const DensityMatrix& rho) {
  if (decomp.dim() != rho.dim()) throw DimensionError("born_distribution: dimension mismatch");
  OutcomeDistribution dist;
  for (std::size_t k = 0; k < decomp.group_count(); ++k) {
    const double p = matmul(decomp.projectors[k], rho.matrix()).trace().real();
    dist.outcomes.push_back({decomp.eigenvalues[k], p});
  }
  return dist;
}

LudersBranch luders_update(const SpectralDecomposition& decomp, const DensityMatrix& rho,
                           std::size_t k) {
  if (k >= decomp.group_count()) {
    throw InvalidArgument("luders_update: level index " + std::to_string(k) + " out of range");
  }
  if (decomp.dim() != rho.dim()) throw DimensionError("luders_update: dimension mismatch");
  const auto& p = decomp.projectors[k];
  UnnormalizedDensity branch{matmul(p, matmul(rho.matrix(), p))};
  const double prob = branch.trace();
  return {prob, std::move(branch)};
}

ComplexMatrix luders_channel(const SpectralDecomposition& decomp, const ComplexMatrix& rho) {
  if (decomp.dim() != rho.dim()) throw DimensionError("luders_channel: dimension mismatch");
  ComplexMatrix out(rho.dim());
  for (const auto& p : decomp.projectors) out += matmul(p, matmul(rho, p));
  return out;
}

std::size_t sample_index(const OutcomeDistribution& dist, Rng& rng) {
  if (dist.outcomes.empty()) throw InvalidArgument("sample_outcome: empty distribution");
  double total = 0.0;
  std::optional<std::size_t> last_positive;
  for (std::size_t i = 0; i < dist.outcomes.size(); ++i) {
    if (dist.outcomes[i].probability > 0.0) {
      total += dist.outcomes[i].probability;
      last_positive = i;
    }
  }
  if (!last_positive) throw InvalidArgument("sample_outcome: no outcome has positive probability");

  const double u = rng.uniform() * total;
  double cumulative = 0.0;
  for (std::size_t i = 0; i < dist.outcomes.size(); ++i) {
    const double p = dist.outcomes[i].probability;
    if (p <= 0.0) continue;
    cumulative += p;
    if (u < cumulative) return i;
  }
  return *last_positive;
}

double sample_outcome(const OutcomeDistribution& dist, Rng& rng) {
  return dist.outcomes[sample_index(dist, rng)].label;
}

SampledMeasurement measure_luders(const SpectralDecomposition& decomp, const PureState& psi,
                                  Rng& rng, double tol) {
  if (decomp.dim() != psi.dim()) throw DimensionError("measure_luders: dimension mismatch");
  OutcomeDistribution dist;
  std::vector<ComplexVector> projected;
  for (std::size_t k = 0; k < decomp.group_count(); ++k) {
    ComplexVector v = decomp.projectors[k].apply(psi.vector());
    const double p = v.norm() * v.norm();
    dist.outcomes.push_back({decomp.eigenvalues[k], p > tol ? p : 0.0});
    projected.push_back(std::move(v));
  }
  const std::size_t k = sample_index(dist, rng);
  return {k, PureState::from_amplitudes(projected[k], 0.0)};
}

std::vector<std::size_t> levels_within(const SpectralDecomposition& aux,
                                       const ComplexMatrix& subspace, double tol) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < aux.group_count(); ++k) {
    const bool inside = std::all_of(aux.eigenbasis[k].begin(), aux.eigenbasis[k].end(),
                                    [&](const ComplexVector& v) {
                                      return subspace.expectation(v).real() >= 1.0 - tol;
                                    });
    if (inside) out.push_back(k);
  }
  return out;
}

}  // namespace qreduce
