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

#include "qreduce/auxiliary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qreduce/error.hpp"

namespace qreduce {
namespace {

AuxiliaryObservable assemble(std::vector<double> labels, std::vector<ComplexVector> vectors,
                             double tol) {
  std::vector<std::vector<ComplexVector>> levels;
  levels.reserve(vectors.size());
  ComplexMatrix matrix(vectors.front().dim());
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    matrix += labels[i] * ComplexMatrix::outer(vectors[i], vectors[i]);
    levels.push_back({std::move(vectors[i])});
  }
  return {std::move(matrix),
          SpectralDecomposition::from_levels(std::move(labels), std::move(levels), tol)};
}

}  // namespace

AuxiliaryObservable build_sigma(const SpectralDecomposition& base, double tol) {
  const std::size_t widest =
      *std::max_element(base.multiplicities.begin(), base.multiplicities.end());
  double min_gap = 0.0;
  for (std::size_t k = 1; k < base.group_count(); ++k) {
    const double gap = base.eigenvalues[k - 1] - base.eigenvalues[k];
    if (k == 1 || gap < min_gap) min_gap = gap;
  }
  const double spread = min_gap > 0.0 ? static_cast<double>(widest) / min_gap : 1.0;

  std::vector<double> labels;
  std::vector<ComplexVector> vectors;
  for (std::size_t k = 0; k < base.group_count(); ++k) {
    const std::size_t n = base.multiplicities[k];
    for (std::size_t alpha = 0; alpha < n; ++alpha) {
      labels.push_back(base.eigenvalues[k] * spread + static_cast<double>(n - 1 - alpha));
      vectors.push_back(base.eigenbasis[k][alpha]);
    }
  }
  return assemble(std::move(labels), std::move(vectors), tol);
}

std::vector<std::size_t> sigma_levels_in(const SpectralDecomposition& base,
                                         const SpectralDecomposition& sigma, std::size_t k,
                                         double tol) {
  if (k >= base.group_count()) throw InvalidArgument("level index out of range");
  return levels_within(sigma, base.projectors[k], tol);
}

AuxiliaryObservable build_sigma_prime(const SpectralDecomposition& base,
                                      const SpectralDecomposition& sigma, std::size_t target_group,
                                      std::size_t reference_index, double tol) {
  const auto inside = sigma_levels_in(base, sigma, target_group, tol);
  const std::size_t n = inside.size();
  if (n < 2) {
    throw InvalidArgument("sigma' needs a degenerate target level (n = " + std::to_string(n) +
                          ")");
  }
  if (reference_index >= n) throw InvalidArgument("reference index out of range");

  std::vector<double> labels;
  std::vector<ComplexVector> vectors;
  for (std::size_t j = 0; j < sigma.group_count(); ++j) {
    if (std::find(inside.begin(), inside.end(), j) != inside.end()) continue;
    labels.push_back(sigma.eigenvalues[j]);
    vectors.push_back(sigma.eigenbasis[j].front());
  }

  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t j = 0; j < n; ++j) {
    ComplexVector v(base.dim());
    for (std::size_t m = 0; m < n; ++m) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>((j * m) % n) /
                           static_cast<double>(n);
      const auto& s_m = sigma.eigenbasis[inside[(reference_index + m) % n]].front();
      v += Complex(norm * std::cos(angle), norm * std::sin(angle)) * s_m;
    }
    fix_phase(v, tol);
    labels.push_back(sigma.eigenvalues[inside[j]]);
    vectors.push_back(std::move(v));
  }
  return assemble(std::move(labels), std::move(vectors), tol);
}

}  // namespace qreduce
