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
#include <vector>

#include "qreduce/quantum.hpp"

namespace qreduce {

/// Non-degenerate observable commuting with the measured one, used to probe
/// how the black box acts inside a degenerate eigenspace.
struct AuxiliaryObservable {
  ComplexMatrix matrix;
  SpectralDecomposition decomposition;  // every level has multiplicity 1
};

/// sigma = sum_{k,alpha} (a_k S + n_k - 1 - alpha) |a_k^alpha><a_k^alpha|
/// on the eigenbasis of `base`. S = max_k n_k / (smallest level gap), so all
/// labels are distinct and the first basis vector of each level carries the
/// largest label of that level.
AuxiliaryObservable build_sigma(const SpectralDecomposition& base, double tol = kDefaultTol);

/// Levels of `sigma` lying inside level k of `base`, in sigma's order.
std::vector<std::size_t> sigma_levels_in(const SpectralDecomposition& base,
                                         const SpectralDecomposition& sigma, std::size_t k,
                                         double tol = kDefaultTol);

/// sigma' agrees with sigma outside level k. Inside it, with |s_0>..|s_{n-1}>
/// the sigma eigenvectors of level k listed from the reference one onwards
/// (cyclically), the eigenvectors are the discrete Fourier transform
///   |s'_j> = n^{-1/2} sum_m exp(2 pi i j m / n) |s_m>,
/// so |<s_m|s'_j>| = n^{-1/2} for every m, j. Eigenvalues on level k reuse
/// sigma's labels there. Throws InvalidArgument if n_k < 2 or the reference
/// index is out of range.
AuxiliaryObservable build_sigma_prime(const SpectralDecomposition& base,
                                      const SpectralDecomposition& sigma, std::size_t target_group,
                                      std::size_t reference_index, double tol = kDefaultTol);

}  // namespace qreduce
