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
#include <string>
#include <string_view>
#include <vector>

#include "qreduce/linalg.hpp"

namespace qreduce {

// Operators on a register of spin-1/2 sites. Site 1 is the leftmost tensor
// factor and |+> (sigma_z = +1) is basis index 0, so |+-> is index 1.

enum class SpinFactorKind { kIdentity, kX, kY, kZ, kTotalSpinSquared };

struct SpinFactor {
  SpinFactorKind kind;
  std::size_t site = 0;  // 0-based; unused for kIdentity and kTotalSpinSquared
};

/// coefficient * factors[0] * factors[1] * ... (an empty product is I).
struct SpinTerm {
  double coefficient = 1.0;
  std::vector<SpinFactor> factors;
};

/// Real-linear combination of Pauli monomials, e.g. "Z1 + Z2 + TOTAL_SPIN_SQ"
/// or "0.5*X1*X2 - 2 Z3". TOTAL_SPIN_SQ (alias S2) stands for
/// (sum_i sigma_i).(sum_i sigma_i) / 2, which is 4 on a two-spin triplet and
/// 0 on the singlet.
struct SpinExpression {
  std::size_t sites = 1;
  std::vector<SpinTerm> terms;

  /// Throws ParseError with the offending column.
  static SpinExpression parse(std::string_view text, std::size_t sites);
  std::string to_string() const;
};

/// Throws DimensionError beyond kMaxDim and NotHermitianError if a monomial
/// multiplies non-commuting Paulis on one site.
ComplexMatrix build_spin_operator(const SpinExpression& expr, double tol = kDefaultTol);
ComplexMatrix build_spin_operator(std::string_view text, std::size_t sites,
                                  double tol = kDefaultTol);

/// sigma^{a} acting on `site` (0-based) of an n-site register.
ComplexMatrix embed_pauli(const ComplexMatrix& pauli, std::size_t site, std::size_t sites);
/// (sum_i sigma_i)^2 / 2
ComplexMatrix total_spin_squared(std::size_t sites);

/// Product state from a string of '+'/'-' (one per site), e.g. "+-".
ComplexVector spin_product_state(std::string_view signs);

}  // namespace qreduce
