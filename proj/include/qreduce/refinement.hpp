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

#include "qreduce/quantum.hpp"

namespace qreduce {

/// Cells of one degenerate level: each cell lists indices into that level's
/// basis, e.g. {{0, 1}, {2}}.
using Partition = std::vector<std::vector<std::size_t>>;

/// A refinement A' = sum_{k,beta} a'_{k beta} P_k^beta of an observable
/// A = sum_k a_k P_k: each P_k splits into mutually orthogonal sub-projectors
/// P_k^beta with sum_beta P_k^beta = P_k. Measuring A' by the Lüders rule and
/// reporting a_k is a (possibly partial) von Neumann measurement of A.
class Refinement {
 public:
  struct Cell {
    std::vector<ComplexVector> basis;
    ComplexMatrix projector;
    double label;  // a'_{k beta}
  };

  /// cells[k][beta] is an orthonormal basis of P_k^beta. Labels default to
  /// distinct values derived from the level structure. Throws
  /// InvalidArgument if a cell leaves its level, cells overlap, the cells of
  /// a level do not exhaust it, or two labels coincide.
  static Refinement from_cells(SpectralDecomposition base,
                               std::vector<std::vector<std::vector<ComplexVector>>> cells,
                               std::optional<std::vector<std::vector<double>>> labels = {},
                               double tol = kDefaultTol);

  const SpectralDecomposition& base() const noexcept { return base_; }
  std::size_t group_count() const noexcept { return cells_.size(); }
  const std::vector<Cell>& cells(std::size_t k) const { return cells_.at(k); }
  std::size_t block_count(std::size_t k) const { return cells_.at(k).size(); }

  /// m_k = 1 for every level.
  bool is_luders() const;
  /// Every sub-projector has rank 1.
  bool is_full_von_neumann() const;
  /// sum_{k,beta} a'_{k beta} P_k^beta
  ComplexMatrix observable() const;

 private:
  Refinement(SpectralDecomposition base, std::vector<std::vector<Cell>> cells)
      : base_(std::move(base)), cells_(std::move(cells)) {}

  SpectralDecomposition base_;
  std::vector<std::vector<Cell>> cells_;
};

/// One cell per level.
Refinement luders_refinement(const SpectralDecomposition& base);

/// Cells are groups of the base eigenbasis vectors. `per_level` holds one
/// partition per level; throws InvalidArgument on overlapping, empty, out of
/// range or missing indices.
Refinement partition_refinement(const SpectralDecomposition& base,
                                const std::vector<Partition>& per_level,
                                double tol = kDefaultTol);

/// Full von Neumann refinement along the given per-level orthonormal bases.
Refinement basis_refinement(const SpectralDecomposition& base,
                            std::vector<std::vector<ComplexVector>> per_level_basis,
                            double tol = kDefaultTol);

/// Refinement induced by an observable commuting with the base observable:
/// its eigenspaces become the cells and its eigenvalues the labels. Throws
/// InvalidArgument if it does not commute or an eigenspace straddles levels.
Refinement observable_refinement(const SpectralDecomposition& base, const ComplexMatrix& refined,
                                 const Tolerances& tols = {});

/// Validates a partition of {0..n-1}.
void require_partition(const Partition& partition, std::size_t n);

}  // namespace qreduce
