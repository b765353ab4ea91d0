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

#include "qreduce/refinement.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qreduce/error.hpp"

namespace qreduce {
namespace {

// a_k * S + j with S large enough that label ranges of different levels
// cannot overlap.
double spread_constant(const std::vector<double>& eigenvalues, std::size_t widest) {
  double min_gap = 0.0;
  for (std::size_t k = 1; k < eigenvalues.size(); ++k) {
    const double gap = std::abs(eigenvalues[k - 1] - eigenvalues[k]);
    if (k == 1 || gap < min_gap) min_gap = gap;
  }
  return min_gap > 0.0 ? static_cast<double>(widest) / min_gap : 1.0;
}

}  // namespace

Refinement Refinement::from_cells(SpectralDecomposition base,
                                  std::vector<std::vector<std::vector<ComplexVector>>> cells,
                                  std::optional<std::vector<std::vector<double>>> labels,
                                  double tol) {
  if (cells.size() != base.group_count()) {
    throw InvalidArgument("refinement needs cells for each of the " +
                          std::to_string(base.group_count()) + " levels");
  }
  std::size_t widest = 1;
  for (const auto& level : cells) widest = std::max(widest, level.size());
  const double spread = spread_constant(base.eigenvalues, widest);

  std::vector<std::vector<Cell>> out(cells.size());
  std::vector<double> all_labels;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const auto& p = base.projectors[k];
    std::vector<ComplexVector> level_vectors;
    for (std::size_t b = 0; b < cells[k].size(); ++b) {
      if (cells[k][b].empty()) {
        throw InvalidArgument("level " + std::to_string(k) + ": cell " + std::to_string(b) +
                              " is empty");
      }
      for (const auto& v : cells[k][b]) {
        if (v.dim() != base.dim()) throw DimensionError("refinement cell vector dimension");
        if (p.expectation(v).real() < 1.0 - tol) {
          throw InvalidArgument("level " + std::to_string(k) + ": cell " + std::to_string(b) +
                                " leaves the eigenspace");
        }
        level_vectors.push_back(v);
      }
    }
    require_orthonormal(level_vectors, tol);
    if (level_vectors.size() != base.multiplicities[k]) {
      throw InvalidArgument("level " + std::to_string(k) + ": cells span " +
                            std::to_string(level_vectors.size()) + " of " +
                            std::to_string(base.multiplicities[k]) + " dimensions");
    }

    const std::size_t m = cells[k].size();
    if (labels && (labels->size() != cells.size() || (*labels)[k].size() != m)) {
      throw InvalidArgument("refinement labels do not match the cell structure");
    }
    for (std::size_t b = 0; b < m; ++b) {
      const double label = labels ? (*labels)[k][b]
                                  : base.eigenvalues[k] * spread + static_cast<double>(m - 1 - b);
      ComplexMatrix proj = projector_from_vectors(cells[k][b], tol);
      out[k].push_back(Cell{std::move(cells[k][b]), std::move(proj), label});
      all_labels.push_back(label);
    }
  }

  std::sort(all_labels.begin(), all_labels.end());
  if (std::adjacent_find(all_labels.begin(), all_labels.end()) != all_labels.end()) {
    throw InvalidArgument("refinement labels must be pairwise distinct");
  }
  return Refinement(std::move(base), std::move(out));
}

bool Refinement::is_luders() const {
  return std::all_of(cells_.begin(), cells_.end(), [](const auto& c) { return c.size() == 1; });
}

bool Refinement::is_full_von_neumann() const {
  for (const auto& level : cells_) {
    for (const auto& cell : level) {
      if (cell.basis.size() != 1) return false;
    }
  }
  return true;
}

ComplexMatrix Refinement::observable() const {
  ComplexMatrix out(base_.dim());
  for (const auto& level : cells_) {
    for (const auto& cell : level) out += cell.label * cell.projector;
  }
  return out;
}

// ---------------------------------------------------------------------------

void require_partition(const Partition& partition, std::size_t n) {
  std::vector<bool> seen(n, false);
  for (std::size_t b = 0; b < partition.size(); ++b) {
    if (partition[b].empty()) throw InvalidArgument("block " + std::to_string(b) + " is empty");
    for (std::size_t idx : partition[b]) {
      if (idx >= n) {
        throw InvalidArgument("block " + std::to_string(b) + ": index " + std::to_string(idx) +
                              " out of range (level has " + std::to_string(n) + " vectors)");
      }
      if (seen[idx]) {
        throw InvalidArgument("index " + std::to_string(idx) + " appears in more than one block");
      }
      seen[idx] = true;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!seen[i]) throw InvalidArgument("index " + std::to_string(i) + " is not in any block");
  }
}

Refinement luders_refinement(const SpectralDecomposition& base) {
  std::vector<std::vector<std::vector<ComplexVector>>> cells;
  for (const auto& basis : base.eigenbasis) cells.push_back({basis});
  return Refinement::from_cells(base, std::move(cells));
}

Refinement partition_refinement(const SpectralDecomposition& base,
                                const std::vector<Partition>& per_level, double tol) {
  if (per_level.size() != base.group_count()) {
    throw InvalidArgument("partition must cover each of the " +
                          std::to_string(base.group_count()) + " levels");
  }
  std::vector<std::vector<std::vector<ComplexVector>>> cells(base.group_count());
  for (std::size_t k = 0; k < base.group_count(); ++k) {
    try {
      require_partition(per_level[k], base.multiplicities[k]);
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("level " + std::to_string(k) + ": " + e.what());
    }
    for (const auto& block : per_level[k]) {
      auto& cell = cells[k].emplace_back();
      for (std::size_t idx : block) cell.push_back(base.eigenbasis[k][idx]);
    }
  }
  return Refinement::from_cells(base, std::move(cells), {}, tol);
}

Refinement basis_refinement(const SpectralDecomposition& base,
                            std::vector<std::vector<ComplexVector>> per_level_basis, double tol) {
  if (per_level_basis.size() != base.group_count()) {
    throw InvalidArgument("need one basis per level");
  }
  std::vector<std::vector<std::vector<ComplexVector>>> cells(base.group_count());
  for (std::size_t k = 0; k < base.group_count(); ++k) {
    for (auto& v : per_level_basis[k]) cells[k].push_back({std::move(v)});
  }
  return Refinement::from_cells(base, std::move(cells), {}, tol);
}

Refinement observable_refinement(const SpectralDecomposition& base, const ComplexMatrix& refined,
                                 const Tolerances& tols) {
  if (refined.dim() != base.dim()) throw DimensionError("refined observable dimension");
  if (commutator(base.reassemble(), refined).norm_max() > tols.tol * 10.0) {
    throw InvalidArgument("refined observable does not commute with the measured observable");
  }
  const SpectralDecomposition fine = spectral_decompose(refined, tols.grouping, tols.tol);

  std::vector<std::vector<std::vector<ComplexVector>>> cells(base.group_count());
  std::vector<std::vector<double>> labels(base.group_count());
  for (std::size_t j = 0; j < fine.group_count(); ++j) {
    std::optional<std::size_t> owner;
    for (std::size_t k = 0; k < base.group_count() && !owner; ++k) {
      const auto inside = levels_within(fine, base.projectors[k], tols.tol);
      if (std::find(inside.begin(), inside.end(), j) != inside.end()) owner = k;
    }
    if (!owner) {
      throw InvalidArgument("eigenspace of refined eigenvalue " +
                            std::to_string(fine.eigenvalues[j]) +
                            " is not contained in a single eigenspace");
    }
    cells[*owner].push_back(fine.eigenbasis[j]);
    labels[*owner].push_back(fine.eigenvalues[j]);
  }
  return Refinement::from_cells(base, std::move(cells), std::move(labels), tols.tol);
}

}  // namespace qreduce
