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

#include "qreduce/scenarios.hpp"

#include <cmath>
#include <sstream>

#include "qreduce/error.hpp"

namespace qreduce {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::size_t level_of(const SpectralDecomposition& base, double eigenvalue, double grouping) {
  const auto k = base.find_group(eigenvalue, grouping);
  if (!k) {
    std::ostringstream os;
    os << eigenvalue << " is not an eigenvalue of the observable";
    throw InvalidArgument(os.str());
  }
  return *k;
}

Refinement build_refinement(const ApparatusSpec& spec, const SpectralDecomposition& base,
                            const Tolerances& tols, OutputMap& output_map) {
  return std::visit(
      Overloaded{
          [&](const LudersSpec&) { return luders_refinement(base); },
          [&](const RefinedObservableSpec& s) {
            if (!s.output_polynomial.empty()) {
              output_map = [coeffs = s.output_polynomial](double x) {
                double y = 0.0;
                for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) y = y * x + *it;
                return y;
              };
            }
            return observable_refinement(base, build_observable(s.observable, tols.tol), tols);
          },
          [&](const FullVonNeumannSpec& s) {
            std::vector<std::vector<ComplexVector>> bases = base.eigenbasis;
            std::vector<bool> given(base.group_count(), false);
            for (const auto& lb : s.bases) {
              const std::size_t k = level_of(base, lb.eigenvalue, tols.grouping);
              if (given[k]) throw InvalidArgument("level listed twice in full von Neumann spec");
              given[k] = true;
              bases[k] = lb.vectors;
            }
            return basis_refinement(base, std::move(bases), tols.tol);
          },
          [&](const PartialSpec& s) {
            std::vector<Partition> blocks;
            for (std::size_t k = 0; k < base.group_count(); ++k) {
              Partition whole(1);
              for (std::size_t i = 0; i < base.multiplicities[k]; ++i) whole.front().push_back(i);
              blocks.push_back(std::move(whole));
            }
            std::vector<bool> given(base.group_count(), false);
            for (const auto& lp : s.blocks) {
              const std::size_t k = level_of(base, lp.eigenvalue, tols.grouping);
              if (given[k]) throw InvalidArgument("level listed twice in partial spec");
              given[k] = true;
              blocks[k] = lp.cells;
            }
            return partition_refinement(base, blocks, tols.tol);
          },
          [&](const ConsecutiveSpec& s) {
            std::vector<ComplexMatrix> observables;
            for (const auto& o : s.observables) observables.push_back(build_observable(o, tols.tol));
            return consecutive_refinement(base, observables, tols);
          },
      },
      spec);
}

PureState build_initial(const InitialStateSpec& spec, const SpectralDecomposition& base,
                        std::optional<std::size_t> target, std::size_t dim) {
  return std::visit(
      Overloaded{
          [&](const DefaultStateSpec&) {
            ComplexVector psi(dim);
            if (!target) {
              for (const auto& level : base.eigenbasis) {
                for (const auto& v : level) psi += v;
              }
            } else {
              for (const auto& v : base.eigenbasis[*target]) psi += v;
              for (std::size_t k = 0; k < base.group_count(); ++k) {
                if (k != *target) {
                  psi += base.eigenbasis[k].front();
                  break;
                }
              }
            }
            return PureState::from_amplitudes(psi);
          },
          [&](const ProductStateSpec& s) {
            ComplexVector psi = spin_product_state(s.signs);
            if (psi.dim() != dim) throw DimensionError("product state has the wrong number of sites");
            return PureState(std::move(psi));
          },
          [&](const AmplitudeStateSpec& s) {
            if (s.amplitudes.dim() != dim) throw DimensionError("amplitude list has the wrong length");
            return PureState::from_amplitudes(s.amplitudes);
          },
      },
      spec);
}

}  // namespace

ComplexMatrix build_observable(const ObservableSource& source, double tol) {
  return std::visit(Overloaded{
                        [&](const SpinExpression& e) { return build_spin_operator(e, tol); },
                        [&](const ComplexMatrix& m) {
                          if (!m.is_hermitian(tol)) {
                            throw NotHermitianError("observable not Hermitian");
                          }
                          return m;
                        },
                    },
                    source);
}

std::optional<std::size_t> resolve_target(const SpectralDecomposition& base,
                                          std::optional<double> target, double grouping) {
  if (target) return level_of(base, *target, grouping);
  for (std::size_t k = 0; k < base.group_count(); ++k) {
    if (base.multiplicities[k] >= 2) return k;
  }
  return std::nullopt;
}

Refinement consecutive_refinement(const SpectralDecomposition& base,
                                  const std::vector<ComplexMatrix>& observables,
                                  const Tolerances& tols) {
  if (observables.empty()) throw InvalidArgument("consecutive measurement needs an observable");
  for (std::size_t i = 0; i < observables.size(); ++i) {
    if (observables[i].dim() != base.dim()) throw DimensionError("consecutive observable dimension");
    for (std::size_t j = 0; j < i; ++j) {
      if (commutator(observables[i], observables[j]).norm_max() > 10.0 * tols.tol) {
        throw InvalidArgument("observables " + std::to_string(j + 1) + " and " +
                              std::to_string(i + 1) + " do not commute");
      }
    }
  }

  // Intersect the eigenspaces one observable at a time.
  std::vector<ComplexMatrix> joint{ComplexMatrix::identity(base.dim())};
  for (const auto& o : observables) {
    const SpectralDecomposition dec = spectral_decompose(o, tols.grouping, tols.tol);
    std::vector<ComplexMatrix> next;
    for (const auto& cell : joint) {
      for (const auto& p : dec.projectors) {
        ComplexMatrix product = matmul(cell, p);
        if (product.trace().real() > 0.5) next.push_back(std::move(product));
      }
    }
    joint = std::move(next);
  }

  std::vector<std::vector<std::vector<ComplexVector>>> cells(base.group_count());
  for (const auto& cell : joint) {
    const std::size_t rank = projector_rank(cell);
    std::optional<std::size_t> owner;
    for (std::size_t k = 0; k < base.group_count(); ++k) {
      if (std::abs(matmul(base.projectors[k], cell).trace().real() - static_cast<double>(rank)) <=
          10.0 * tols.tol) {
        owner = k;
        break;
      }
    }
    if (!owner) {
      throw InvalidArgument(
          "a joint eigenspace of the consecutive observables straddles eigenvalues of the "
          "measured observable");
    }
    const HermitianEigen eig = hermitian_eig(cell, tols.tol);
    cells[*owner].emplace_back(eig.eigenvectors.begin(),
                               eig.eigenvectors.begin() + static_cast<std::ptrdiff_t>(rank));
  }
  return Refinement::from_cells(base, std::move(cells), {}, tols.tol);
}

MeasurementApparatus build_consecutive(const SpectralDecomposition& base,
                                       const std::vector<ComplexMatrix>& observables,
                                       const Tolerances& tols) {
  return MeasurementApparatus(consecutive_refinement(base, observables, tols), tols.tol);
}

BuiltScenario build_scenario(const Scenario& scenario) {
  const Tolerances& tols = scenario.protocol.tolerances;
  ComplexMatrix observable = build_observable(scenario.observable, tols.tol);
  if (observable.dim() != (std::size_t{1} << scenario.sites)) {
    throw DimensionError("observable dimension does not match the number of sites");
  }
  SpectralDecomposition base = spectral_decompose(observable, tols.grouping, tols.tol);
  const auto target = resolve_target(base, scenario.protocol.target_eigenvalue, tols.grouping);

  OutputMap output_map;
  Refinement refinement = build_refinement(scenario.apparatus, base, tols, output_map);
  MeasurementApparatus apparatus =
      output_map ? MeasurementApparatus(refinement, output_map, tols.grouping, tols.tol)
                 : MeasurementApparatus(refinement, tols.tol);
  PureState initial = build_initial(scenario.initial_state, base, target, observable.dim());

  return BuiltScenario{std::move(observable), std::move(base),      std::move(refinement),
                       std::move(apparatus),  std::move(initial), target};
}

std::vector<Scenario> builtin_scenarios() {
  std::vector<Scenario> out;

  Scenario s1;
  s1.name = "s1-luders-2spin";
  s1.description = "two spins, sigma_tot,z measured by the Lüders rule";
  s1.sites = 2;
  s1.observable = SpinExpression::parse("Z1 + Z2", 2);
  s1.apparatus = LudersSpec{};
  s1.expected_verdict = Verdict::kLuders;
  out.push_back(s1);

  Scenario s2 = s1;
  s2.name = "s2-vn-total-spin";
  s2.description =
      "two spins, von Neumann via A' = sigma_tot,z + TOTAL_SPIN_SQ (labels 6,4,2,0) and "
      "f(x) = -8x/3 + x^2 - x^3/12";
  s2.apparatus = RefinedObservableSpec{SpinExpression::parse("Z1 + Z2 + TOTAL_SPIN_SQ", 2),
                                       {0.0, -8.0 / 3.0, 1.0, -1.0 / 12.0}};
  s2.initial_state = AmplitudeStateSpec{ComplexVector{0.0, 1.0, 1.0, 0.0}};
  s2.expected_verdict = Verdict::kNonLuders;
  s2.expected_stage = StageKind::kSigma;
  out.push_back(s2);

  Scenario s3 = s1;
  s3.name = "s3-consecutive";
  s3.description = "two spins, Lüders sigma_1z then sigma_2z (von Neumann diagonal in sigma)";
  s3.apparatus = ConsecutiveSpec{{SpinExpression::parse("Z1", 2), SpinExpression::parse("Z2", 2)}};
  s3.expected_verdict = Verdict::kNonLuders;
  s3.expected_stage = StageKind::kSigmaPrime;
  out.push_back(s3);

  Scenario s4;
  s4.name = "s4-partial-3spin";
  s4.description = "three spins, A = sigma_1z + sigma_2z, consecutive sigma_1z, sigma_2z (partial von Neumann)";
  s4.sites = 3;
  s4.observable = SpinExpression::parse("Z1 + Z2", 3);
  s4.apparatus = ConsecutiveSpec{{SpinExpression::parse("Z1", 3), SpinExpression::parse("Z2", 3)}};
  s4.protocol.target_eigenvalue = 0.0;
  s4.expected_verdict = Verdict::kNonLuders;
  s4.expected_stage = StageKind::kSigmaPrime;
  out.push_back(s4);

  Scenario s5;
  s5.name = "s5-nondegenerate";
  s5.description = "two spins, non-degenerate 2 sigma_1z + sigma_2z; both rules coincide";
  s5.sites = 2;
  s5.observable = SpinExpression::parse("2*Z1 + Z2", 2);
  s5.apparatus = LudersSpec{};
  s5.expected_verdict = Verdict::kIndeterminate;
  out.push_back(s5);

  return out;
}

std::optional<Scenario> find_builtin(const std::string& name) {
  for (auto& s : builtin_scenarios()) {
    if (s.name == name) return s;
  }
  return std::nullopt;
}

}  // namespace qreduce
