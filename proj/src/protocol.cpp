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

#include "qreduce/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "qreduce/error.hpp"

namespace qreduce {
namespace {

// Random stream ids; one stream per (phase, system).
constexpr std::uint64_t kSelectStream = 0;
constexpr std::uint64_t kSigmaStream = 1;
constexpr std::uint64_t kSigmaPrimeStream = 2;

struct StageLabels {
  Stage first;
  Stage apparatus;
  Stage second;
  std::uint64_t stream;
  const char* suffix;
};

StageLabels labels_for(StageKind stage) {
  if (stage == StageKind::kSigma) {
    return {Stage::kSigma1, Stage::kApparatusA, Stage::kSigma2, kSigmaStream, ""};
  }
  return {Stage::kSigmaPrime1, Stage::kApparatusA2, Stage::kSigmaPrime2, kSigmaPrimeStream, "'"};
}

DensityMatrix as_density(const InitialState& initial) {
  if (const auto* psi = std::get_if<PureState>(&initial)) return DensityMatrix::from_pure(*psi);
  return std::get<DensityMatrix>(initial);
}

std::string describe(double value) {
  std::ostringstream os;
  os << value;
  return os.str();
}

void record(Transcript* transcript, std::size_t id, Stage stage, double label) {
  if (transcript) transcript->record(id, stage, label);
}

void finish_labels(StageResult& result, const SpectralDecomposition& aux,
                   const std::vector<std::size_t>& inside, const std::vector<bool>& seen) {
  for (std::size_t i = 0; i < inside.size(); ++i) {
    const double label = aux.eigenvalues[inside[i]];
    (seen[i] ? result.observed_first_labels : result.unprobed_labels).push_back(label);
  }
}

StageOutput run_exact_stage(const Ensemble& ensemble, const AuxiliaryObservable& aux,
                            const std::vector<std::size_t>& inside, double target,
                            const MeasurementApparatus& app, StageKind stage,
                            const ProtocolConfig& config) {
  const auto& tols = config.tolerances;
  const auto& dec = aux.decomposition;
  const ComplexMatrix& rho = ensemble.state->matrix();

  StageOutput out;
  out.result.stage = stage;
  std::vector<bool> seen(inside.size(), false);
  double total_reach = 0.0;
  double weighted_mismatch = 0.0;

  for (std::size_t i = 0; i < inside.size(); ++i) {
    const std::size_t level = inside[i];
    const ComplexVector& s = dec.eigenbasis[level].front();
    const double reach = rho.expectation(s).real();
    if (reach <= tols.tol) continue;
    seen[i] = true;

    const auto branches = app.channel_exact(DensityMatrix::from_pure(PureState(s)));
    const auto it = std::find_if(branches.begin(), branches.end(), [&](const ChannelBranch& b) {
      return std::abs(b.label - target) <= tols.grouping;
    });
    if (it == branches.end() || it->probability < 1.0 - tols.tol) {
      throw RepeatabilityError("black box did not reproduce eigenvalue " + describe(target) +
                               " on an eigenvector of that eigenvalue");
    }

    OutcomeDistribution second = born_distribution(dec, it->state);
    const double same = second.outcomes[level].probability;
    const bool point_mass = same >= 1.0 - tols.tol;

    total_reach += reach;
    weighted_mismatch += reach * std::max(0.0, 1.0 - same);
    ++out.result.trials;
    if (!point_mass) ++out.result.mismatch_count;
    out.result.branch_support.push_back({dec.eigenvalues[level], reach, std::move(second), point_mass});

    Ensemble sub;
    sub.state = DensityMatrix::from_branch(luders_channel(dec, it->state.matrix()));
    sub.provenance = ensemble.provenance + std::to_string(i + 1) + labels_for(stage).suffix;
    out.subensembles.emplace(level, std::move(sub));
  }
  if (out.result.trials == 0) {
    throw EmptySelectionError("subensemble " + ensemble.provenance +
                              " has no weight on the auxiliary eigenvectors of the target level");
  }
  // Renormalize over the probed branches.
  for (auto& b : out.result.branch_support) b.reach_probability /= total_reach;
  out.result.mismatch_probability = weighted_mismatch / total_reach;
  out.result.consistent = out.result.mismatch_count == 0;
  finish_labels(out.result, dec, inside, seen);
  return out;
}

StageOutput run_sampled_stage(const Ensemble& ensemble, const AuxiliaryObservable& aux,
                              const std::vector<std::size_t>& inside, double target,
                              const MeasurementApparatus& app, StageKind stage,
                              const ProtocolConfig& config, Transcript* transcript) {
  const auto& tols = config.tolerances;
  const auto& dec = aux.decomposition;
  const StageLabels tags = labels_for(stage);

  StageOutput out;
  out.result.stage = stage;
  std::vector<bool> seen(inside.size(), false);

  for (const auto& member : ensemble.systems) {
    Rng rng = Rng::derive(config.seed, {tags.stream, member.system_id});
    const SampledMeasurement first = measure_luders(dec, member.state, rng, tols.tol);
    record(transcript, member.system_id, tags.first, dec.eigenvalues[first.level]);

    const ApparatusReading reading = app.measure_sampled(first.state, rng);
    record(transcript, member.system_id, tags.apparatus, reading.label);
    if (std::abs(reading.label - target) > tols.grouping) {
      throw RepeatabilityError("system " + std::to_string(member.system_id) + ": black box reported " +
                               describe(reading.label) + " after previously reporting " +
                               describe(target));
    }

    const SampledMeasurement second = measure_luders(dec, reading.state, rng, tols.tol);
    record(transcript, member.system_id, tags.second, dec.eigenvalues[second.level]);

    ++out.result.trials;
    if (second.level != first.level) ++out.result.mismatch_count;

    const auto pos = std::find(inside.begin(), inside.end(), first.level);
    if (pos != inside.end()) seen[static_cast<std::size_t>(pos - inside.begin())] = true;

    auto [sub, inserted] = out.subensembles.try_emplace(first.level);
    if (inserted) {
      const std::size_t ordinal =
          pos != inside.end() ? static_cast<std::size_t>(pos - inside.begin()) + 1 : 0;
      sub->second.provenance = ensemble.provenance + std::to_string(ordinal) + tags.suffix;
    }
    sub->second.systems.push_back({member.system_id, second.state});
  }
  if (out.result.trials > 0) {
    out.result.mismatch_probability =
        static_cast<double>(out.result.mismatch_count) / static_cast<double>(out.result.trials);
  }
  out.result.consistent = out.result.mismatch_count == 0;
  finish_labels(out.result, dec, inside, seen);
  return out;
}

}  // namespace

std::string_view mode_name(Mode mode) { return mode == Mode::kExact ? "EXACT" : "SAMPLED"; }

std::string_view verdict_name(Verdict verdict) {
  switch (verdict) {
    case Verdict::kLuders: return "LUDERS";
    case Verdict::kNonLuders: return "NON_LUDERS";
    case Verdict::kIndeterminate: return "INDETERMINATE";
  }
  return "UNKNOWN";
}

std::string_view stage_kind_name(StageKind stage) {
  return stage == StageKind::kSigma ? "SIGMA" : "SIGMA_PRIME";
}

Ensemble prepare_ensemble(const InitialState& initial, const MeasurementApparatus& app,
                          double target, const ProtocolConfig& config, Transcript* transcript) {
  const auto& tols = config.tolerances;
  Ensemble out;
  out.provenance = "E1";

  if (config.mode == Mode::kExact) {
    for (auto& branch : app.channel_exact(as_density(initial))) {
      if (std::abs(branch.label - target) <= tols.grouping) {
        out.state = std::move(branch.state);
        return out;
      }
    }
    throw EmptySelectionError("initial state has no weight on eigenvalue " + describe(target));
  }

  if (config.ensemble_size == 0) throw InvalidArgument("sampled mode needs ensemble_size >= 1");

  // Mixed initial states are unravelled into their eigenvectors.
  std::optional<HermitianEigen> mixture;
  OutcomeDistribution weights;
  if (const auto* rho = std::get_if<DensityMatrix>(&initial)) {
    mixture = hermitian_eig(rho->matrix(), tols.tol);
    for (double w : mixture->eigenvalues) weights.outcomes.push_back({w, std::max(0.0, w)});
  }

  for (std::size_t id = 0; id < config.ensemble_size; ++id) {
    Rng rng = Rng::derive(config.seed, {kSelectStream, id});
    const PureState psi = mixture ? PureState::from_amplitudes(
                                        mixture->eigenvectors[sample_index(weights, rng)], 0.0)
                                  : std::get<PureState>(initial);
    ApparatusReading reading = app.measure_sampled(psi, rng);
    record(transcript, id, Stage::kSelect, reading.label);
    if (std::abs(reading.label - target) <= tols.grouping) {
      out.systems.push_back({id, std::move(reading.state)});
    }
  }
  if (out.systems.empty()) {
    throw EmptySelectionError("no system among " + std::to_string(config.ensemble_size) +
                              " gave eigenvalue " + describe(target) +
                              "; increase ensemble_size or change the initial state");
  }
  return out;
}

StageOutput run_stage(const Ensemble& ensemble, const AuxiliaryObservable& aux,
                      const SpectralDecomposition& base, std::size_t target_group,
                      const MeasurementApparatus& app, StageKind stage,
                      const ProtocolConfig& config, Transcript* transcript) {
  const auto& tols = config.tolerances;
  if (target_group >= base.group_count()) throw InvalidArgument("target level out of range");
  const ComplexMatrix observable = base.reassemble();
  const double scale = std::max(1.0, aux.matrix.norm_max() * observable.norm_max());
  if (commutator(aux.matrix, observable).norm_max() > 10.0 * tols.tol * scale) {
    throw InvalidArgument("auxiliary observable does not commute with the measured observable");
  }
  const auto inside = sigma_levels_in(base, aux.decomposition, target_group, tols.tol);
  const double target = base.eigenvalues[target_group];

  if (config.mode == Mode::kExact) {
    if (!ensemble.state) throw InvalidArgument("exact-mode stage needs an ensemble density matrix");
    return run_exact_stage(ensemble, aux, inside, target, app, stage, config);
  }
  return run_sampled_stage(ensemble, aux, inside, target, app, stage, config, transcript);
}

Classification discriminate(const InitialState& initial, const MeasurementApparatus& app,
                            const ComplexMatrix& observable, const ProtocolConfig& config) {
  const auto& tols = config.tolerances;
  if (app.dim() != observable.dim()) throw DimensionError("apparatus and observable dimensions differ");
  const SpectralDecomposition base = spectral_decompose(observable, tols.grouping, tols.tol);
  for (double label : app.labels()) {
    if (!base.find_group(label, tols.grouping)) {
      throw InvalidArgument("apparatus reports " + describe(label) +
                            ", which is not an eigenvalue of the observable");
    }
  }

  Classification out;
  out.mode = config.mode;

  std::optional<std::size_t> target_group;
  if (config.target_eigenvalue) {
    target_group = base.find_group(*config.target_eigenvalue, tols.grouping);
    if (!target_group) {
      throw InvalidArgument("target " + describe(*config.target_eigenvalue) +
                            " is not an eigenvalue of the observable");
    }
  } else {
    for (std::size_t k = 0; k < base.group_count() && !target_group; ++k) {
      if (base.multiplicities[k] >= 2) target_group = k;
    }
  }
  if (!target_group) return out;  // non-degenerate: both rules coincide
  const std::size_t k = *target_group;
  out.target_eigenvalue = base.eigenvalues[k];
  out.target_multiplicity = base.multiplicities[k];
  if (base.multiplicities[k] < 2) return out;

  Transcript transcript;
  const Ensemble selected = prepare_ensemble(initial, app, base.eigenvalues[k], config, &transcript);
  out.selected_systems = selected.systems.size();

  const AuxiliaryObservable sigma = build_sigma(base, tols.tol);
  StageOutput sigma_stage =
      run_stage(selected, sigma, base, k, app, StageKind::kSigma, config, &transcript);
  out.evidence.push_back(sigma_stage.result);
  if (!sigma_stage.result.consistent) {
    out.verdict = Verdict::kNonLuders;
    out.detected_at = StageKind::kSigma;
    out.transcript = transcript.release();
    return out;
  }

  // Reference s_1: the most likely branch (exact) or the first reading (sampled).
  std::size_t reference_level = sigma_stage.subensembles.begin()->first;
  if (config.mode == Mode::kExact) {
    double best = -1.0;
    for (const auto& b : sigma_stage.result.branch_support) {
      if (b.reach_probability > best + tols.tol) {
        best = b.reach_probability;
        reference_level = *sigma.decomposition.find_group(b.first_label, tols.grouping);
      }
    }
  } else {
    std::size_t first_id = std::numeric_limits<std::size_t>::max();
    for (const auto& [level, sub] : sigma_stage.subensembles) {
      if (!sub.systems.empty() && sub.systems.front().system_id < first_id) {
        first_id = sub.systems.front().system_id;
        reference_level = level;
      }
    }
  }
  out.reference_label = sigma.decomposition.eigenvalues[reference_level];

  const auto inside = sigma_levels_in(base, sigma.decomposition, k, tols.tol);
  const auto ref_pos = std::find(inside.begin(), inside.end(), reference_level);
  if (ref_pos == inside.end()) throw Error("reference sigma level lies outside the target level");
  const AuxiliaryObservable sigma_prime = build_sigma_prime(
      base, sigma.decomposition, k, static_cast<std::size_t>(ref_pos - inside.begin()), tols.tol);

  const Ensemble& e11 = sigma_stage.subensembles.at(reference_level);
  if (config.mode == Mode::kSampled && e11.systems.empty()) {
    throw EmptySelectionError("subensemble E11 is empty; increase ensemble_size");
  }
  StageOutput prime_stage =
      run_stage(e11, sigma_prime, base, k, app, StageKind::kSigmaPrime, config, &transcript);
  out.evidence.push_back(prime_stage.result);
  out.transcript = transcript.release();

  if (!prime_stage.result.consistent) {
    out.verdict = Verdict::kNonLuders;
    out.detected_at = StageKind::kSigmaPrime;
    return out;
  }
  out.verdict = Verdict::kLuders;
  if (config.mode == Mode::kSampled) {
    out.false_acceptance_bound =
        std::pow(1.0 - config.min_disturbance, static_cast<double>(prime_stage.result.trials));
  }
  return out;
}

std::size_t required_ensemble_size(double min_disturbance, double confidence) {
  if (!(min_disturbance > 0.0 && min_disturbance < 1.0)) {
    throw InvalidArgument("min_disturbance must lie in (0, 1)");
  }
  if (!(confidence > 0.0 && confidence < 1.0)) throw InvalidArgument("confidence must lie in (0, 1)");
  const double q = 1.0 - min_disturbance;
  auto n = static_cast<std::size_t>(
      std::max(1.0, std::ceil(std::log(confidence) / std::log1p(-min_disturbance))));
  while (std::pow(q, static_cast<double>(n)) > confidence) ++n;
  while (n > 1 && std::pow(q, static_cast<double>(n - 1)) <= confidence) --n;
  return n;
}

}  // namespace qreduce
