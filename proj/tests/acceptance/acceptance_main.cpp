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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <unistd.h>

#include "qreduce/auxiliary.hpp"
#include "qreduce/cli.hpp"
#include "qreduce/oracle.hpp"
#include "qreduce/protocol.hpp"
#include "qreduce/scenarios.hpp"
#include "qreduce/spin.hpp"
#include "test_support.hpp"

namespace qreduce {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct CriterionResult {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* pattern, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, pattern, args...);
  return buffer;
}

// Restricted growth strings of length n.
std::vector<Partition> set_partitions(std::size_t n) {
  std::vector<Partition> out;
  std::vector<std::size_t> rgs(n, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t blocks) {
    if (i == n) {
      Partition p(blocks);
      for (std::size_t j = 0; j < n; ++j) p[rgs[j]].push_back(j);
      out.push_back(std::move(p));
      return;
    }
    for (std::size_t b = 0; b <= blocks; ++b) {
      rgs[i] = b;
      rec(i + 1, std::max(blocks, b + 1));
    }
  };
  rec(0, 0);
  return out;
}

DensityMatrix random_density(std::size_t dim, std::size_t rank, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  ComplexMatrix m(dim);
  double total = 0.0;
  std::vector<double> w(rank);
  for (auto& x : w) total += (x = u(gen));
  for (std::size_t i = 0; i < rank; ++i) {
    const auto v = testing::random_unit_vector(dim, gen);
    m += Complex(w[i] / total) * ComplexMatrix::outer(v, v);
  }
  return DensityMatrix(m);
}

/// Cells of level `k` grouped by `partition`, either along the level's
/// eigenbasis or along a random rotation of it.
std::vector<std::vector<ComplexVector>> level_cells(const SpectralDecomposition& base, std::size_t k,
                                                    const Partition& partition, bool rotate,
                                                    std::mt19937_64& gen) {
  const auto& basis = base.eigenbasis[k];
  const std::size_t n = basis.size();
  std::vector<ComplexVector> vectors = basis;
  if (rotate) {
    const auto u = testing::random_orthonormal_basis(n, gen);
    for (std::size_t j = 0; j < n; ++j) {
      ComplexVector w(base.dim());
      for (std::size_t a = 0; a < n; ++a) w += u[j][a] * basis[a];
      vectors[j] = w;
    }
  }
  std::vector<std::vector<ComplexVector>> cells;
  for (const auto& block : partition) {
    auto& cell = cells.emplace_back();
    for (auto j : block) cell.push_back(vectors[j]);
  }
  return cells;
}

CriterionResult criterion_oracle_equivalence() {
  const auto start = Clock::now();
  const std::vector<std::vector<double>> spectra{
      {1, 1, 0},
      {1, 1, 1, 0},
      {1, 1, 0, 0},
      {2, 2, 2, 2, 0, -1},
      {1, 1, 1, 1, 1, 0, 0, -1},
      {3, 3, 3, 0, 0, 0, 0, -2},
  };
  std::mt19937_64 gen(20240611);
  std::size_t cases = 0, disagreements = 0, non_luders = 0;
  ProtocolConfig cfg;
  cfg.mode = Mode::kExact;
  for (const auto& spectrum : spectra) {
    for (int rotation = 0; rotation < 4; ++rotation) {
      const ComplexMatrix a =
          rotation == 0 ? ComplexMatrix::diagonal(spectrum) : testing::rotated_diagonal(spectrum, gen);
      const auto base = spectral_decompose(a);
      const auto target = resolve_target(base, std::nullopt);
      if (!target) return {false, "test spectrum without degenerate level"};
      for (const auto& partition : set_partitions(base.multiplicities[*target])) {
        for (bool rotate_cells : {false, true}) {
          std::vector<std::vector<std::vector<ComplexVector>>> cells;
          for (std::size_t k = 0; k < base.group_count(); ++k) {
            const Partition p = k == *target ? partition : Partition{[&] {
              std::vector<std::size_t> all(base.multiplicities[k]);
              for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
              return all;
            }()};
            cells.push_back(level_cells(base, k, p, rotate_cells, gen));
          }
          const auto refinement = Refinement::from_cells(base, cells);
          const MeasurementApparatus app(refinement);
          const InitialState psi = PureState(testing::random_unit_vector(base.dim(), gen));
          const auto verdict = discriminate(psi, app, a, cfg).verdict;
          const auto oracle = classify_refinement_oracle(refinement, *target);
          ++cases;
          non_luders += oracle == Verdict::kNonLuders;
          if (verdict != oracle) ++disagreements;
        }
      }
    }
  }
  const double t = seconds_since(start);
  return {cases >= 200 && disagreements == 0 && t < 60.0,
          fmt("%zu cases (%zu non-Lüders), %zu disagreements, %.2f s", cases, non_luders,
              disagreements, t)};
}

CriterionResult criterion_f_function() {
  const auto a_prime = build_spin_operator("Z1 + Z2 + TOTAL_SPIN_SQ", 2);
  const auto f = apply_spectral_function(
      a_prime, [](double x) { return -(8.0 / 3.0) * x + x * x - x * x * x / 12.0; });
  const double err = max_abs_diff(f, build_spin_operator("Z1 + Z2", 2));
  return {err <= 1e-9, fmt("max |f(A') - sigma_tot,z| = %.3e", err)};
}

CriterionResult criterion_two_stage_necessity() {
  const Scenario s3 = *find_builtin("s3-consecutive");
  const auto built = build_scenario(s3);
  auto cfg = s3.protocol;
  cfg.mode = Mode::kExact;
  const auto c = discriminate(built.initial, built.apparatus, built.observable, cfg);
  const bool exact_ok = c.evidence.size() == 2 && c.evidence[0].consistent && !c.evidence[1].consistent &&
                        c.detected_at == StageKind::kSigmaPrime;
  const double exact_p = c.evidence.size() == 2 ? c.evidence[1].mismatch_probability : -1.0;

  // Sampled sigma' stage on 10^4 copies of |+->.
  const std::size_t n = 10000;
  const auto sigma = build_sigma(built.base);
  const std::size_t target = *built.target_group;
  const auto plus_minus = spin_product_state("+-");
  std::size_t reference = 0;
  for (std::size_t i = 0; i < built.base.eigenbasis[target].size(); ++i) {
    const auto& v = sigma.decomposition.eigenbasis[sigma_levels_in(built.base, sigma.decomposition, target)[i]][0];
    if (testing::fidelity(v, plus_minus) > 0.5) reference = i;
  }
  const auto prime = build_sigma_prime(built.base, sigma.decomposition, target, reference);
  Ensemble e11;
  e11.provenance = "E11";
  for (std::size_t i = 0; i < n; ++i) e11.systems.push_back({i, PureState(plus_minus)});
  ProtocolConfig sampled = cfg;
  sampled.mode = Mode::kSampled;
  sampled.seed = 31337;
  const auto out = run_stage(e11, prime, built.base, target, built.apparatus, StageKind::kSigmaPrime, sampled);
  const double p_hat = out.result.mismatch_probability;
  const double sd = std::sqrt(0.25 / double(out.result.trials));
  const bool sampled_ok = out.result.trials == n && std::abs(p_hat - 0.5) <= 5 * sd;
  return {exact_ok && std::abs(exact_p - 0.5) <= 1e-9 && sampled_ok,
          fmt("exact sigma' mismatch %.12f; sampled %zu/%zu = %.4f (5 sd = %.4f)", exact_p,
              out.result.mismatch_count, out.result.trials, p_hat, 5 * sd)};
}

CriterionResult criterion_total_spin_apparatus() {
  const Scenario s2 = *find_builtin("s2-vn-total-spin");
  const auto built = build_scenario(s2);
  auto cfg = s2.protocol;
  cfg.mode = Mode::kExact;
  const auto c = discriminate(built.initial, built.apparatus, built.observable, cfg);
  double worst = 0.0;
  bool shape_ok = !c.evidence.empty() && c.evidence[0].stage == StageKind::kSigma &&
                  c.evidence[0].branch_support.size() == 2;
  if (shape_ok) {
    for (const auto& b : c.evidence[0].branch_support) {
      worst = std::max(worst, std::abs(b.second.probability_of(1.0) - 0.5));
      worst = std::max(worst, std::abs(b.second.probability_of(0.0) - 0.5));
    }
  }
  cfg.mode = Mode::kSampled;
  cfg.ensemble_size = 10000;
  cfg.seed = 4242;
  const auto sampled = discriminate(built.initial, built.apparatus, built.observable, cfg);
  const auto& st = sampled.evidence.at(0);
  const double sd = std::sqrt(0.25 / double(st.trials));
  const bool sampled_ok = st.stage == StageKind::kSigma && st.trials > 0 &&
                          std::abs(st.mismatch_probability - 0.5) <= 5 * sd;
  return {shape_ok && worst <= 1e-9 && sampled_ok,
          fmt("exact support deviation %.2e; sampled %zu/%zu = %.4f (5 sd = %.4f)", worst,
              st.mismatch_count, st.trials, st.mismatch_probability, 5 * sd)};
}

CriterionResult criterion_luders_soundness() {
  std::size_t trajectories = 0, mismatches = 0;
  std::uint64_t seed = 1;
  for (const auto& s : builtin_scenarios()) {
    auto built = build_scenario(s);
    const auto app = make_luders(built.base);
    ProtocolConfig cfg = s.protocol;
    cfg.mode = Mode::kSampled;
    cfg.ensemble_size = 30000;
    cfg.seed = seed++;
    const auto c = discriminate(built.initial, app, built.observable, cfg);
    for (const auto& st : c.evidence) {
      trajectories += st.trials;
      mismatches += st.mismatch_count;
    }
  }
  return {trajectories >= 100000 && mismatches == 0,
          fmt("%zu stage trajectories, %zu mismatches", trajectories, mismatches)};
}

CriterionResult criterion_channel_invariants() {
  std::mt19937_64 gen(777);
  std::uniform_int_distribution<std::size_t> dim_dist(2, 16);
  double trace_err = 0.0, idem_err = 0.0, repeat_err = 0.0;
  for (int pair = 0; pair < 500; ++pair) {
    const std::size_t dim = dim_dist(gen);
    std::uniform_int_distribution<std::size_t> level_dist(1, dim);
    std::vector<double> spectrum(dim);
    for (auto& x : spectrum) x = double(level_dist(gen) / 2);
    const auto base = spectral_decompose(testing::rotated_diagonal(spectrum, gen));
    std::vector<std::vector<std::vector<ComplexVector>>> cells;
    for (std::size_t k = 0; k < base.group_count(); ++k) {
      Partition p;
      std::uniform_int_distribution<std::size_t> block(0, base.multiplicities[k] - 1);
      std::vector<std::vector<std::size_t>> buckets(base.multiplicities[k]);
      for (std::size_t j = 0; j < base.multiplicities[k]; ++j) buckets[block(gen)].push_back(j);
      for (auto& b : buckets) {
        if (!b.empty()) p.push_back(b);
      }
      cells.push_back(level_cells(base, k, p, pair % 2 == 1, gen));
    }
    const MeasurementApparatus app(Refinement::from_cells(base, cells));
    std::uniform_int_distribution<std::size_t> rank_dist(1, dim);
    const auto rho = random_density(dim, rank_dist(gen), gen);

    const auto once = luders_channel(base, rho.matrix());
    trace_err = std::max(trace_err, std::abs(once.trace().real() - 1.0));
    idem_err = std::max(idem_err, max_abs_diff(luders_channel(base, once), once));

    double total = 0.0;
    for (const auto& branch : app.channel_exact(rho)) {
      total += branch.probability;
      trace_err = std::max(trace_err, std::abs(branch.state.matrix().trace().real() - 1.0));
      const auto again = app.channel_exact(branch.state);
      double same = 0.0;
      for (const auto& b2 : again) {
        if (std::abs(b2.label - branch.label) < 1e-7) {
          same = b2.probability;
          idem_err = std::max(idem_err, max_abs_diff(b2.state.matrix(), branch.state.matrix()));
        }
      }
      repeat_err = std::max(repeat_err, std::abs(same - 1.0));
    }
    trace_err = std::max(trace_err, std::abs(total - 1.0));
  }
  return {trace_err <= 1e-9 && idem_err <= 1e-9 && repeat_err <= 1e-9,
          fmt("500 pairs: trace %.2e, idempotence %.2e, repeatability %.2e", trace_err, idem_err,
              repeat_err)};
}

CriterionResult criterion_sigma_prime_margin() {
  double worst = 0.0;
  std::mt19937_64 gen(13);
  for (std::size_t n : {2, 3, 4}) {
    std::vector<double> spectrum(n, 1.0);
    spectrum.push_back(0.0);
    spectrum.push_back(-1.0);
    const auto base = spectral_decompose(testing::rotated_diagonal(spectrum, gen));
    const auto sigma = build_sigma(base);
    const auto prime = build_sigma_prime(base, sigma.decomposition, 0, 0);
    for (auto j : sigma_levels_in(base, prime.decomposition, 0)) {
      for (auto i : sigma_levels_in(base, sigma.decomposition, 0)) {
        const double gamma =
            std::abs(inner(sigma.decomposition.eigenbasis[i][0], prime.decomposition.eigenbasis[j][0]));
        worst = std::max(worst, std::abs(gamma - 1.0 / std::sqrt(double(n))));
      }
    }
  }
  const auto base = spectral_decompose(build_spin_operator("Z1 + Z2", 2));
  const auto sigma = build_sigma(base);
  const auto prime = build_sigma_prime(base, sigma.decomposition, 1, 0);
  const double h = 1.0 / std::sqrt(2.0);
  const ComplexVector phi_plus{0.0, h, h, 0.0}, phi_minus{0.0, h, -h, 0.0};
  double f_plus = 0.0, f_minus = 0.0;
  for (auto j : sigma_levels_in(base, prime.decomposition, 1)) {
    f_plus = std::max(f_plus, testing::fidelity(prime.decomposition.eigenbasis[j][0], phi_plus));
    f_minus = std::max(f_minus, testing::fidelity(prime.decomposition.eigenbasis[j][0], phi_minus));
  }
  return {worst <= 1e-9 && f_plus >= 1 - 1e-9 && f_minus >= 1 - 1e-9,
          fmt("max overlap deviation %.2e; fidelity phi+ %.12f, phi- %.12f", worst, f_plus, f_minus)};
}

CriterionResult criterion_sample_size() {
  const auto a = required_ensemble_size(0.5, 0.001);
  const auto b = required_ensemble_size(0.1, 0.01);
  const auto closed = [](double p, double d) {
    return static_cast<std::size_t>(std::ceil(std::log(d) / std::log(1 - p)));
  };
  return {a == 10 && b == 44 && a == closed(0.5, 0.001) && b == closed(0.1, 0.01),
          fmt("N(0.5, 0.001) = %zu, N(0.1, 0.01) = %zu", a, b)};
}

CriterionResult criterion_cli_determinism() {
  const auto dir = fs::temp_directory_path();
  const auto stem = "qreduce_acceptance_" + std::to_string(::getpid());
  const fs::path a = dir / (stem + "_a.json"), b = dir / (stem + "_b.json");
  std::ostringstream sink;
  const auto args = [&](const fs::path& out) {
    return std::vector<std::string>{"discriminate", "--builtin", "s2-vn-total-spin", "--mode",
                                    "sampled", "--seed", "42", "--transcript", "--out", out.string()};
  };
  const int code_a = run_cli(args(a), sink, sink);
  const int code_b = run_cli(args(b), sink, sink);
  auto read = [](const fs::path& p) {
    std::ifstream in(p);
    auto j = nlohmann::json::parse(in);
    j.erase("wall_time_seconds");
    return j.dump(2);
  };
  const std::string ja = read(a), jb = read(b);
  fs::remove(a);
  fs::remove(b);
  return {code_a == kExitNonLuders && code_b == kExitNonLuders && ja == jb,
          fmt("exit codes %d/%d, reports %s (%zu bytes)", code_a, code_b,
              ja == jb ? "identical" : "DIFFER", ja.size())};
}

}  // namespace
}  // namespace qreduce

int main() {
  using namespace qreduce;
  const std::vector<std::pair<const char*, std::function<CriterionResult()>>> criteria{
      {"oracle equivalence over refinement sweep", criterion_oracle_equivalence},
      {"output polynomial maps A' to sigma_tot,z", criterion_f_function},
      {"two-stage necessity (consecutive apparatus)", criterion_two_stage_necessity},
      {"total-spin von Neumann apparatus support", criterion_total_spin_apparatus},
      {"Lüders soundness over 1e5 trajectories", criterion_luders_soundness},
      {"channel invariants on random pairs", criterion_channel_invariants},
      {"sigma' overlap margin", criterion_sigma_prime_margin},
      {"sample-size formula", criterion_sample_size},
      {"CLI report determinism", criterion_cli_determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    CriterionResult o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("[%s] %zu. %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
