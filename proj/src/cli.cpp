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

#include "qreduce/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <random>
#include <sstream>

#include "qreduce/error.hpp"
#include "qreduce/oracle.hpp"
#include "qreduce/report.hpp"
#include "qreduce/scenario_file.hpp"
#include "qreduce/scenarios.hpp"

namespace qreduce {
namespace {

std::string format_number(double x) {
  if (std::abs(x) < 1e-12) x = 0.0;
  std::ostringstream s;
  s << std::setprecision(10) << x;
  return s.str();
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::kLuders:
      return kExitLuders;
    case Verdict::kNonLuders:
      return kExitNonLuders;
    case Verdict::kIndeterminate:
      return kExitIndeterminate;
  }
  return kExitError;
}

struct DiscriminateArgs {
  std::string scenario_file;
  std::string builtin;
  std::string mode;
  std::optional<std::size_t> ensemble_size;
  std::optional<std::uint64_t> seed;
  std::optional<double> target_eigenvalue;
  std::string out_file;
  bool transcript = false;
};

struct ValidateArgs {
  std::string scenario_file;
  bool reveal = false;
};

Scenario load_source(const std::string& file, const std::string& builtin) {
  if (!builtin.empty()) {
    auto s = find_builtin(builtin);
    if (!s) throw InvalidArgument("unknown built-in scenario '" + builtin + "' (see 'list')");
    return *s;
  }
  Scenario s = load_scenario_file(file);
  if (s.name.empty()) s.name = file;
  return s;
}

int cmd_list(std::ostream& out) {
  for (const auto& s : builtin_scenarios()) out << s.name << "  " << s.description << '\n';
  return 0;
}

int cmd_discriminate(const DiscriminateArgs& a, std::ostream& out) {
  Scenario scenario = load_source(a.scenario_file, a.builtin);
  ProtocolConfig& cfg = scenario.protocol;
  if (a.mode == "exact") cfg.mode = Mode::kExact;
  if (a.mode == "sampled") cfg.mode = Mode::kSampled;
  if (a.ensemble_size) cfg.ensemble_size = *a.ensemble_size;
  if (a.target_eigenvalue) cfg.target_eigenvalue = *a.target_eigenvalue;
  if (a.seed) {
    cfg.seed = *a.seed;
  } else if (!scenario.seed_given && cfg.mode == Mode::kSampled) {
    std::random_device entropy;
    cfg.seed = (std::uint64_t{entropy()} << 32) | entropy();
    out << "seed drawn from entropy: " << cfg.seed << '\n';
  }

  const auto start = std::chrono::steady_clock::now();
  BuiltScenario built = build_scenario(scenario);
  Classification result = discriminate(built.initial, built.apparatus, built.observable, cfg);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

  ReportInput report{scenario.name, cfg, std::move(result), a.transcript, elapsed.count()};
  write_text_report(out, report);
  if (!a.out_file.empty()) {
    std::ofstream file(a.out_file);
    if (!file) throw Error("cannot write report to " + a.out_file);
    file << report_json(report).dump(2) << '\n';
  }
  return exit_code(report.classification.verdict);
}

int cmd_validate(const ValidateArgs& a, std::ostream& out) {
  Scenario scenario = load_scenario_file(a.scenario_file);
  BuiltScenario built = build_scenario(scenario);
  const SpectralDecomposition& base = built.base;

  out << "scenario: " << (scenario.name.empty() ? a.scenario_file : scenario.name) << '\n'
      << "sites: " << scenario.sites << " (dimension " << base.dim() << ")\n"
      << "groups: {";
  for (std::size_t k = 0; k < base.group_count(); ++k) {
    out << (k ? ", " : "") << format_number(base.eigenvalues[k]) << ':' << base.multiplicities[k];
  }
  out << "}\n";
  if (built.target_group) {
    const std::size_t k = *built.target_group;
    out << "target eigenvalue: " << format_number(base.eigenvalues[k]) << " (multiplicity "
        << base.multiplicities[k] << ")\n";
  } else {
    out << "target eigenvalue: none (no degenerate level)\n";
  }
  out << "apparatus outcomes: " << built.apparatus.labels().size() << '\n';
  if (a.reveal) {
    const Verdict v = built.target_group
                          ? classify_refinement_oracle(built.refinement, *built.target_group)
                          : Verdict::kIndeterminate;
    out << "oracle verdict: " << verdict_name(v) << '\n';
  }
  out << "valid\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Black-box test of the Lüders reduction rule", "qreduce"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  DiscriminateArgs disc;
  auto* discriminate_cmd = app.add_subcommand("discriminate", "run the discrimination protocol");
  auto* source = discriminate_cmd->add_option_group("source");
  source->add_option("--scenario", disc.scenario_file, "scenario JSON file");
  source->add_option("--builtin", disc.builtin, "built-in scenario name");
  source->require_option(1);
  discriminate_cmd->add_option("--mode", disc.mode, "exact or sampled")
      ->check(CLI::IsMember({"exact", "sampled"}));
  discriminate_cmd->add_option("--ensemble-size", disc.ensemble_size, "systems prepared in sampled mode")
      ->check(CLI::PositiveNumber);
  discriminate_cmd->add_option("--seed", disc.seed, "random seed");
  discriminate_cmd->add_option("--target-eigenvalue", disc.target_eigenvalue, "eigenvalue a_1 to test");
  discriminate_cmd->add_option("--out", disc.out_file, "write a JSON report");
  discriminate_cmd->add_flag("--transcript", disc.transcript, "include the measurement transcript");

  auto* list_cmd = app.add_subcommand("list", "list built-in scenarios");

  ValidateArgs val;
  auto* validate_cmd = app.add_subcommand("validate", "check a scenario file");
  validate_cmd->add_option("--scenario", val.scenario_file, "scenario JSON file")->required();
  validate_cmd->add_flag("--reveal", val.reveal, "also print the ground-truth verdict");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*discriminate_cmd) return cmd_discriminate(disc, out);
    if (*list_cmd) return cmd_list(out);
    if (*validate_cmd) return cmd_validate(val, out);
  } catch (const EmptySelectionError& e) {
    err << "error: " << e.what() << '\n'
        << "hint: increase --ensemble-size or choose an initial state with weight on the target level\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace qreduce
