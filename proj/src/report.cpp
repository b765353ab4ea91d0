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

#include "qreduce/report.hpp"

#include <iomanip>

namespace qreduce {
namespace {

using nlohmann::json;

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json distribution_json(const OutcomeDistribution& dist) {
  json out = json::array();
  for (const auto& o : dist.outcomes) out.push_back({{"label", o.label}, {"probability", o.probability}});
  return out;
}

json stage_json(const StageResult& s, Mode mode) {
  json j{{"stage", stage_kind_name(s.stage)},
         {"consistent", s.consistent},
         {"observed_first_labels", s.observed_first_labels},
         {"mismatch_count", s.mismatch_count},
         {"trials", s.trials},
         {"mismatch_probability", s.mismatch_probability},
         {"unprobed_labels", s.unprobed_labels}};
  if (mode == Mode::kExact) {
    json branches = json::array();
    for (const auto& b : s.branch_support) {
      branches.push_back({{"first_label", b.first_label},
                          {"reach_probability", b.reach_probability},
                          {"point_mass", b.point_mass},
                          {"second", distribution_json(b.second)}});
    }
    j["branch_support"] = std::move(branches);
  }
  return j;
}

}  // namespace

json report_json(const ReportInput& in) {
  const Classification& c = in.classification;
  const ProtocolConfig& cfg = in.config;
  json config{{"mode", mode_name(cfg.mode)},
              {"ensemble_size", cfg.ensemble_size},
              {"target_eigenvalue", cfg.target_eigenvalue ? json(*cfg.target_eigenvalue) : json("auto")},
              {"min_disturbance", cfg.min_disturbance},
              {"confidence", cfg.confidence},
              {"tolerance", cfg.tolerances.tol},
              {"grouping_threshold", cfg.tolerances.grouping}};
  json stages = json::array();
  for (const auto& s : c.evidence) stages.push_back(stage_json(s, c.mode));

  json doc{{"schema_version", kReportSchemaVersion},
           {"scenario", in.scenario},
           {"verdict", verdict_name(c.verdict)},
           {"detected_at", c.detected_at ? json(stage_kind_name(*c.detected_at)) : json(nullptr)},
           {"false_acceptance_bound", optional_number(c.false_acceptance_bound)},
           {"seed", cfg.seed},
           {"config", std::move(config)},
           {"target_eigenvalue", optional_number(c.target_eigenvalue)},
           {"target_multiplicity", c.target_multiplicity},
           {"reference_label", optional_number(c.reference_label)},
           {"selected_systems", c.selected_systems},
           {"stages", std::move(stages)}};
  if (in.include_transcript) {
    json records = json::array();
    for (const auto& r : c.transcript) {
      records.push_back({{"system_id", r.system_id},
                         {"stage", stage_name(r.stage)},
                         {"label", r.label},
                         {"timestamp_index", r.timestamp_index}});
    }
    doc["transcript"] = std::move(records);
  }
  doc["wall_time_seconds"] = optional_number(in.wall_time_seconds);
  return doc;
}

void write_text_report(std::ostream& out, const ReportInput& in) {
  const Classification& c = in.classification;
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::setprecision(6);

  out << "scenario: " << in.scenario << '\n'
      << "mode: " << mode_name(c.mode) << '\n'
      << "seed: " << in.config.seed << '\n';
  if (c.target_eigenvalue) {
    out << "target eigenvalue: " << *c.target_eigenvalue << " (multiplicity "
        << c.target_multiplicity << ")\n";
  } else {
    out << "target eigenvalue: none (no degenerate level)\n";
  }
  if (c.mode == Mode::kSampled) out << "selected systems: " << c.selected_systems << '\n';
  if (c.reference_label) out << "reference sigma label: " << *c.reference_label << '\n';

  for (const auto& s : c.evidence) {
    out << '\n' << stage_kind_name(s.stage) << " stage: " << (s.consistent ? "consistent" : "INCONSISTENT")
        << '\n';
    if (c.mode == Mode::kExact) {
      for (const auto& b : s.branch_support) {
        out << "  " << b.first_label << " (reach " << b.reach_probability << ") ->";
        for (const auto& o : b.second.outcomes) {
          if (o.probability > 1e-12) out << ' ' << o.label << ':' << o.probability;
        }
        out << (b.point_mass ? "" : "  [mismatch]") << '\n';
      }
      out << "  mismatch probability: " << s.mismatch_probability << '\n';
    } else {
      out << "  mismatches: " << s.mismatch_count << " / " << s.trials << '\n';
    }
    if (!s.unprobed_labels.empty()) {
      out << "  unprobed labels:";
      for (double l : s.unprobed_labels) out << ' ' << l;
      out << '\n';
    }
  }

  out << "\nverdict: " << verdict_name(c.verdict);
  if (c.detected_at) out << " (detected at " << stage_kind_name(*c.detected_at) << ")";
  out << '\n';
  if (c.false_acceptance_bound) {
    out << "false-acceptance bound: " << std::setprecision(3) << *c.false_acceptance_bound << '\n';
  }
  if (in.include_transcript) {
    out << "\ntranscript (" << c.transcript.size() << " records):\n";
    for (const auto& r : c.transcript) {
      out << "  " << r.timestamp_index << ' ' << r.system_id << ' ' << stage_name(r.stage) << ' '
          << r.label << '\n';
    }
  }
  out.flags(flags);
  out.precision(precision);
}

}  // namespace qreduce
