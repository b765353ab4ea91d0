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

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "qreduce/protocol.hpp"

namespace qreduce {

inline constexpr int kReportSchemaVersion = 1;

struct ReportInput {
  std::string scenario;
  ProtocolConfig config;
  Classification classification;
  bool include_transcript = false;
  std::optional<double> wall_time_seconds;
};

/// Structured report. Identical inputs give identical documents apart from
/// "wall_time_seconds".
nlohmann::json report_json(const ReportInput& input);

void write_text_report(std::ostream& out, const ReportInput& input);

}  // namespace qreduce
