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

#include <filesystem>
#include <string_view>

#include <json.hpp>

#include "qreduce/scenarios.hpp"

namespace qreduce {

inline constexpr int kScenarioSchemaVersion = 1;

/// Scenario documents (JSON, schema_version 1):
///
///   {
///     "schema_version": 1,
///     "name": "...", "description": "...",            (optional)
///     "sites": 2,
///     "observable": "Z1 + Z2" | {"matrix": [[[re, im], ...], ...]},
///     "apparatus": {"type": "luders"}
///                | {"type": "refined_observable", "observable": ..., "output_polynomial": [c0, c1, ...]}
///                | {"type": "full_von_neumann", "bases": [{"eigenvalue": 0, "vectors": [[[re, im], ...], ...]}]}
///                | {"type": "partial", "blocks": [{"eigenvalue": 0, "cells": [[0], [1, 2]]}]}
///                | {"type": "consecutive", "observables": ["Z1", "Z2"]},
///     "initial_state": "default" | "+-" | {"amplitudes": [[re, im], ...]},
///     "protocol": {"mode": "exact" | "sampled", "ensemble_size": 1000,
///                  "target_eigenvalue": 0 | "auto", "min_disturbance": 0.5,
///                  "confidence": 0.001, "tolerance": 1e-9,
///                  "grouping_threshold": 1e-7, "seed": 42},   (all optional)
///     "expected": {"verdict": "NON_LUDERS", "detected_at": "SIGMA"}   (optional)
///   }
///
/// Unknown fields are rejected. Errors carry a JSON-pointer path.
Scenario parse_scenario(const nlohmann::json& doc);
Scenario parse_scenario_text(std::string_view text);
Scenario load_scenario_file(const std::filesystem::path& path);

nlohmann::json scenario_to_json(const Scenario& scenario);

}  // namespace qreduce
