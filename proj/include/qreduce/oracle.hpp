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

#include "qreduce/protocol.hpp"
#include "qreduce/refinement.hpp"

namespace qreduce {

/// Ground truth read directly off a refinement: LUDERS iff the target level
/// is a single cell. Never available to the black-box procedure itself.
Verdict classify_refinement_oracle(const Refinement& refinement, std::size_t target_group);

}  // namespace qreduce
