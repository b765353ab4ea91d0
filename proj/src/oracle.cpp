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

#include "qreduce/oracle.hpp"

#include "qreduce/error.hpp"

namespace qreduce {

Verdict classify_refinement_oracle(const Refinement& refinement, std::size_t target_group) {
  if (target_group >= refinement.group_count()) throw InvalidArgument("target level out of range");
  return refinement.block_count(target_group) == 1 ? Verdict::kLuders : Verdict::kNonLuders;
}

}  // namespace qreduce
