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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "qreduce/apparatus.hpp"

namespace qreduce {
namespace {

template <class T>
concept ExposesRefinement = requires(const T& t) { t.refinement(); } ||
                            requires(const T& t) { t.refinement_; } ||
                            requires(const T& t) { t.cells(0); };

static_assert(!ExposesRefinement<MeasurementApparatus>);

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(ArchitectureTest, ProtocolNeverSeesRefinement) {
  const std::filesystem::path root = QREDUCE_SOURCE_DIR;
  for (const auto& file : {root / "src" / "protocol.cpp", root / "include" / "qreduce" / "protocol.hpp"}) {
    const std::string text = slurp(file);
    ASSERT_FALSE(text.empty()) << file;
    EXPECT_EQ(text.find("Refinement"), std::string::npos) << file;
    EXPECT_EQ(text.find("refinement.hpp"), std::string::npos) << file;
    EXPECT_EQ(text.find("oracle.hpp"), std::string::npos) << file;
  }
}

}  // namespace
}  // namespace qreduce
