// Copyright 2026 The qdt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdlib>
#include <string>

#include <gtest/gtest.h>

#include "qdt/io.h"

namespace qdt::testing {

/// Compares text with tests/golden/<name>. Set QDT_UPDATE_GOLDEN=1 to rewrite
/// the golden file instead.
inline void expect_golden(const std::string& name, const std::string& actual) {
  const std::string path = std::string(QDT_GOLDEN_DIR) + "/" + name;
  if (const char* update = std::getenv("QDT_UPDATE_GOLDEN"); update && std::string(update) == "1") {
    io::write_text(path, actual);
    return;
  }
  std::string expected;
  try {
    expected = io::read_text(path);
  } catch (const std::exception& e) {
    FAIL() << e.what() << " (run with QDT_UPDATE_GOLDEN=1 to create it)";
  }
  EXPECT_EQ(actual, expected) << "golden mismatch: " << path;
}

}  // namespace qdt::testing
