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

#include <array>
#include <string>
#include <vector>

#include "qdt/analysis.h"
#include "qdt/detector_model.h"

namespace qdt {

/// One POVM element of one qubit drawn on the Bloch sphere: the arrow is
/// (a1, a2, a3)/a0 and its width is a0.
struct BlochArrow {
  int qubit = 0;
  int outcome = 0;  // 0 or 1
  AVector a;
  double width = 0.0;
  std::array<double, 3> direction{};  // as drawn, after clamping
  double length = 0.0;                // before clamping
  bool clamped = false;
};

struct DetectorReport {
  int num_qubits = 0;
  std::vector<BlochArrow> arrows;  // qubit-major, outcome 0 then 1
  std::vector<std::string> warnings;
};

/// Multi-qubit detectors are summarized through their single-qubit reductions.
/// Arrows longer than 1 are clamped to unit length with a warning; an element
/// with a0 <= 0 is drawn as a zero-length arrow with a warning.
DetectorReport bloch_summary(const DetectorPovm& p);

std::string render_text(const DetectorReport& r);
/// Embeds the POVM itself so that the document round-trips through the POVM reader.
std::string render_json(const DetectorPovm& p, const DetectorReport& r);
std::string render_svg(const DetectorReport& r);

/// Aligned plain-text table; empty cells print as "-". Flagged cells get a '*'.
std::string render_table_text(const ComparisonTable& t, const std::vector<CrosstalkFlag>& flags = {});

}  // namespace qdt
