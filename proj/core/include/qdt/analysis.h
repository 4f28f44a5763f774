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

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qdt/detector_model.h"
#include "qdt/tomography_engine.h"

namespace qdt {

/// Distance table between single-qubit detectors. Row/column labels are
/// qubit indices (or a single descriptive column label); diagonal and missing
/// entries are empty.
struct ComparisonTable {
  std::vector<std::string> rows;
  std::vector<std::string> cols;
  std::vector<std::vector<std::optional<double>>> distances;
  double fluctuation_scale = 0.0;
  /// Human-readable notes for entries that could not be computed.
  std::vector<std::string> missing;
};

struct CrosstalkFlag {
  std::string row;
  std::string col;
  double distance = 0.0;
  double threshold = 0.0;
  bool flagged = false;
};

/// Entry (i, j) is the distance between qubit i's detector conditioned on j
/// (reduced from the pair POVM, which orders qubits (i, j)) and the reference
/// detector of qubit i. A pair may be given as (i, j) or (j, i).
ComparisonTable conditioned_table(const std::map<std::pair<int, int>, DetectorPovm>& pair_povms,
                                  const std::map<int, DetectorPovm>& reference);

/// One flag per present entry; flagged iff distance > multiplier * fluctuation_scale.
/// Throws std::invalid_argument when the fluctuation scale is not positive.
std::vector<CrosstalkFlag> flag_crosstalk(const ComparisonTable& t, double threshold_multiplier = 10.0);

/// Single-column table of per-qubit distances. Keys of both maps must agree.
ComparisonTable individual_vs_parallel(const std::map<int, DetectorPovm>& individual,
                                       const std::map<int, DetectorPovm>& parallel);

/// Typical statistical distance: for every qubit, the bootstrap standard
/// deviations of its reduced a^(0) combined as the distance norm, then the
/// median over qubits.
double fluctuation_scale(const BootstrapReport& report);

}  // namespace qdt
