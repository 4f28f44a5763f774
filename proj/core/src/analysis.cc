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

#include "qdt/analysis.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace qdt {
namespace {

AVector reduced_zero(const DetectorPovm& p, int qubit) {
  if (p.num_qubits() == 1) return p.avector(0);
  const int keep[] = {qubit};
  return reduce_detector(p, keep).avector(0);
}

}  // namespace

ComparisonTable conditioned_table(const std::map<std::pair<int, int>, DetectorPovm>& pair_povms,
                                  const std::map<int, DetectorPovm>& reference) {
  ComparisonTable t;
  std::vector<int> qubits;
  for (const auto& [q, p] : reference) {
    if (p.num_qubits() != 1) {
      throw std::invalid_argument(fmt::format("reference detector for qubit {} is not single-qubit", q));
    }
    qubits.push_back(q);
  }
  for (int q : qubits) {
    t.rows.push_back(std::to_string(q));
    t.cols.push_back(std::to_string(q));
  }
  t.distances.assign(qubits.size(), std::vector<std::optional<double>>(qubits.size()));
  for (std::size_t r = 0; r < qubits.size(); ++r) {
    for (std::size_t c = 0; c < qubits.size(); ++c) {
      if (r == c) continue;
      const int i = qubits[r], j = qubits[c];
      int position = 0;
      auto it = pair_povms.find({i, j});
      if (it == pair_povms.end()) {
        it = pair_povms.find({j, i});
        position = 1;
      }
      if (it == pair_povms.end()) {
        t.missing.push_back(fmt::format("no two-qubit detector for pair ({}, {})", i, j));
        continue;
      }
      if (it->second.num_qubits() != 2) {
        throw std::invalid_argument(
            fmt::format("detector for pair ({}, {}) is not a two-qubit POVM", it->first.first, it->first.second));
      }
      const int keep[] = {position};
      t.distances[r][c] = detector_distance(reduce_detector(it->second, keep), reference.at(i));
    }
  }
  return t;
}

std::vector<CrosstalkFlag> flag_crosstalk(const ComparisonTable& t, double threshold_multiplier) {
  if (!(t.fluctuation_scale > 0.0)) {
    throw std::invalid_argument(
        fmt::format("fluctuation scale must be positive, got {}", t.fluctuation_scale));
  }
  const double threshold = threshold_multiplier * t.fluctuation_scale;
  std::vector<CrosstalkFlag> flags;
  for (std::size_t r = 0; r < t.distances.size(); ++r) {
    for (std::size_t c = 0; c < t.distances[r].size(); ++c) {
      const auto& d = t.distances[r][c];
      if (!d) continue;
      flags.push_back({t.rows.at(r), t.cols.at(c), *d, threshold, *d > threshold});
    }
  }
  return flags;
}

ComparisonTable individual_vs_parallel(const std::map<int, DetectorPovm>& individual,
                                       const std::map<int, DetectorPovm>& parallel) {
  if (individual.size() != parallel.size() ||
      !std::equal(individual.begin(), individual.end(), parallel.begin(),
                  [](const auto& a, const auto& b) { return a.first == b.first; })) {
    throw std::invalid_argument("individual and parallel detectors cover different qubits");
  }
  ComparisonTable t;
  t.cols = {"distance"};
  for (const auto& [q, ind] : individual) {
    t.rows.push_back(std::to_string(q));
    t.distances.push_back({detector_distance(ind, parallel.at(q))});
  }
  return t;
}

double fluctuation_scale(const BootstrapReport& report) {
  if (report.samples.size() < 2) {
    throw std::invalid_argument("fluctuation scale needs at least two bootstrap samples");
  }
  const auto count = static_cast<double>(report.samples.size());
  std::vector<double> per_qubit;
  for (int q = 0; q < report.num_qubits; ++q) {
    std::vector<std::array<double, 4>> values;
    for (const auto& s : report.samples) values.push_back(reduced_zero(s, q).as_array());
    double variance_sum = 0.0;
    for (int k = 0; k < 4; ++k) {
      double mean = 0.0;
      for (const auto& v : values) mean += v[k];
      mean /= count;
      double ss = 0.0;
      for (const auto& v : values) ss += (v[k] - mean) * (v[k] - mean);
      variance_sum += ss / (count - 1.0);
    }
    per_qubit.push_back(std::sqrt(variance_sum));
  }
  std::sort(per_qubit.begin(), per_qubit.end());
  const std::size_t n = per_qubit.size();
  return n % 2 ? per_qubit[n / 2] : 0.5 * (per_qubit[n / 2 - 1] + per_qubit[n / 2]);
}

}  // namespace qdt
