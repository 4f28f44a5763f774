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

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qdt/detector_model.h"
#include "qdt/parallel.h"
#include "qdt/rng.h"
#include "qdt/state_library.h"

namespace qdt {

/// Readout noise for one qubit. p01 is P(read 1 | prepared 0), p10 is
/// P(read 0 | prepared 1); the tilts become the a1, a2 coefficients of Pi^(0).
struct QubitNoise {
  double p01 = 0.0;
  double p10 = 0.0;
  double tilt_x = 0.0;
  double tilt_y = 0.0;
};

struct NoisySpec {
  std::vector<QubitNoise> qubits;
};

/// Single-qubit factor: Pi^(0) has <0|Pi^(0)|0> = 1 - p01 and <1|Pi^(0)|1> = p10,
/// i.e. a0 = (1 - p01 + p10)/2 and a3 = (1 - p01 - p10)/2.
AVector noisy_zero_element(const QubitNoise& noise);

/// Tensor product of the per-qubit noisy detectors. Rejects tilts that make an
/// element non-positive, naming the largest admissible tilt magnitude.
DetectorPovm make_noisy_detector(const NoisySpec& spec);

/// Born probabilities Tr(rho Pi^(n)), clipped to [0, 1] and renormalized when
/// the sum is off by less than 1e-10. Throws if any probability is below -1e-10
/// or the sum is further from one.
std::vector<double> born_probabilities(const DetectorPovm& p, const ComplexMatrix& rho);

/// Multinomial draw by inverse CDF; deterministic given rng.
std::vector<std::uint64_t> sample_from_probabilities(std::span<const double> probabilities,
                                                     std::uint64_t shots, CounterRng& rng);

std::vector<std::uint64_t> sample_counts(const DetectorPovm& p, const TestState& s,
                                         std::uint64_t shots, CounterRng& rng);

struct CircuitRecord {
  std::string state;                  // TestState::label()
  std::vector<std::uint64_t> counts;  // indexed by outcome
};

struct Run {
  std::vector<CircuitRecord> circuits;
};

/// Shot counts for one detector-tomography experiment. Each run holds one
/// record per test state in canonical order.
struct CountsDataset {
  int num_qubits = 0;
  std::uint64_t shots_per_circuit = 8192;
  std::vector<Run> runs;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> metadata;

  /// Throws std::invalid_argument describing the first broken invariant.
  void validate() const;
};

/// Outcome-by-state relative frequencies; rows are outcomes, columns states.
using FrequencyTable = Eigen::MatrixXd;

/// Circuit (run r, state c) draws from CounterRng(seed).substream(r).substream(c),
/// so results are independent of the worker count.
CountsDataset simulate_qdt_experiment(const DetectorPovm& p, std::uint64_t shots, std::size_t runs,
                                      std::uint64_t seed, unsigned workers = worker_count());

/// Infinite-shot frequencies: exact Born probabilities for every state.
FrequencyTable exact_frequencies(const DetectorPovm& p, std::span<const TestState> states);

/// Pooled outcome distribution for `runs` x `shots` measurements of rho. Run r
/// uses CounterRng(seed).substream(r). shots == 0 returns exact probabilities.
std::vector<double> simulate_state_measurement(const DetectorPovm& p, const ComplexMatrix& rho,
                                               std::uint64_t shots, std::size_t runs,
                                               std::uint64_t seed);

}  // namespace qdt
