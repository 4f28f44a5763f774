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

#include "qdt/detector_simulator.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace qdt {
namespace {

constexpr double kProbabilityTolerance = 1e-10;

// Tr(rho Pi) = 2^N * sum_i c_i(rho) c_i(Pi) in the normalized Pauli basis.
std::vector<double> born_from_coeffs(const DetectorPovm& p, const PauliCoeffTensor& rho) {
  const double dim = static_cast<double>(std::size_t{1} << p.num_qubits());
  std::vector<double> probs(p.num_outcomes());
  for (std::size_t n = 0; n < p.num_outcomes(); ++n) {
    const auto e = p.element(n).coeffs();
    probs[n] = dim * std::inner_product(e.begin(), e.end(), rho.coeffs().begin(), 0.0);
  }
  return probs;
}

std::vector<double> sanitize(std::vector<double> probs) {
  double sum = 0.0;
  for (std::size_t n = 0; n < probs.size(); ++n) {
    if (probs[n] < -kProbabilityTolerance) {
      throw std::invalid_argument(fmt::format(
          "negative Born probability {:.3e} for outcome {}; detector/state pair is invalid",
          probs[n], n));
    }
    probs[n] = std::clamp(probs[n], 0.0, 1.0);
    sum += probs[n];
  }
  if (std::abs(sum - 1.0) >= kProbabilityTolerance) {
    throw std::invalid_argument(
        fmt::format("Born probabilities sum to {:.12f}; detector is not complete", sum));
  }
  for (double& x : probs) x /= sum;
  return probs;
}

}  // namespace

AVector noisy_zero_element(const QubitNoise& noise) {
  if (!(noise.p01 >= 0.0 && noise.p01 <= 1.0 && noise.p10 >= 0.0 && noise.p10 <= 1.0)) {
    throw std::invalid_argument(
        fmt::format("flip probabilities must lie in [0, 1], got p01={} p10={}", noise.p01,
                    noise.p10));
  }
  AVector a{(1.0 - noise.p01 + noise.p10) / 2.0, noise.tilt_x, noise.tilt_y,
            (1.0 - noise.p01 - noise.p10) / 2.0};
  // Both a and its complement need a0 >= |(a1, a2, a3)|.
  const double headroom = std::min(a.a0, 1.0 - a.a0);
  const double max_tilt = std::sqrt(std::max(0.0, headroom * headroom - a.a3 * a.a3));
  const double tilt = std::hypot(noise.tilt_x, noise.tilt_y);
  if (tilt > max_tilt + kPovmTolerance) {
    throw std::invalid_argument(fmt::format(
        "tilt magnitude {:.6f} makes the detector non-positive; maximum allowed is {:.6f}", tilt,
        max_tilt));
  }
  return a;
}

DetectorPovm make_noisy_detector(const NoisySpec& spec) {
  if (spec.qubits.empty()) throw std::invalid_argument("noise spec lists no qubits");
  std::vector<DetectorPovm> factors;
  factors.reserve(spec.qubits.size());
  for (const auto& q : spec.qubits) factors.push_back(single_qubit_povm(noisy_zero_element(q)));
  return product_povm(factors);
}

std::vector<double> born_probabilities(const DetectorPovm& p, const ComplexMatrix& rho) {
  return sanitize(born_from_coeffs(p, pauli_expand(rho, p.num_qubits())));
}

std::vector<std::uint64_t> sample_from_probabilities(std::span<const double> probabilities,
                                                     std::uint64_t shots, CounterRng& rng) {
  for (double p : probabilities) {
    if (!(p >= 0.0)) throw std::invalid_argument(fmt::format("probability {} is negative", p));
  }
  std::vector<double> cdf(probabilities.size());
  std::partial_sum(probabilities.begin(), probabilities.end(), cdf.begin());
  std::vector<std::uint64_t> counts(probabilities.size(), 0);
  if (counts.empty()) return counts;
  if (std::abs(cdf.back() - 1.0) > 1e-9) {
    throw std::invalid_argument(fmt::format("probabilities sum to {:.12f}, expected 1", cdf.back()));
  }
  // Guard the last bin against round-off in the cumulative sum.
  std::size_t last = 0;
  for (std::size_t n = 0; n < probabilities.size(); ++n) {
    if (probabilities[n] > 0.0) last = n;
  }
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = rng.next_double() * cdf.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t n = static_cast<std::size_t>(it - cdf.begin());
    if (n > last) n = last;
    ++counts[n];
  }
  return counts;
}

std::vector<std::uint64_t> sample_counts(const DetectorPovm& p, const TestState& s,
                                         std::uint64_t shots, CounterRng& rng) {
  if (s.num_qubits != p.num_qubits()) {
    throw std::invalid_argument(fmt::format("state has {} qubits but detector has {}",
                                            s.num_qubits, p.num_qubits()));
  }
  const std::vector<double> probs = born_probabilities(p, s.density);
  return sample_from_probabilities(probs, shots, rng);
}

void CountsDataset::validate() const {
  if (num_qubits < 1) throw std::invalid_argument("counts dataset: num_qubits must be >= 1");
  if (shots_per_circuit == 0) throw std::invalid_argument("counts dataset: shots must be > 0");
  if (runs.empty()) throw std::invalid_argument("counts dataset: no runs");
  const std::vector<TestState> states = test_state_set(num_qubits, true);
  const std::size_t outcomes = std::size_t{1} << num_qubits;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const auto& circuits = runs[r].circuits;
    if (circuits.size() != states.size()) {
      throw std::invalid_argument(fmt::format("runs[{}]: expected {} circuits, got {}", r,
                                              states.size(), circuits.size()));
    }
    for (std::size_t c = 0; c < circuits.size(); ++c) {
      const auto& rec = circuits[c];
      if (rec.state != states[c].label()) {
        throw std::invalid_argument(fmt::format(
            "runs[{}].circuits[{}]: state '{}' out of canonical order (expected '{}')", r, c,
            rec.state, states[c].label()));
      }
      if (rec.counts.size() != outcomes) {
        throw std::invalid_argument(fmt::format("runs[{}].circuits[{}]: expected {} outcomes, got {}",
                                                r, c, outcomes, rec.counts.size()));
      }
      const std::uint64_t total = std::accumulate(rec.counts.begin(), rec.counts.end(),
                                                  std::uint64_t{0});
      if (total != shots_per_circuit) {
        throw std::invalid_argument(fmt::format(
            "runs[{}].circuits[{}]: counts sum to {} but shots is {}", r, c, total,
            shots_per_circuit));
      }
    }
  }
}

CountsDataset simulate_qdt_experiment(const DetectorPovm& p, std::uint64_t shots, std::size_t runs,
                                      std::uint64_t seed, unsigned workers) {
  if (shots == 0) throw std::invalid_argument("simulate: shots must be > 0");
  if (runs == 0) throw std::invalid_argument("simulate: runs must be > 0");
  const std::vector<TestState> states = test_state_set(p.num_qubits(), true);

  std::vector<std::vector<double>> probs;
  probs.reserve(states.size());
  for (const auto& s : states) probs.push_back(born_probabilities(p, s.density));

  CountsDataset d;
  d.num_qubits = p.num_qubits();
  d.shots_per_circuit = shots;
  d.seed = seed;
  d.runs.resize(runs);
  for (auto& run : d.runs) {
    run.circuits.resize(states.size());
    for (std::size_t c = 0; c < states.size(); ++c) run.circuits[c].state = states[c].label();
  }

  const CounterRng root(seed);
  const std::size_t total = runs * states.size();
  parallel_for(
      total,
      [&](std::size_t job) {
        const std::size_t r = job / states.size();
        const std::size_t c = job % states.size();
        CounterRng rng = root.substream(r).substream(c);
        d.runs[r].circuits[c].counts = sample_from_probabilities(probs[c], shots, rng);
      },
      workers);
  return d;
}

FrequencyTable exact_frequencies(const DetectorPovm& p, std::span<const TestState> states) {
  FrequencyTable f(p.num_outcomes(), states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    const std::vector<double> probs = born_probabilities(p, states[i].density);
    for (std::size_t n = 0; n < probs.size(); ++n) f(n, i) = probs[n];
  }
  return f;
}

std::vector<double> simulate_state_measurement(const DetectorPovm& p, const ComplexMatrix& rho,
                                               std::uint64_t shots, std::size_t runs,
                                               std::uint64_t seed) {
  const Complex trace = rho.trace();
  if (std::abs(trace - Complex(1.0, 0.0)) > 1e-10) {
    throw std::invalid_argument(fmt::format("state has trace {:.12f}, expected 1", trace.real()));
  }
  if (herm_eig(rho).eigenvalues.minCoeff() < -kNegativeEigenvalueTolerance) {
    throw std::invalid_argument("state is not positive semidefinite");
  }
  std::vector<double> probs = born_probabilities(p, rho);
  if (shots == 0) return probs;
  if (runs == 0) throw std::invalid_argument("simulate: runs must be > 0");

  std::vector<std::uint64_t> pooled(probs.size(), 0);
  const CounterRng root(seed);
  for (std::size_t r = 0; r < runs; ++r) {
    CounterRng rng = root.substream(r);
    const auto counts = sample_from_probabilities(probs, shots, rng);
    for (std::size_t n = 0; n < counts.size(); ++n) pooled[n] += counts[n];
  }
  const double total = static_cast<double>(shots) * static_cast<double>(runs);
  std::vector<double> out(pooled.size());
  for (std::size_t n = 0; n < pooled.size(); ++n) out[n] = static_cast<double>(pooled[n]) / total;
  return out;
}

}  // namespace qdt
