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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qdt/detector_model.h"
#include "qdt/detector_simulator.h"
#include "qdt/parallel.h"
#include "qdt/state_library.h"

namespace qdt {

struct MleConfig {
  /// Stop once sum_n ||Pi_t^(n) - Pi_{t+1}^(n)||_F < epsilon.
  double epsilon = 1e-10;
  std::size_t max_iterations = 1'000'000;
  /// Lower bound on Tr(Pi rho) wherever it is divided by or logged.
  double probability_floor = 1e-12;
  /// Defaults to I / 2^N for every outcome.
  std::optional<DetectorPovm> initial_povm;
  /// Log-likelihood is recorded every trace_interval iterations.
  std::size_t trace_interval = 100;

  void validate(int num_qubits) const;
};

struct MleResult {
  DetectorPovm povm;
  std::size_t iterations = 0;
  double final_step_norm = 0.0;
  std::vector<double> log_likelihood_trace;
  bool converged = false;
  /// Largest max|S - S^dagger| seen before symmetrization.
  double max_s_asymmetry = 0.0;
  /// Iterations where the full update lowered the likelihood and a shorter
  /// step toward it was taken instead.
  std::size_t damped_steps = 0;
};

/// Snapshot handed to an IterationObserver after each update.
struct MleIterate {
  std::size_t iteration;                   // 1-based
  std::span<const ComplexMatrix> elements;  // the updated POVM
  double step_norm;
  double log_likelihood;
};

using IterationObserver = std::function<void(const MleIterate&)>;

/// Pooled relative frequencies, f(n, i) = counts(n | state i) / shots(state i).
FrequencyTable frequencies(const CountsDataset& d);

/// sum_{n,i} f(n,i) log max(Tr(Pi^(n) rho_i), floor); zero frequencies add nothing.
double log_likelihood(const DetectorPovm& p, std::span<const TestState> states,
                      const FrequencyTable& f, double probability_floor = 1e-12);

/// One fixed-point update Pi^(n) <- R^(n) Pi^(n) R^(n)dagger with
/// R^(n) = S^(-1/2) sum_i (f_{n,i} / p_{n,i}) rho_i and
/// S = sum_m A_m Pi^(m) A_m, A_m = sum_j (f_{m,j} / p_{m,j}) rho_j.
/// The update preserves positivity and sum_n Pi^(n) = I.
DetectorPovm mle_step(const DetectorPovm& p, std::span<const TestState> states,
                      const FrequencyTable& f, double probability_floor = 1e-12);

/// Iterates mle_step from cfg.initial_povm over the canonical test-state set.
/// When a full step would lower the log-likelihood, the step is repeatedly
/// shortened (A_m -> (1 - t) I + t A_m, t halved) until it does not.
/// A run that hits max_iterations returns with converged == false.
MleResult run_mle(const FrequencyTable& f, int num_qubits, const MleConfig& cfg = {},
                  const IterationObserver& observer = {});
MleResult run_mle(const CountsDataset& d, const MleConfig& cfg = {},
                  const IterationObserver& observer = {});

struct BootstrapReport {
  int num_qubits = 0;
  std::size_t num_resamples = 0;  // requested
  std::size_t excluded = 0;       // resamples whose MLE did not converge
  std::vector<PauliCoeffTensor> mean;    // per outcome
  std::vector<PauliCoeffTensor> stddev;  // per outcome, sample standard deviation
  std::vector<DetectorPovm> samples;     // converged estimates, in resample order
};

/// Non-parametric bootstrap over runs: each resample draws runs with
/// replacement (resample k uses CounterRng(seed).substream(k)), pools them and
/// reruns the MLE. More than 10% non-converged resamples is a ConvergenceError.
BootstrapReport bootstrap(const CountsDataset& d, std::size_t num_resamples = 100,
                          std::uint64_t seed = 0, const MleConfig& cfg = {},
                          unsigned workers = worker_count());

}  // namespace qdt
