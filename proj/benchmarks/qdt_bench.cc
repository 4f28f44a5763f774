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


#include <cstdint>
#include <vector>

#include <benchmark/benchmark.h>

#include "qdt/detector_simulator.h"
#include "qdt/mitigation.h"
#include "qdt/tomography_engine.h"

namespace {

qdt::DetectorPovm noisy(int n) {
  qdt::NoisySpec spec;
  for (int q = 0; q < n; ++q) spec.qubits.push_back({0.04 + 0.005 * q, 0.02, 0.01, -0.01});
  return qdt::make_noisy_detector(spec);
}

void BM_MleStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto states = qdt::test_state_set(n);
  const qdt::FrequencyTable f = qdt::exact_frequencies(noisy(n), states);
  qdt::DetectorPovm p = qdt::ideal_computational_povm(n);
  for (auto _ : state) benchmark::DoNotOptimize(qdt::mle_step(p, states, f));
}
BENCHMARK(BM_MleStep)->Arg(1)->Arg(2)->Arg(3);

void BM_RunMle(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const qdt::CountsDataset d = qdt::simulate_qdt_experiment(noisy(n), 8192, 10, 1);
  for (auto _ : state) benchmark::DoNotOptimize(qdt::run_mle(d));
}
BENCHMARK(BM_RunMle)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_Simulate(benchmark::State& state) {
  const qdt::DetectorPovm p = noisy(2);
  for (auto _ : state) benchmark::DoNotOptimize(qdt::simulate_qdt_experiment(p, 8192, 10, 3, 1));
}
BENCHMARK(BM_Simulate)->Unit(benchmark::kMillisecond);

void BM_MitigateLsq(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<qdt::ReadoutPair> qubits;
  for (int q = 0; q < n; ++q) {
    const qdt::AVector a = qdt::noisy_zero_element({0.05, 0.03, 0.0, 0.0});
    qubits.emplace_back(a, a.complement());
  }
  const qdt::ResponseMatrix m = qdt::build_response_matrix(qubits);
  std::vector<double> ideal(std::size_t{1} << n, 0.0);
  ideal.front() = ideal.back() = 0.5;
  const Eigen::VectorXd observed = m.entries() * Eigen::Map<const Eigen::VectorXd>(ideal.data(), ideal.size());
  const std::vector<double> pt(observed.data(), observed.data() + observed.size());
  for (auto _ : state) benchmark::DoNotOptimize(qdt::mitigate_lsq(m, pt));
}
BENCHMARK(BM_MitigateLsq)->Arg(2)->Arg(5)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
