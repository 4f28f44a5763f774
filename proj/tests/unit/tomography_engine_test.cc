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

#include "qdt/tomography_engine.h"

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

#include "qdt/detector_simulator.h"
#include "support/mle_monitor.h"
#include "support/oracles.h"

namespace qdt {
namespace {

const double kLog2 = std::numbers::ln2;

CountsDataset one_qubit_dataset(std::vector<std::vector<std::uint64_t>> zero_counts, std::uint64_t shots) {
  CountsDataset d;
  d.num_qubits = 1;
  d.shots_per_circuit = shots;
  for (const auto& run_counts : zero_counts) {
    Run run;
    const auto states = test_state_set(1);
    for (std::size_t i = 0; i < states.size(); ++i) {
      run.circuits.push_back({states[i].label(), {run_counts[i], shots - run_counts[i]}});
    }
    d.runs.push_back(run);
  }
  return d;
}

// One update written directly from the formula with explicit matrices.
std::vector<ComplexMatrix> naive_step(const std::vector<ComplexMatrix>& pi, const std::vector<TestState>& states,
                                      const FrequencyTable& f) {
  const Eigen::Index dim = pi[0].rows();
  std::vector<ComplexMatrix> r(pi.size(), ComplexMatrix::Zero(dim, dim));
  for (std::size_t m = 0; m < pi.size(); ++m) {
    for (std::size_t j = 0; j < states.size(); ++j) {
      const double p = std::max(oracle::born(pi[m], states[j].density), 1e-12);
      const double fm = f(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(j));
      if (fm > 0) r[m] += (fm / p) * states[j].density;
    }
  }
  ComplexMatrix s = ComplexMatrix::Zero(dim, dim);
  for (std::size_t m = 0; m < pi.size(); ++m) s += r[m] * pi[m] * r[m];
  s = (s + s.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(s);
  const ComplexMatrix w = es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                          es.eigenvectors().adjoint();
  std::vector<ComplexMatrix> out;
  for (std::size_t m = 0; m < pi.size(); ++m) {
    const ComplexMatrix rn = w * r[m];
    ComplexMatrix next = rn * pi[m] * rn.adjoint();
    out.push_back((next + next.adjoint()) / 2.0);
  }
  return out;
}

TEST(Frequencies, PoolsRuns) {
  auto d = one_qubit_dataset({{5000, 8192, 4096, 4096, 4096, 4096}, {4000, 8192, 4096, 4096, 4096, 4096}}, 8192);
  const FrequencyTable f = frequencies(d);
  EXPECT_DOUBLE_EQ(f(0, 0), 9000.0 / 16384.0);
  EXPECT_DOUBLE_EQ(f(1, 0), 7384.0 / 16384.0);
  EXPECT_DOUBLE_EQ(f(0, 1), 1.0);
}

TEST(Frequencies, PoolingEqualsConcatenation) {
  const DetectorPovm p = make_noisy_detector({{{0.05, 0.02, 0, 0}}});
  const CountsDataset a = simulate_qdt_experiment(p, 500, 3, 1);
  const CountsDataset b = simulate_qdt_experiment(p, 500, 5, 2);
  CountsDataset joined = a;
  joined.runs.insert(joined.runs.end(), b.runs.begin(), b.runs.end());
  const FrequencyTable expected = (3.0 * frequencies(a) + 5.0 * frequencies(b)) / 8.0;
  EXPECT_LT((frequencies(joined) - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(LogLikelihood, ClosedFormCases) {
  const auto states = test_state_set(1);
  const DetectorPovm ideal = ideal_computational_povm(1);
  const FrequencyTable f = exact_frequencies(ideal, states);
  EXPECT_NEAR(log_likelihood(ideal, states, f), -4 * kLog2, 1e-14);
  const DetectorPovm uniform = single_qubit_povm({0.5, 0, 0, 0});
  std::mt19937_64 rng(3);
  const DetectorPovm other = oracle::povm_from(oracle::random_povm_matrices(1, rng), 1);
  EXPECT_NEAR(log_likelihood(uniform, states, exact_frequencies(other, states)), -6 * kLog2, 1e-13);
}

TEST(LogLikelihood, TruePovmBeatsPerturbations) {
  std::mt19937_64 rng(21);
  const auto states = test_state_set(1);
  const DetectorPovm truth = oracle::povm_from(oracle::random_povm_matrices(1, rng), 1);
  const FrequencyTable f = exact_frequencies(truth, states);
  const double best = log_likelihood(truth, states, f);
  std::normal_distribution<double> g(0.0, 0.02);
  for (int k = 0; k < 20; ++k) {
    AVector a = truth.avector(0);
    a.a0 += g(rng);
    a.a1 += g(rng);
    a.a2 += g(rng);
    a.a3 += g(rng);
    EXPECT_GE(best, log_likelihood(single_qubit_povm(a), states, f));
  }
}

TEST(MleStep, MatchesDirectFormula) {
  std::mt19937_64 rng(4);
  const auto states = test_state_set(2);
  const DetectorPovm truth = oracle::povm_from(oracle::random_povm_matrices(2, rng), 2);
  const DetectorPovm start = oracle::povm_from(oracle::random_povm_matrices(2, rng), 2);
  const FrequencyTable f = exact_frequencies(truth, states);
  const auto expected = naive_step(start.matrices(), states, f);
  const auto got = mle_step(start, states, f).matrices();
  for (std::size_t n = 0; n < got.size(); ++n) EXPECT_LT((got[n] - expected[n]).norm(), 1e-12);
}

TEST(MleStep, ExactDataIsAFixedPoint) {
  std::mt19937_64 rng(5);
  const auto states = test_state_set(1);
  const DetectorPovm truth = oracle::povm_from(oracle::random_povm_matrices(1, rng), 1);
  const DetectorPovm next = mle_step(truth, states, exact_frequencies(truth, states));
  double step = 0;
  for (std::size_t n = 0; n < 2; ++n) step += (next.matrices()[n] - truth.matrices()[n]).norm();
  EXPECT_LT(step, 1e-9);
}

TEST(MleStep, PreservesValidity) {
  std::mt19937_64 rng(6);
  const auto states = test_state_set(2);
  const DetectorPovm truth = oracle::povm_from(oracle::random_povm_matrices(2, rng), 2);
  const DetectorPovm next = mle_step(ideal_computational_povm(2), states, exact_frequencies(truth, states));
  const PovmValidityReport v = check_povm(next);
  EXPECT_LT(v.completeness_residual, 1e-8);
  EXPECT_GE(v.min_eigenvalue, -1e-8);
}

TEST(RunMle, DampsStepsThatLowerTheLikelihood) {
  // The ninth POVM of this stream makes the plain update lose likelihood on
  // its second step from the uniform start.
  std::mt19937_64 rng(20240601);
  DetectorPovm truth;
  for (int k = 0; k < 9; ++k) truth = oracle::povm_from(oracle::random_povm_matrices(1, rng), 1);
  const auto states = test_state_set(1);
  const FrequencyTable f = exact_frequencies(truth, states);
  const DetectorPovm first = mle_step(single_qubit_povm({0.5, 0, 0, 0}), states, f);
  const DetectorPovm second = mle_step(first, states, f);
  ASSERT_LT(log_likelihood(second, states, f), log_likelihood(first, states, f) - 1e-3);

  testing::MleMonitor monitor;
  const MleResult r = run_mle(f, 1, {}, monitor.observer());
  EXPECT_GT(r.damped_steps, 0U);
  EXPECT_TRUE(r.converged);
  EXPECT_TRUE(monitor.ok()) << monitor.worst_likelihood_drop;
  for (std::size_t n = 0; n < 2; ++n)
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(r.povm.element(n)[i], truth.element(n)[i], 1e-6);
}

TEST(RunMle, IdealDetectorFromInfiniteShots) {
  testing::MleMonitor monitor;
  const MleResult r = run_mle(exact_frequencies(ideal_computational_povm(1), test_state_set(1)), 1, {},
                              monitor.observer());
  EXPECT_TRUE(r.converged);
  EXPECT_LT(r.final_step_norm, 1e-10);
  EXPECT_LT(avector_distance(r.povm.avector(0), {0.5, 0, 0, 0.5}), 1e-6);
  EXPECT_TRUE(monitor.ok()) << monitor.worst_completeness << " " << monitor.worst_min_eigenvalue << " "
                            << monitor.worst_likelihood_drop;
  EXPECT_EQ(monitor.iterates, r.iterations);
}

TEST(RunMle, RecoversNoisyDetectorFromSamples) {
  const AVector truth{0.54, 0.003, 0.003, 0.41};
  const CountsDataset d = simulate_qdt_experiment(single_qubit_povm(truth), 8192, 100, 12);
  const MleResult r = run_mle(d);
  ASSERT_TRUE(r.converged);
  const AVector got = r.povm.avector(0);
  EXPECT_NEAR(got.a0, truth.a0, 5e-3);
  EXPECT_NEAR(got.a1, truth.a1, 5e-3);
  EXPECT_NEAR(got.a2, truth.a2, 5e-3);
  EXPECT_NEAR(got.a3, truth.a3, 5e-3);
  EXPECT_FALSE(r.log_likelihood_trace.empty());
}

TEST(RunMle, IsDeterministic) {
  const CountsDataset d = simulate_qdt_experiment(make_noisy_detector({{{0.05, 0.03, 0.01, 0}}}), 2000, 10, 4);
  EXPECT_EQ(run_mle(d).povm, run_mle(d).povm);
}

TEST(RunMle, ReportsNonConvergenceAtIterationCap) {
  MleConfig cfg;
  cfg.max_iterations = 3;
  const CountsDataset d = simulate_qdt_experiment(make_noisy_detector({{{0.05, 0.03, 0, 0}}}), 2000, 10, 4);
  const MleResult r = run_mle(d, cfg);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 3U);
  EXPECT_TRUE(check_povm(r.povm).is_valid);
}

TEST(RunMle, RejectsBadConfig) {
  MleConfig cfg;
  cfg.epsilon = 0;
  EXPECT_THROW(run_mle(exact_frequencies(ideal_computational_povm(1), test_state_set(1)), 1, cfg),
               std::invalid_argument);
  cfg = {};
  cfg.initial_povm = single_qubit_povm({0.7, 0, 0, 0.5});  // Pi^(1) not positive
  EXPECT_THROW(run_mle(exact_frequencies(ideal_computational_povm(1), test_state_set(1)), 1, cfg),
               std::invalid_argument);
}

// Estimation error should fall roughly as shots^(-1/2).
TEST(RunMle, ErrorShrinksWithShots) {
  const AVector truth{0.53, 0.01, -0.01, 0.43};
  std::vector<double> xs, ys;
  for (std::uint64_t shots : {250U, 1000U, 4000U, 16000U}) {
    double err = 0;
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      const CountsDataset d = simulate_qdt_experiment(single_qubit_povm(truth), shots, 10, 100 + seed);
      err += avector_distance(run_mle(d).povm.avector(0), truth);
    }
    xs.push_back(std::log(static_cast<double>(shots)));
    ys.push_back(std::log(err / 8));
  }
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / 4, my = std::accumulate(ys.begin(), ys.end(), 0.0) / 4;
  double num = 0, den = 0;
  for (int i = 0; i < 4; ++i) {
    num += (xs[i] - mx) * (ys[i] - my);
    den += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = num / den;
  EXPECT_GE(slope, -1.0);
  EXPECT_LE(slope, -0.25);
}

TEST(Bootstrap, IdenticalRunsGiveZeroSpread) {
  const CountsDataset base = simulate_qdt_experiment(make_noisy_detector({{{0.05, 0.03, 0, 0}}}), 4000, 1, 8);
  CountsDataset d = base;
  for (int k = 0; k < 9; ++k) d.runs.push_back(base.runs[0]);
  const BootstrapReport r = bootstrap(d, 20, 1);
  EXPECT_EQ(r.excluded, 0U);
  for (const auto& s : r.stddev)
    for (double x : s.coeffs()) EXPECT_LE(x, 1e-14);
}

TEST(Bootstrap, SpreadIsStableInResampleCount) {
  const CountsDataset d = simulate_qdt_experiment(single_qubit_povm({0.54, 0.003, 0.003, 0.41}), 8192, 100, 31);
  const BootstrapReport r100 = bootstrap(d, 100, 5);
  const BootstrapReport r200 = bootstrap(d, 200, 6);
  EXPECT_EQ(r100.samples.size(), 100U);
  for (std::size_t i = 0; i < 4; ++i) {
    const double a = r100.stddev[0][i], b = r200.stddev[0][i];
    EXPECT_GE(a, 5e-5);
    EXPECT_LE(a, 3e-3);
    EXPECT_LT(std::abs(a - b) / b, 0.3) << "coefficient " << i;
  }
}

TEST(Bootstrap, IndependentOfWorkerCount) {
  const CountsDataset d = simulate_qdt_experiment(make_noisy_detector({{{0.05, 0.03, 0, 0}}}), 2000, 10, 8);
  const BootstrapReport a = bootstrap(d, 8, 3, {}, 1);
  const BootstrapReport b = bootstrap(d, 8, 3, {}, 4);
  EXPECT_EQ(a.stddev, b.stddev);
  EXPECT_EQ(a.mean, b.mean);
}

TEST(Bootstrap, NeedsTwoRuns) {
  const CountsDataset d = simulate_qdt_experiment(ideal_computational_povm(1), 100, 1, 8);
  EXPECT_THROW(bootstrap(d, 10, 0), std::invalid_argument);
}

}  // namespace
}  // namespace qdt
