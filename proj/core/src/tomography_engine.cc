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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "qdt/errors.h"

namespace qdt {
namespace {

double trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  // Re Tr(a b) for Hermitian a, b.
  return a.cwiseProduct(b.transpose()).sum().real();
}

void check_table(const FrequencyTable& f, std::size_t outcomes, std::size_t states) {
  if (static_cast<std::size_t>(f.rows()) != outcomes ||
      static_cast<std::size_t>(f.cols()) != states) {
    throw std::invalid_argument(fmt::format("frequency table is {}x{}, expected {}x{}", f.rows(),
                                            f.cols(), outcomes, states));
  }
}

std::vector<ComplexMatrix> densities(std::span<const TestState> states) {
  std::vector<ComplexMatrix> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(s.density);
  return out;
}

double log_likelihood_matrices(std::span<const ComplexMatrix> povm,
                               std::span<const ComplexMatrix> rhos, const FrequencyTable& f,
                               double floor) {
  double total = 0.0;
  for (std::size_t n = 0; n < povm.size(); ++n) {
    for (std::size_t i = 0; i < rhos.size(); ++i) {
      const double fn = f(n, i);
      if (fn == 0.0) continue;
      total += fn * std::log(std::max(trace_product(povm[n], rhos[i]), floor));
    }
  }
  return total;
}

// Likelihood drops smaller than this are treated as round-off.
constexpr double kDampingTrigger = 1e-11;
constexpr int kMaxDampingHalvings = 40;

struct StepResult {
  std::vector<ComplexMatrix> povm;
  double s_asymmetry;
};

// mix < 1 replaces each A_m by (1 - mix) I + mix A_m. Fixed points are the
// same and small mix gives a short step along the full update.
StepResult step_matrices(std::span<const ComplexMatrix> povm, std::span<const ComplexMatrix> rhos,
                         const FrequencyTable& f, double floor, double mix = 1.0) {
  const Eigen::Index dim = povm.front().rows();
  std::vector<ComplexMatrix> weighted(povm.size(), ComplexMatrix::Zero(dim, dim));
  for (std::size_t m = 0; m < povm.size(); ++m) {
    for (std::size_t j = 0; j < rhos.size(); ++j) {
      const double fm = f(m, j);
      if (fm == 0.0) continue;
      const double p = std::max(trace_product(povm[m], rhos[j]), floor);
      weighted[m] += (fm / p) * rhos[j];
    }
    if (mix < 1.0) {
      weighted[m] = mix * weighted[m] + (1.0 - mix) * ComplexMatrix::Identity(dim, dim);
    }
  }

  std::vector<ComplexMatrix> sandwiched(povm.size());
  ComplexMatrix s = ComplexMatrix::Zero(dim, dim);
  for (std::size_t m = 0; m < povm.size(); ++m) {
    sandwiched[m] = weighted[m] * povm[m] * weighted[m];
    s += sandwiched[m];
  }
  const double asymmetry = (s - s.adjoint()).cwiseAbs().maxCoeff();
  s = 0.5 * (s + s.adjoint());
  const ComplexMatrix s_inv_sqrt = inv_sqrt_psd(s);

  StepResult out{{}, asymmetry};
  out.povm.reserve(povm.size());
  for (std::size_t n = 0; n < povm.size(); ++n) {
    ComplexMatrix next = s_inv_sqrt * sandwiched[n] * s_inv_sqrt;
    out.povm.push_back(0.5 * (next + next.adjoint()));
  }
  return out;
}

double step_norm(std::span<const ComplexMatrix> a, std::span<const ComplexMatrix> b) {
  double total = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) total += frobenius_distance(a[n], b[n]);
  return total;
}

DetectorPovm uniform_povm(int num_qubits) {
  const std::size_t outcomes = std::size_t{1} << num_qubits;
  PauliCoeffTensor e = PauliCoeffTensor::zeros(num_qubits);
  e[0] = 1.0 / static_cast<double>(outcomes);
  return DetectorPovm(std::vector<PauliCoeffTensor>(outcomes, e));
}

}  // namespace

void MleConfig::validate(int num_qubits) const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("MLE epsilon must be positive");
  if (max_iterations == 0) throw std::invalid_argument("MLE max_iterations must be positive");
  if (!(probability_floor > 0.0)) throw std::invalid_argument("probability floor must be positive");
  if (initial_povm) {
    if (initial_povm->num_qubits() != num_qubits) {
      throw std::invalid_argument(fmt::format("initial POVM has {} qubits, expected {}",
                                              initial_povm->num_qubits(), num_qubits));
    }
    const PovmValidityReport r = check_povm(*initial_povm);
    if (!r.is_valid) {
      throw std::invalid_argument(fmt::format(
          "initial POVM is invalid (completeness residual {:.3e}, min eigenvalue {:.3e})",
          r.completeness_residual, r.min_eigenvalue));
    }
  }
}

FrequencyTable frequencies(const CountsDataset& d) {
  d.validate();
  const std::size_t outcomes = std::size_t{1} << d.num_qubits;
  const std::size_t states = d.runs.front().circuits.size();
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(outcomes, states);
  Eigen::VectorXd shots = Eigen::VectorXd::Zero(states);
  for (const auto& run : d.runs) {
    for (std::size_t i = 0; i < states; ++i) {
      const auto& c = run.circuits[i].counts;
      for (std::size_t n = 0; n < outcomes; ++n) counts(n, i) += static_cast<double>(c[n]);
      shots[i] += static_cast<double>(d.shots_per_circuit);
    }
  }
  for (std::size_t i = 0; i < states; ++i) {
    if (shots[i] <= 0.0) {
      throw std::invalid_argument(fmt::format("state {} has zero total shots", i));
    }
    counts.col(i) /= shots[i];
  }
  return counts;
}

double log_likelihood(const DetectorPovm& p, std::span<const TestState> states,
                      const FrequencyTable& f, double probability_floor) {
  check_table(f, p.num_outcomes(), states.size());
  const auto povm = p.matrices();
  const auto rhos = densities(states);
  return log_likelihood_matrices(povm, rhos, f, probability_floor);
}

DetectorPovm mle_step(const DetectorPovm& p, std::span<const TestState> states,
                      const FrequencyTable& f, double probability_floor) {
  check_table(f, p.num_outcomes(), states.size());
  const auto povm = p.matrices();
  const auto rhos = densities(states);
  return DetectorPovm::from_matrices(step_matrices(povm, rhos, f, probability_floor).povm);
}

MleResult run_mle(const FrequencyTable& f, int num_qubits, const MleConfig& cfg,
                  const IterationObserver& observer) {
  cfg.validate(num_qubits);
  const std::vector<TestState> states = test_state_set(num_qubits, true);
  check_table(f, std::size_t{1} << num_qubits, states.size());
  const auto rhos = densities(states);
  const double floor = cfg.probability_floor;

  std::vector<ComplexMatrix> current =
      (cfg.initial_povm ? *cfg.initial_povm : uniform_povm(num_qubits)).matrices();

  MleResult result;
  double ll = log_likelihood_matrices(current, rhos, f, floor);
  if (cfg.trace_interval > 0) result.log_likelihood_trace.push_back(ll);
  for (std::size_t t = 1; t <= cfg.max_iterations; ++t) {
    StepResult next = step_matrices(current, rhos, f, floor);
    double next_ll = log_likelihood_matrices(next.povm, rhos, f, floor);
    bool damped = false;
    // The plain update can lower the likelihood far from the optimum; back off
    // toward the current iterate until it does not.
    for (int k = 1; next_ll < ll - kDampingTrigger && k <= kMaxDampingHalvings; ++k) {
      next = step_matrices(current, rhos, f, floor, std::ldexp(1.0, -k));
      next_ll = log_likelihood_matrices(next.povm, rhos, f, floor);
      damped = true;
    }
    const double norm = step_norm(current, next.povm);
    current = std::move(next.povm);
    ll = next_ll;
    result.iterations = t;
    result.final_step_norm = norm;
    result.max_s_asymmetry = std::max(result.max_s_asymmetry, next.s_asymmetry);
    if (damped) ++result.damped_steps;
    // A damped step is short by construction, so it never signals convergence.
    result.converged = !damped && norm < cfg.epsilon;

    const bool sample = cfg.trace_interval > 0 && (t % cfg.trace_interval == 0 || result.converged ||
                                                   t == cfg.max_iterations);
    if (sample) result.log_likelihood_trace.push_back(ll);
    if (observer) observer(MleIterate{t, current, norm, ll});
    if (result.converged) break;
  }
  result.povm = DetectorPovm::from_matrices(current);
  return result;
}

MleResult run_mle(const CountsDataset& d, const MleConfig& cfg, const IterationObserver& observer) {
  return run_mle(frequencies(d), d.num_qubits, cfg, observer);
}

BootstrapReport bootstrap(const CountsDataset& d, std::size_t num_resamples, std::uint64_t seed,
                          const MleConfig& cfg, unsigned workers) {
  d.validate();
  if (d.runs.size() < 2) throw std::invalid_argument("bootstrap needs at least two runs");
  if (num_resamples == 0) throw std::invalid_argument("bootstrap needs at least one resample");
  cfg.validate(d.num_qubits);

  const std::size_t outcomes = std::size_t{1} << d.num_qubits;
  const std::size_t states = d.runs.front().circuits.size();
  const std::size_t run_count = d.runs.size();
  const double total_shots =
      static_cast<double>(run_count) * static_cast<double>(d.shots_per_circuit);

  std::vector<std::optional<DetectorPovm>> estimates(num_resamples);
  const CounterRng root(seed);
  parallel_for(
      num_resamples,
      [&](std::size_t k) {
        CounterRng rng = root.substream(k);
        FrequencyTable f = FrequencyTable::Zero(outcomes, states);
        for (std::size_t r = 0; r < run_count; ++r) {
          const Run& run = d.runs[rng.uniform_index(run_count)];
          for (std::size_t i = 0; i < states; ++i) {
            for (std::size_t n = 0; n < outcomes; ++n) {
              f(n, i) += static_cast<double>(run.circuits[i].counts[n]);
            }
          }
        }
        f /= total_shots;
        try {
          MleResult res = run_mle(f, d.num_qubits, cfg);
          if (res.converged) estimates[k] = std::move(res.povm);
        } catch (const ConvergenceError&) {
          // Counted as an exclusion below.
        }
      },
      workers);

  BootstrapReport report;
  report.num_qubits = d.num_qubits;
  report.num_resamples = num_resamples;
  for (auto& e : estimates) {
    if (e) {
      report.samples.push_back(std::move(*e));
    } else {
      ++report.excluded;
    }
  }
  if (10 * report.excluded > num_resamples) {
    throw ConvergenceError(fmt::format("bootstrap: {} of {} resamples failed to converge",
                                       report.excluded, num_resamples));
  }

  const double count = static_cast<double>(report.samples.size());
  report.mean.assign(outcomes, PauliCoeffTensor::zeros(d.num_qubits));
  report.stddev.assign(outcomes, PauliCoeffTensor::zeros(d.num_qubits));
  for (const auto& s : report.samples) {
    for (std::size_t n = 0; n < outcomes; ++n) report.mean[n] += s.element(n);
  }
  for (auto& m : report.mean) m *= 1.0 / count;
  if (report.samples.size() > 1) {
    for (const auto& s : report.samples) {
      for (std::size_t n = 0; n < outcomes; ++n) {
        for (std::size_t i = 0; i < report.stddev[n].size(); ++i) {
          const double dev = s.element(n)[i] - report.mean[n][i];
          report.stddev[n][i] += dev * dev;
        }
      }
    }
    for (auto& sd : report.stddev) {
      for (std::size_t i = 0; i < sd.size(); ++i) sd[i] = std::sqrt(sd[i] / (count - 1.0));
    }
  }
  return report;
}

}  // namespace qdt
