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

#include "qdt/mitigation.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace qdt {
namespace {

Eigen::VectorXd probability_vector(std::span<const double> p, Eigen::Index dim) {
  if (static_cast<Eigen::Index>(p.size()) != dim) {
    throw std::invalid_argument(
        fmt::format("distribution has {} entries, expected {}", p.size(), dim));
  }
  double sum = 0.0;
  for (double x : p) {
    if (!(x >= 0.0)) {
      throw std::invalid_argument(fmt::format("distribution has a negative entry {}", x));
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw std::invalid_argument(fmt::format("distribution sums to {:.9f}, expected 1", sum));
  }
  return Eigen::Map<const Eigen::VectorXd>(p.data(), dim);
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

ResponseMatrix::ResponseMatrix(int num_qubits, Eigen::MatrixXd entries)
    : num_qubits_(num_qubits), entries_(std::move(entries)) {
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  if (num_qubits < 1 || entries_.rows() != dim || entries_.cols() != dim) {
    throw std::invalid_argument(fmt::format("response matrix for {} qubits must be {}x{}, got {}x{}",
                                            num_qubits, dim, dim, entries_.rows(), entries_.cols()));
  }
  for (Eigen::Index c = 0; c < dim; ++c) {
    const double sum = entries_.col(c).sum();
    if (std::abs(sum - 1.0) > 1e-10) {
      throw std::invalid_argument(
          fmt::format("response matrix column {} sums to {:.12f}; not left-stochastic", c, sum));
    }
  }
  has_negative_ = entries_.minCoeff() < -1e-10;
}

ResponseMatrix build_response_matrix(std::span<const ReadoutPair> qubits) {
  const int n = static_cast<int>(qubits.size());
  if (n < 1) throw std::invalid_argument("response matrix needs at least one qubit");
  for (int j = 0; j < n; ++j) {
    const auto& [zero, one] = qubits[j];
    const double residual = std::max({std::abs(zero.a0 + one.a0 - 1.0), std::abs(zero.a1 + one.a1),
                                      std::abs(zero.a2 + one.a2), std::abs(zero.a3 + one.a3)});
    if (residual > kPovmTolerance) {
      throw std::invalid_argument(fmt::format(
          "qubit {}: a-vectors violate completeness (residual {:.3e})", j, residual));
    }
  }
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXd m(dim, dim);
  for (Eigen::Index row = 0; row < dim; ++row) {
    for (Eigen::Index col = 0; col < dim; ++col) {
      double v = 1.0;
      for (int j = 0; j < n; ++j) {
        const bool nj = (row >> (n - 1 - j)) & 1;
        const bool mj = (col >> (n - 1 - j)) & 1;
        const AVector& a = nj ? qubits[j].second : qubits[j].first;
        v *= a.a0 + (mj ? -a.a3 : a.a3);
      }
      m(row, col) = v;
    }
  }
  return ResponseMatrix(n, std::move(m));
}

CrosstalkResponse build_response_matrix_crosstalk(const DetectorPovm& p) {
  const int n = p.num_qubits();
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  double excluded = 0.0;
  for (std::size_t outcome = 0; outcome < p.num_outcomes(); ++outcome) {
    const PauliCoeffTensor& c = p.element(outcome);
    for (std::size_t i = 0; i < c.size(); ++i) {
      bool diagonal = true;
      std::size_t z_mask = 0;  // qubits carrying sigma_z, as outcome bits
      for (int q = 0; q < n; ++q) {
        const std::size_t digit = (i >> (2 * (n - 1 - q))) & 3U;
        if (digit == 1 || digit == 2) diagonal = false;
        if (digit == 3) z_mask |= std::size_t{1} << (n - 1 - q);
      }
      if (!diagonal) {
        excluded += std::abs(c[i]);
        continue;
      }
      for (Eigen::Index col = 0; col < dim; ++col) {
        const bool odd = std::popcount(static_cast<std::size_t>(col) & z_mask) & 1;
        m(static_cast<Eigen::Index>(outcome), col) += odd ? -c[i] : c[i];
      }
    }
  }
  return {ResponseMatrix(n, std::move(m)), excluded};
}

std::string_view method_name(MitigationMethod m) {
  return m == MitigationMethod::InversionCutoff ? "inversion" : "lsq";
}

MitigationResult mitigate_inversion(const ResponseMatrix& m, std::span<const double> p_tilde,
                                    double max_condition) {
  const Eigen::MatrixXd& a = m.entries();
  const Eigen::VectorXd observed = probability_vector(p_tilde, a.rows());
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues();
  const double cond = sv[sv.size() - 1] > 0.0 ? sv[0] / sv[sv.size() - 1]
                                              : std::numeric_limits<double>::infinity();
  if (!(cond <= max_condition)) {
    throw std::invalid_argument(fmt::format(
        "response matrix is ill-conditioned (condition number {:.3e} > {:.1e})", cond,
        max_condition));
  }
  Eigen::VectorXd p = a.partialPivLu().solve(observed);
  p = p.cwiseMax(0.0);
  const double total = p.sum();
  if (!(total > 0.0)) throw std::invalid_argument("inversion left no positive probability mass");
  p /= total;

  MitigationResult out;
  out.method = MitigationMethod::InversionCutoff;
  out.corrected = to_std(p);
  out.residual = (a * p - observed).norm();
  return out;
}

std::vector<double> project_onto_simplex(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("cannot project an empty vector onto the simplex");
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0, theta = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    cumulative += sorted[k];
    const double t = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (sorted[k] - t > 0.0) theta = t;
  }
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(v[i] - theta, 0.0);
  return out;
}

MitigationResult mitigate_lsq(const ResponseMatrix& m, std::span<const double> p_tilde,
                              const LsqOptions& options) {
  const Eigen::MatrixXd& a = m.entries();
  const Eigen::VectorXd observed = probability_vector(p_tilde, a.rows());
  const Eigen::MatrixXd gram = a.transpose() * a;
  const Eigen::VectorXd rhs = a.transpose() * observed;
  const double lipschitz = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gram).eigenvalues().maxCoeff();
  const double step = 1.0 / lipschitz;

  auto objective = [&](const Eigen::VectorXd& p) { return 0.5 * (a * p - observed).squaredNorm(); };
  auto gradient = [&](const Eigen::VectorXd& p) -> Eigen::VectorXd { return gram * p - rhs; };
  auto project = [](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    const std::vector<double> p = project_onto_simplex(std::span(v.data(), v.size()));
    return Eigen::Map<const Eigen::VectorXd>(p.data(), v.size());
  };
  auto projected_gradient_norm = [&](const Eigen::VectorXd& p) {
    return ((p - project(p - step * gradient(p))) / step).norm();
  };

  MitigationResult out;
  out.method = MitigationMethod::LeastSquares;

  // Start from the uniform distribution.
  Eigen::VectorXd x = Eigen::VectorXd::Constant(a.cols(), 1.0 / static_cast<double>(a.cols()));
  Eigen::VectorXd y = x;
  double momentum = 1.0;
  double fx = objective(x);
  if (options.record_objective) out.objective_trace.push_back(fx);
  out.projected_gradient_norm = projected_gradient_norm(x);
  out.converged = out.projected_gradient_norm <= options.tol;

  while (!out.converged && out.iterations < options.max_iters) {
    ++out.iterations;
    Eigen::VectorXd candidate = project(y - step * gradient(y));
    double fc = objective(candidate);
    if (fc > fx) {
      // Momentum overshot: restart from a plain projected-gradient step, which
      // cannot increase a convex objective with step 1/L.
      momentum = 1.0;
      candidate = project(x - step * gradient(x));
      fc = objective(candidate);
      y = candidate;
    } else {
      const double next_momentum = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
      y = candidate + ((momentum - 1.0) / next_momentum) * (candidate - x);
      momentum = next_momentum;
    }
    x = std::move(candidate);
    fx = fc;
    if (options.record_objective) out.objective_trace.push_back(fx);
    out.projected_gradient_norm = projected_gradient_norm(x);
    out.converged = out.projected_gradient_norm <= options.tol;
  }

  // KKT: with multiplier lambda from the support, inactive coordinates need
  // gradient - lambda >= 0.
  const Eigen::VectorXd g = gradient(x);
  double lambda = 0.0;
  int support = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0) {
      lambda += g[i];
      ++support;
    }
  }
  lambda /= std::max(support, 1);
  out.kkt_satisfied = true;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0 && g[i] - lambda < -10.0 * options.tol) out.kkt_satisfied = false;
  }

  out.corrected = to_std(x);
  out.residual = (a * x - observed).norm();
  return out;
}

TwirlPlan twirl_plan(int num_qubits) {
  if (num_qubits < 1) throw std::invalid_argument("twirl plan needs at least one qubit");
  TwirlPlan plan{num_qubits, {}};
  for (std::size_t k = 0; k < (std::size_t{1} << num_qubits); ++k) {
    plan.placements.push_back(outcome_bitstring(k, num_qubits));
  }
  return plan;
}

ComplexMatrix apply_z_twirl(const ComplexMatrix& rho, std::string_view placement) {
  const int n = qubit_count(rho);
  if (static_cast<int>(placement.size()) != n) {
    throw std::invalid_argument(
        fmt::format("placement '{}' does not match a {}-qubit state", placement, n));
  }
  const std::size_t mask = outcome_index(placement);
  // Z(K) is diagonal with entries (-1)^popcount(x & K).
  ComplexMatrix out = rho;
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    for (Eigen::Index c = 0; c < out.cols(); ++c) {
      const int parity = std::popcount((static_cast<std::size_t>(r) ^ static_cast<std::size_t>(c)) & mask) & 1;
      if (parity) out(r, c) = -out(r, c);
    }
  }
  return out;
}

std::vector<double> average_twirled(std::span<const std::vector<double>> distributions,
                                    int num_qubits) {
  const std::size_t count = std::size_t{1} << num_qubits;
  if (distributions.size() != count) {
    throw std::invalid_argument(fmt::format("Z-twirl average needs {} distributions, got {}", count,
                                            distributions.size()));
  }
  std::vector<double> mean(count, 0.0);
  for (const auto& d : distributions) {
    if (d.size() != count) {
      throw std::invalid_argument(
          fmt::format("twirled distribution has {} entries, expected {}", d.size(), count));
    }
    for (std::size_t n = 0; n < count; ++n) mean[n] += d[n];
  }
  for (double& x : mean) x /= static_cast<double>(count);
  return mean;
}

}  // namespace qdt
