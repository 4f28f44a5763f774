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
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qdt/detector_model.h"

namespace qdt {

/// Left-stochastic map from ideal outcome probabilities (columns, index m) to
/// observed ones (rows, index n). Bitstring indexing follows outcome_index.
class ResponseMatrix {
 public:
  ResponseMatrix() = default;
  /// Throws std::invalid_argument unless every column sums to one within 1e-10.
  ResponseMatrix(int num_qubits, Eigen::MatrixXd entries);

  int num_qubits() const { return num_qubits_; }
  const Eigen::MatrixXd& entries() const { return entries_; }
  /// True when some entry is below -1e-10, which only crosstalk matrices built
  /// from sizable off-diagonal Pauli terms can produce.
  bool has_negative_entries() const { return has_negative_; }

 private:
  int num_qubits_ = 0;
  Eigen::MatrixXd entries_;
  bool has_negative_ = false;
};

/// Per-qubit (Pi^(0), Pi^(1)) a-vectors.
using ReadoutPair = std::pair<AVector, AVector>;

/// M_{n;m} = prod_j (a0_j^(n_j) + (-1)^(m_j) a3_j^(n_j)); a1 and a2 are ignored.
ResponseMatrix build_response_matrix(std::span<const ReadoutPair> qubits);

struct CrosstalkResponse {
  ResponseMatrix matrix;
  /// Sum over outcomes of |c| for Pauli terms carrying any X or Y factor.
  double excluded_weight = 0.0;
};

/// M_hat_{n;m} = sum over I in {0,3}^N of c_I^(n) (-1)^(m . I/3): the response of
/// an arbitrary N-qubit detector restricted to its I/Z Pauli support.
CrosstalkResponse build_response_matrix_crosstalk(const DetectorPovm& p);

enum class MitigationMethod { InversionCutoff, LeastSquares };

std::string_view method_name(MitigationMethod m);

struct MitigationResult {
  std::vector<double> corrected;
  MitigationMethod method = MitigationMethod::InversionCutoff;
  double residual = 0.0;  // ||M P - P_tilde||_2
  std::size_t iterations = 0;
  bool converged = true;
  double projected_gradient_norm = 0.0;
  bool kkt_satisfied = true;
  /// Objective 0.5 ||M P - P_tilde||^2 after each accepted iterate, when requested.
  std::vector<double> objective_trace;
};

inline constexpr double kMaxInversionCondition = 1e8;

/// P = M^-1 P_tilde with negative entries set to zero, then renormalized.
/// Throws std::invalid_argument when cond_2(M) exceeds max_condition.
MitigationResult mitigate_inversion(const ResponseMatrix& m, std::span<const double> p_tilde,
                                    double max_condition = kMaxInversionCondition);

struct LsqOptions {
  double tol = 1e-10;
  std::size_t max_iters = 100'000;
  bool record_objective = false;
};

/// argmin over the probability simplex of ||M P - P_tilde||^2 by accelerated
/// projected gradient with a monotone restart. Terminates when the projected
/// gradient norm drops to tol; otherwise returns with converged == false.
MitigationResult mitigate_lsq(const ResponseMatrix& m, std::span<const double> p_tilde,
                              const LsqOptions& options = {});

/// Exact Euclidean projection onto {x >= 0, sum x = 1} (sort-based).
std::vector<double> project_onto_simplex(std::span<const double> v);

/// The 2^N Z-gate placements K, in outcome order, starting with all zeros.
struct TwirlPlan {
  int num_qubits = 0;
  std::vector<std::string> placements;
};

TwirlPlan twirl_plan(int num_qubits);

/// Z(K) rho Z(K) for a placement bitstring K.
ComplexMatrix apply_z_twirl(const ComplexMatrix& rho, std::string_view placement);

/// Elementwise mean of one distribution per placement, in twirl_plan order.
std::vector<double> average_twirled(std::span<const std::vector<double>> distributions,
                                    int num_qubits);

}  // namespace qdt
