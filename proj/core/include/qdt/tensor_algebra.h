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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qdt {

using Complex = std::complex<double>;

/// Dense complex operator on the 2^N-dimensional space of N qubits.
/// Dimensions are validated at every operation boundary rather than in the type.
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double kDefaultEigenvalueFloor = 1e-12;
inline constexpr double kNegativeEigenvalueTolerance = 1e-8;
inline constexpr double kHermitianImagTolerance = 1e-8;

bool is_power_of_two(std::size_t n);

/// Returns N for a square 2^N x 2^N matrix; throws std::invalid_argument otherwise.
int qubit_count(const ComplexMatrix& m);

/// Real coefficients of a Hermitian operator in the N-qubit Pauli basis.
///
/// Index order: i = sum_j i_j * 4^(N-1-j), qubit 0 most significant, with
/// i_j in {0,1,2,3} meaning {I, X, Y, Z}. The represented operator is
/// sum_i coeffs[i] * sigma_{i_0} (x) ... (x) sigma_{i_{N-1}}.
class PauliCoeffTensor {
 public:
  PauliCoeffTensor() = default;
  PauliCoeffTensor(int num_qubits, std::vector<double> coeffs);

  static PauliCoeffTensor zeros(int num_qubits);

  int num_qubits() const { return num_qubits_; }
  std::size_t size() const { return coeffs_.size(); }
  std::span<const double> coeffs() const { return coeffs_; }

  double operator[](std::size_t i) const { return coeffs_[i]; }
  double& operator[](std::size_t i) { return coeffs_[i]; }

  PauliCoeffTensor& operator+=(const PauliCoeffTensor& other);
  PauliCoeffTensor& operator*=(double s);

  friend bool operator==(const PauliCoeffTensor&, const PauliCoeffTensor&) = default;

 private:
  int num_qubits_ = 0;
  std::vector<double> coeffs_;
};

/// Single-qubit Pauli index digits (qubit 0 first) <-> flat index.
std::size_t pauli_index(std::span<const int> digits);
std::vector<int> pauli_digits(std::size_t index, int num_qubits);

/// sigma_0..sigma_3 as 2x2 matrices.
ComplexMatrix pauli_matrix(int which);

/// Full tensor-product Pauli string for a flat index.
ComplexMatrix pauli_string(std::size_t index, int num_qubits);

/// coeffs[i] = Tr(m * P_i) / 2^N. Rejects operators whose coefficients carry
/// an imaginary part above kHermitianImagTolerance.
PauliCoeffTensor pauli_expand(const ComplexMatrix& m, int num_qubits);

ComplexMatrix pauli_reconstruct(const PauliCoeffTensor& c);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Traces out the listed qubits. The remaining qubits keep their relative order.
ComplexMatrix partial_trace(const ComplexMatrix& m, int num_qubits,
                            std::span<const int> traced);

struct HermEigDecomp {
  Eigen::VectorXd eigenvalues;  // ascending
  ComplexMatrix eigenvectors;   // columns
};

HermEigDecomp herm_eig(const ComplexMatrix& m);

/// V diag(max(lambda, floor)^(-1/2)) V^dagger. Eigenvalues below
/// -kNegativeEigenvalueTolerance are rejected.
ComplexMatrix inv_sqrt_psd(const ComplexMatrix& m,
                           double eigenvalue_floor = kDefaultEigenvalueFloor);

double frobenius_norm(const ComplexMatrix& m);
double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace qdt
