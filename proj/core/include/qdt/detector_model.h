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

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qdt/tensor_algebra.h"

namespace qdt {

inline constexpr double kPovmTolerance = 1e-8;

/// Pauli coefficients (a0, a1, a2, a3) of a single-qubit POVM element.
struct AVector {
  double a0 = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;

  double bloch_length() const;
  /// Eigenvalues of the element are a0 +/- bloch_length().
  double min_eigenvalue() const { return a0 - bloch_length(); }
  /// (1,0,0,0) - a: the other element of a two-outcome POVM.
  AVector complement() const { return {1.0 - a0, 0.0 - a1, 0.0 - a2, 0.0 - a3}; }
  std::array<double, 4> as_array() const { return {a0, a1, a2, a3}; }

  friend bool operator==(const AVector&, const AVector&) = default;
};

double avector_distance(const AVector& a, const AVector& b);

/// Outcome index <-> bitstring. Leftmost character is qubit 0, which is the most
/// significant bit of the index.
std::string outcome_bitstring(std::size_t outcome, int num_qubits);
std::size_t outcome_index(std::string_view bits);

/// An N-qubit detector: 2^N POVM elements in Pauli-coefficient form, indexed
/// by outcome. Construction checks shape only; use check_povm for validity.
class DetectorPovm {
 public:
  DetectorPovm() = default;
  explicit DetectorPovm(std::vector<PauliCoeffTensor> elements);
  DetectorPovm(int num_qubits, const std::map<std::string, PauliCoeffTensor>& elements);

  static DetectorPovm from_matrices(std::span<const ComplexMatrix> elements);

  int num_qubits() const { return num_qubits_; }
  std::size_t num_outcomes() const { return elements_.size(); }

  const PauliCoeffTensor& element(std::size_t outcome) const { return elements_.at(outcome); }
  const PauliCoeffTensor& element(std::string_view bits) const;
  std::span<const PauliCoeffTensor> elements() const { return elements_; }

  std::vector<ComplexMatrix> matrices() const;

  /// Single-qubit detectors only.
  AVector avector(std::size_t outcome) const;

  friend bool operator==(const DetectorPovm&, const DetectorPovm&) = default;

 private:
  int num_qubits_ = 0;
  std::vector<PauliCoeffTensor> elements_;
};

/// Two-outcome detector with Pi^(0) = zero_element and Pi^(1) its complement.
DetectorPovm single_qubit_povm(const AVector& zero_element);

/// Tensor product of detectors; factor k becomes the k-th block of qubits.
DetectorPovm product_povm(std::span<const DetectorPovm> factors);

/// Projectors onto the computational basis.
DetectorPovm ideal_computational_povm(int num_qubits);

struct PovmValidityReport {
  double completeness_residual = 0.0;  // max |sum_n c^(n) - delta_{i,0}|
  double min_eigenvalue = 0.0;
  bool is_valid = false;
};

PovmValidityReport check_povm(const DetectorPovm& p, double tol = kPovmTolerance);

/// Detector seen by the qubits in `keep` when the others are summed over and
/// traced out with uniform weight. The output's qubit k is keep[k].
/// Throws std::invalid_argument when keep is empty, repeats a qubit, or keeps
/// every qubit.
DetectorPovm reduce_detector(const DetectorPovm& p, std::span<const int> keep);

/// |a^(0)_a - a^(0)_b| for two single-qubit detectors.
double detector_distance(const DetectorPovm& a, const DetectorPovm& b);

/// For each outcome of a two-qubit detector, the singular values (descending)
/// of the 4x4 coefficient matrix c_{i,j}. A product detector has exactly one
/// nonzero value per outcome.
std::map<std::string, std::array<double, 4>> separability_singular_values(const DetectorPovm& p);

}  // namespace qdt
