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

#include "qdt/detector_model.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace qdt {

double AVector::bloch_length() const { return std::sqrt(a1 * a1 + a2 * a2 + a3 * a3); }

double avector_distance(const AVector& a, const AVector& b) {
  const double d0 = a.a0 - b.a0, d1 = a.a1 - b.a1, d2 = a.a2 - b.a2, d3 = a.a3 - b.a3;
  return std::sqrt(d0 * d0 + d1 * d1 + d2 * d2 + d3 * d3);
}

std::string outcome_bitstring(std::size_t outcome, int num_qubits) {
  if (num_qubits < 1 || outcome >= (std::size_t{1} << num_qubits)) {
    throw std::invalid_argument(
        fmt::format("outcome {} out of range for {} qubits", outcome, num_qubits));
  }
  std::string bits(num_qubits, '0');
  for (int q = 0; q < num_qubits; ++q) {
    if ((outcome >> (num_qubits - 1 - q)) & 1U) bits[q] = '1';
  }
  return bits;
}

std::size_t outcome_index(std::string_view bits) {
  if (bits.empty() || bits.size() > 30) {
    throw std::invalid_argument(fmt::format("invalid outcome bitstring '{}'", bits));
  }
  std::size_t index = 0;
  for (char ch : bits) {
    if (ch != '0' && ch != '1') {
      throw std::invalid_argument(fmt::format("invalid outcome bitstring '{}'", bits));
    }
    index = (index << 1) | static_cast<std::size_t>(ch == '1');
  }
  return index;
}

DetectorPovm::DetectorPovm(std::vector<PauliCoeffTensor> elements)
    : elements_(std::move(elements)) {
  if (elements_.empty()) throw std::invalid_argument("detector has no POVM elements");
  num_qubits_ = elements_.front().num_qubits();
  if (elements_.size() != (std::size_t{1} << num_qubits_)) {
    throw std::invalid_argument(fmt::format("{}-qubit detector needs {} elements, got {}",
                                            num_qubits_, std::size_t{1} << num_qubits_,
                                            elements_.size()));
  }
  for (const auto& e : elements_) {
    if (e.num_qubits() != num_qubits_) {
      throw std::invalid_argument("POVM elements disagree on the number of qubits");
    }
  }
}

DetectorPovm::DetectorPovm(int num_qubits, const std::map<std::string, PauliCoeffTensor>& elements) {
  if (num_qubits < 1) throw std::invalid_argument("detector needs at least one qubit");
  const std::size_t count = std::size_t{1} << num_qubits;
  if (elements.size() != count) {
    throw std::invalid_argument(fmt::format("{}-qubit detector needs {} elements, got {}",
                                            num_qubits, count, elements.size()));
  }
  std::vector<PauliCoeffTensor> ordered(count);
  for (const auto& [bits, tensor] : elements) {
    if (static_cast<int>(bits.size()) != num_qubits) {
      throw std::invalid_argument(
          fmt::format("outcome '{}' has wrong length for {} qubits", bits, num_qubits));
    }
    ordered[outcome_index(bits)] = tensor;
  }
  *this = DetectorPovm(std::move(ordered));
}

DetectorPovm DetectorPovm::from_matrices(std::span<const ComplexMatrix> elements) {
  if (elements.empty()) throw std::invalid_argument("detector has no POVM elements");
  const int n = qubit_count(elements.front());
  std::vector<PauliCoeffTensor> coeffs;
  coeffs.reserve(elements.size());
  for (const auto& m : elements) coeffs.push_back(pauli_expand(m, n));
  return DetectorPovm(std::move(coeffs));
}

const PauliCoeffTensor& DetectorPovm::element(std::string_view bits) const {
  if (static_cast<int>(bits.size()) != num_qubits_) {
    throw std::invalid_argument(
        fmt::format("outcome '{}' has wrong length for {} qubits", bits, num_qubits_));
  }
  return elements_.at(outcome_index(bits));
}

std::vector<ComplexMatrix> DetectorPovm::matrices() const {
  std::vector<ComplexMatrix> out;
  out.reserve(elements_.size());
  for (const auto& e : elements_) out.push_back(pauli_reconstruct(e));
  return out;
}

AVector DetectorPovm::avector(std::size_t outcome) const {
  if (num_qubits_ != 1) {
    throw std::invalid_argument(
        fmt::format("a-vectors are defined for single-qubit detectors, got {} qubits", num_qubits_));
  }
  const auto& e = element(outcome);
  return {e[0], e[1], e[2], e[3]};
}

DetectorPovm single_qubit_povm(const AVector& zero_element) {
  const AVector one = zero_element.complement();
  return DetectorPovm({PauliCoeffTensor(1, {zero_element.a0, zero_element.a1, zero_element.a2,
                                            zero_element.a3}),
                       PauliCoeffTensor(1, {one.a0, one.a1, one.a2, one.a3})});
}

DetectorPovm product_povm(std::span<const DetectorPovm> factors) {
  if (factors.empty()) throw std::invalid_argument("product of zero detectors");
  DetectorPovm acc = factors.front();
  for (std::size_t k = 1; k < factors.size(); ++k) {
    const DetectorPovm& f = factors[k];
    const int n = acc.num_qubits() + f.num_qubits();
    std::vector<PauliCoeffTensor> elements;
    elements.reserve(acc.num_outcomes() * f.num_outcomes());
    // Outcome and Pauli indices both concatenate with the left factor most significant.
    for (const auto& ea : acc.elements()) {
      for (const auto& eb : f.elements()) {
        std::vector<double> c(ea.size() * eb.size());
        for (std::size_t i = 0; i < ea.size(); ++i) {
          for (std::size_t j = 0; j < eb.size(); ++j) c[i * eb.size() + j] = ea[i] * eb[j];
        }
        elements.emplace_back(n, std::move(c));
      }
    }
    acc = DetectorPovm(std::move(elements));
  }
  return acc;
}

DetectorPovm ideal_computational_povm(int num_qubits) {
  if (num_qubits < 1) throw std::invalid_argument("detector needs at least one qubit");
  const DetectorPovm one = single_qubit_povm({0.5, 0.0, 0.0, 0.5});
  std::vector<DetectorPovm> factors(num_qubits, one);
  return product_povm(factors);
}

PovmValidityReport check_povm(const DetectorPovm& p, double tol) {
  PovmValidityReport report;
  PauliCoeffTensor sum = PauliCoeffTensor::zeros(p.num_qubits());
  for (const auto& e : p.elements()) sum += e;
  sum[0] -= 1.0;
  for (double c : sum.coeffs()) {
    report.completeness_residual = std::max(report.completeness_residual, std::abs(c));
  }
  report.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (const auto& m : p.matrices()) {
    report.min_eigenvalue = std::min(report.min_eigenvalue, herm_eig(m).eigenvalues.minCoeff());
  }
  report.is_valid = report.completeness_residual <= tol && report.min_eigenvalue >= -tol;
  return report;
}

DetectorPovm reduce_detector(const DetectorPovm& p, std::span<const int> keep) {
  const int n = p.num_qubits();
  if (keep.empty()) throw std::invalid_argument("reduce_detector: keep set is empty");
  std::vector<bool> kept(n, false);
  for (int q : keep) {
    if (q < 0 || q >= n) {
      throw std::invalid_argument(fmt::format("reduce_detector: qubit {} out of range", q));
    }
    if (kept[q]) throw std::invalid_argument(fmt::format("reduce_detector: qubit {} repeated", q));
    kept[q] = true;
  }
  const int k = static_cast<int>(keep.size());
  if (k == n) {
    throw std::invalid_argument("reduce_detector: keep set covers every qubit; nothing to reduce");
  }

  // Tracing sigma_i over a qubit gives 2*delta_{i,0}, which cancels the 1/2 per
  // traced qubit, so the reduced coefficient is a plain sum over outcomes of the
  // coefficients whose traced Pauli digits are all identity.
  std::vector<PauliCoeffTensor> out(std::size_t{1} << k, PauliCoeffTensor::zeros(k));
  const std::size_t reduced_terms = std::size_t{1} << (2 * k);
  for (std::size_t outcome = 0; outcome < p.num_outcomes(); ++outcome) {
    std::size_t reduced_outcome = 0;
    for (int j = 0; j < k; ++j) {
      const bool bit = (outcome >> (n - 1 - keep[j])) & 1U;
      reduced_outcome = (reduced_outcome << 1) | static_cast<std::size_t>(bit);
    }
    const PauliCoeffTensor& src = p.element(outcome);
    PauliCoeffTensor& dst = out[reduced_outcome];
    for (std::size_t r = 0; r < reduced_terms; ++r) {
      std::size_t full = 0;
      for (int j = 0; j < k; ++j) {
        const std::size_t digit = (r >> (2 * (k - 1 - j))) & 3U;
        full |= digit << (2 * (n - 1 - keep[j]));
      }
      dst[r] += src[full];
    }
  }
  return DetectorPovm(std::move(out));
}

double detector_distance(const DetectorPovm& a, const DetectorPovm& b) {
  if (a.num_qubits() != 1 || b.num_qubits() != 1) {
    throw std::invalid_argument(fmt::format(
        "detector_distance needs single-qubit detectors, got {} and {} qubits", a.num_qubits(),
        b.num_qubits()));
  }
  return avector_distance(a.avector(0), b.avector(0));
}

std::map<std::string, std::array<double, 4>> separability_singular_values(const DetectorPovm& p) {
  if (p.num_qubits() != 2) {
    throw std::invalid_argument(fmt::format(
        "separability analysis needs a two-qubit detector, got {} qubits", p.num_qubits()));
  }
  std::map<std::string, std::array<double, 4>> out;
  for (std::size_t outcome = 0; outcome < p.num_outcomes(); ++outcome) {
    const PauliCoeffTensor& e = p.element(outcome);
    Eigen::Matrix4d c;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) c(i, j) = e[static_cast<std::size_t>(4 * i + j)];
    }
    const Eigen::Vector4d s = Eigen::JacobiSVD<Eigen::Matrix4d>(c).singularValues();
    out[outcome_bitstring(outcome, 2)] = {s[0], s[1], s[2], s[3]};
  }
  return out;
}

}  // namespace qdt
