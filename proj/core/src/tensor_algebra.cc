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

#include "qdt/tensor_algebra.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "qdt/errors.h"

namespace qdt {
namespace {

// Every Pauli string is a monomial matrix: column c has a single nonzero entry
// at row c ^ flip_mask with value pauli_value(...). Working with this form keeps
// expansion and reconstruction at O(4^N * 2^N).
std::size_t flip_mask(std::size_t index, int num_qubits) {
  std::size_t mask = 0;
  for (int q = 0; q < num_qubits; ++q) {
    const std::size_t digit = (index >> (2 * (num_qubits - 1 - q))) & 3U;
    if (digit == 1 || digit == 2) mask |= std::size_t{1} << (num_qubits - 1 - q);
  }
  return mask;
}

Complex pauli_value(std::size_t index, int num_qubits, std::size_t column) {
  Complex v{1.0, 0.0};
  for (int q = 0; q < num_qubits; ++q) {
    const std::size_t digit = (index >> (2 * (num_qubits - 1 - q))) & 3U;
    const bool bit = (column >> (num_qubits - 1 - q)) & 1U;
    switch (digit) {
      case 2:
        v *= bit ? Complex{0.0, -1.0} : Complex{0.0, 1.0};
        break;
      case 3:
        if (bit) v = -v;
        break;
      default:
        break;
    }
  }
  return v;
}

void require_same_dims(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(fmt::format("dimension mismatch: {}x{} vs {}x{}", a.rows(),
                                            a.cols(), b.rows(), b.cols()));
  }
}

double hermitian_defect(const ComplexMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

int qubit_count(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || !is_power_of_two(static_cast<std::size_t>(m.rows()))) {
    throw std::invalid_argument(
        fmt::format("expected a square 2^N matrix, got {}x{}", m.rows(), m.cols()));
  }
  int n = 0;
  while ((Eigen::Index{1} << n) < m.rows()) ++n;
  return n;
}

PauliCoeffTensor::PauliCoeffTensor(int num_qubits, std::vector<double> coeffs)
    : num_qubits_(num_qubits), coeffs_(std::move(coeffs)) {
  if (num_qubits < 1 || num_qubits > 15) {
    throw std::invalid_argument(fmt::format("num_qubits out of range: {}", num_qubits));
  }
  const std::size_t expected = std::size_t{1} << (2 * num_qubits);
  if (coeffs_.size() != expected) {
    throw std::invalid_argument(fmt::format(
        "Pauli coefficient length {} does not match 4^{} = {}", coeffs_.size(), num_qubits,
        expected));
  }
}

PauliCoeffTensor PauliCoeffTensor::zeros(int num_qubits) {
  if (num_qubits < 1 || num_qubits > 15) {
    throw std::invalid_argument(fmt::format("num_qubits out of range: {}", num_qubits));
  }
  return PauliCoeffTensor(num_qubits, std::vector<double>(std::size_t{1} << (2 * num_qubits)));
}

PauliCoeffTensor& PauliCoeffTensor::operator+=(const PauliCoeffTensor& other) {
  if (other.num_qubits_ != num_qubits_) {
    throw std::invalid_argument("adding Pauli tensors of different qubit counts");
  }
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

PauliCoeffTensor& PauliCoeffTensor::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

std::size_t pauli_index(std::span<const int> digits) {
  std::size_t index = 0;
  for (int d : digits) {
    if (d < 0 || d > 3) throw std::invalid_argument(fmt::format("Pauli digit {} not in 0..3", d));
    index = index * 4 + static_cast<std::size_t>(d);
  }
  return index;
}

std::vector<int> pauli_digits(std::size_t index, int num_qubits) {
  std::vector<int> digits(num_qubits);
  for (int q = num_qubits - 1; q >= 0; --q) {
    digits[q] = static_cast<int>(index & 3U);
    index >>= 2;
  }
  return digits;
}

ComplexMatrix pauli_matrix(int which) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  switch (which) {
    case 0:
      m(0, 0) = 1.0;
      m(1, 1) = 1.0;
      break;
    case 1:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case 2:
      m(0, 1) = Complex{0.0, -1.0};
      m(1, 0) = Complex{0.0, 1.0};
      break;
    case 3:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
    default:
      throw std::invalid_argument(fmt::format("Pauli index {} not in 0..3", which));
  }
  return m;
}

ComplexMatrix pauli_string(std::size_t index, int num_qubits) {
  const std::size_t dim = std::size_t{1} << num_qubits;
  if (index >= dim * dim) throw std::invalid_argument("Pauli string index out of range");
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  const std::size_t mask = flip_mask(index, num_qubits);
  for (std::size_t c = 0; c < dim; ++c) m(c ^ mask, c) = pauli_value(index, num_qubits, c);
  return m;
}

PauliCoeffTensor pauli_expand(const ComplexMatrix& m, int num_qubits) {
  if (qubit_count(m) != num_qubits) {
    throw std::invalid_argument(fmt::format("matrix of dimension {} is not a {}-qubit operator",
                                            m.rows(), num_qubits));
  }
  const std::size_t dim = std::size_t{1} << num_qubits;
  PauliCoeffTensor out = PauliCoeffTensor::zeros(num_qubits);
  const double scale = 1.0 / static_cast<double>(dim);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::size_t mask = flip_mask(i, num_qubits);
    Complex tr{0.0, 0.0};
    // Tr(m P) = sum_c m(c, c^mask) * P(c^mask, c)
    for (std::size_t c = 0; c < dim; ++c) tr += m(c, c ^ mask) * pauli_value(i, num_qubits, c);
    tr *= scale;
    if (std::abs(tr.imag()) > kHermitianImagTolerance) {
      throw std::invalid_argument(fmt::format(
          "operator is not Hermitian: Pauli coefficient {} has imaginary part {:.3e}", i,
          tr.imag()));
    }
    out[i] = tr.real();
  }
  return out;
}

ComplexMatrix pauli_reconstruct(const PauliCoeffTensor& c) {
  const int n = c.num_qubits();
  if (n < 1) throw std::invalid_argument("empty Pauli coefficient tensor");
  const std::size_t dim = std::size_t{1} << n;
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0.0) continue;
    const std::size_t mask = flip_mask(i, n);
    for (std::size_t col = 0; col < dim; ++col) m(col ^ mask, col) += c[i] * pauli_value(i, n, col);
  }
  return m;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  qubit_count(a);
  qubit_count(b);
  const Eigen::Index ra = a.rows(), rb = b.rows();
  ComplexMatrix out(ra * rb, ra * rb);
  for (Eigen::Index i = 0; i < ra; ++i) {
    for (Eigen::Index j = 0; j < ra; ++j) out.block(i * rb, j * rb, rb, rb) = a(i, j) * b;
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, int num_qubits, std::span<const int> traced) {
  if (qubit_count(m) != num_qubits) {
    throw std::invalid_argument(fmt::format("matrix of dimension {} is not a {}-qubit operator",
                                            m.rows(), num_qubits));
  }
  std::vector<bool> is_traced(num_qubits, false);
  for (int q : traced) {
    if (q < 0 || q >= num_qubits) {
      throw std::invalid_argument(fmt::format("qubit {} out of range for {} qubits", q, num_qubits));
    }
    if (is_traced[q]) throw std::invalid_argument(fmt::format("qubit {} listed twice", q));
    is_traced[q] = true;
  }
  if (traced.empty()) throw std::invalid_argument("partial trace over an empty qubit set");
  if (static_cast<int>(traced.size()) == num_qubits) {
    throw std::invalid_argument("partial trace over every qubit; use the full trace instead");
  }

  std::vector<int> kept_bits, traced_bits;  // bit positions within the flat index
  for (int q = 0; q < num_qubits; ++q) {
    (is_traced[q] ? traced_bits : kept_bits).push_back(num_qubits - 1 - q);
  }
  auto deposit = [](std::size_t value, const std::vector<int>& bits) {
    std::size_t out = 0;
    const std::size_t k = bits.size();
    for (std::size_t j = 0; j < k; ++j) {
      if ((value >> (k - 1 - j)) & 1U) out |= std::size_t{1} << bits[j];
    }
    return out;
  };

  const std::size_t kept_dim = std::size_t{1} << kept_bits.size();
  const std::size_t traced_dim = std::size_t{1} << traced_bits.size();
  std::vector<std::size_t> kept_index(kept_dim), traced_index(traced_dim);
  for (std::size_t v = 0; v < kept_dim; ++v) kept_index[v] = deposit(v, kept_bits);
  for (std::size_t v = 0; v < traced_dim; ++v) traced_index[v] = deposit(v, traced_bits);

  ComplexMatrix out = ComplexMatrix::Zero(kept_dim, kept_dim);
  for (std::size_t r = 0; r < kept_dim; ++r) {
    for (std::size_t c = 0; c < kept_dim; ++c) {
      Complex sum{0.0, 0.0};
      for (std::size_t t : traced_index) sum += m(kept_index[r] | t, kept_index[c] | t);
      out(r, c) = sum;
    }
  }
  return out;
}

HermEigDecomp herm_eig(const ComplexMatrix& m) {
  qubit_count(m);
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double defect = hermitian_defect(m);
  if (defect > 1e-10 * scale) {
    throw std::invalid_argument(
        fmt::format("herm_eig: matrix is not Hermitian (max |m - m^dagger| = {:.3e})", defect));
  }
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  const ComplexMatrix& v = solver.eigenvectors();
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  const double residual =
      solver.info() == Eigen::Success
          ? (v * lambda.cast<Complex>().asDiagonal() * v.adjoint() - sym).norm()
          : std::numeric_limits<double>::infinity();
  if (solver.info() != Eigen::Success || residual > 1e-10 * scale) {
    throw ConvergenceError(
        fmt::format("herm_eig: eigensolver failed to converge (residual {:.3e})", residual));
  }
  return {lambda, v};
}

ComplexMatrix inv_sqrt_psd(const ComplexMatrix& m, double eigenvalue_floor) {
  if (!(eigenvalue_floor > 0.0)) throw std::invalid_argument("eigenvalue floor must be positive");
  const HermEigDecomp eig = herm_eig(m);
  const double min_eig = eig.eigenvalues.minCoeff();
  if (min_eig < -kNegativeEigenvalueTolerance) {
    throw std::invalid_argument(
        fmt::format("inv_sqrt_psd: matrix is not PSD (min eigenvalue {:.6e})", min_eig));
  }
  Eigen::VectorXd d(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    d[i] = 1.0 / std::sqrt(std::max(eig.eigenvalues[i], eigenvalue_floor));
  }
  ComplexMatrix out = eig.eigenvectors * d.cast<Complex>().asDiagonal() * eig.eigenvectors.adjoint();
  return 0.5 * (out + out.adjoint());
}

double frobenius_norm(const ComplexMatrix& m) { return m.norm(); }

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dims(a, b);
  return (a - b).norm();
}

}  // namespace qdt
