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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qdt/tensor_algebra.h"

namespace qdt {

enum class Gate { X, H, S };
enum class Axis { X, Y, Z };

std::string_view gate_name(Gate g);
ComplexMatrix gate_matrix(Gate g);

/// Single-qubit labels in canonical order: "0" < "1" < "+" < "-" < "+i" < "-i".
inline constexpr std::array<std::string_view, 6> kStateTokens = {"0", "1", "+", "-", "+i", "-i"};

/// A product test state together with the gates that prepare it from |0...0>.
struct TestState {
  int num_qubits = 0;
  std::vector<std::string> tokens;  // one per qubit, qubit 0 first
  ComplexMatrix density;
  /// Per qubit, gates in application order (leftmost applied first).
  std::vector<std::vector<Gate>> prep_sequence;

  /// Tokens joined by ',', as used in counts files.
  std::string label() const;
};

TestState pauli_eigenstate(Axis axis, int sign);

TestState state_from_tokens(std::span<const std::string> tokens);
TestState state_from_label(std::string_view label);

/// Position of a state in the canonical 6^N ordering (qubit 0 most significant).
std::size_t canonical_state_index(std::span<const std::string> tokens);

inline constexpr int kMaxTestStateQubits = 3;

/// All 6^N product states in canonical order. N above kMaxTestStateQubits is
/// rejected unless allow_large is set.
std::vector<TestState> test_state_set(int num_qubits, bool allow_large = false);

struct CompletenessReport {
  bool complete = false;
  int rank = 0;
  double condition_number = 0.0;  // infinite when rank-deficient
};

/// Whether the states' Pauli vectors span the 4^N-dimensional operator space.
CompletenessReport informational_completeness_check(std::span<const TestState> states);

}  // namespace qdt
