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

#include "qdt/state_library.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace qdt {
namespace {

struct TokenInfo {
  std::string_view token;
  Axis axis;
  int sign;
  std::vector<Gate> prep;
};

const std::array<TokenInfo, 6>& token_table() {
  static const std::array<TokenInfo, 6> table = {{
      {"0", Axis::Z, +1, {}},
      {"1", Axis::Z, -1, {Gate::X}},
      {"+", Axis::X, +1, {Gate::H}},
      {"-", Axis::X, -1, {Gate::X, Gate::H}},
      {"+i", Axis::Y, +1, {Gate::H, Gate::S}},
      {"-i", Axis::Y, -1, {Gate::X, Gate::H, Gate::S}},
  }};
  return table;
}

std::size_t token_position(std::string_view token) {
  for (std::size_t i = 0; i < kStateTokens.size(); ++i) {
    if (kStateTokens[i] == token) return i;
  }
  throw std::invalid_argument(fmt::format("unknown state token '{}'", token));
}

ComplexMatrix single_density(Axis axis, int sign) {
  const int pauli = axis == Axis::X ? 1 : axis == Axis::Y ? 2 : 3;
  return 0.5 * (pauli_matrix(0) + static_cast<double>(sign) * pauli_matrix(pauli));
}

}  // namespace

std::string_view gate_name(Gate g) {
  switch (g) {
    case Gate::X:
      return "X";
    case Gate::H:
      return "H";
    case Gate::S:
      return "S";
  }
  return "?";
}

ComplexMatrix gate_matrix(Gate g) {
  ComplexMatrix m(2, 2);
  switch (g) {
    case Gate::X:
      m << 0.0, 1.0, 1.0, 0.0;
      break;
    case Gate::H: {
      const double r = 1.0 / std::sqrt(2.0);
      m << r, r, r, -r;
      break;
    }
    case Gate::S:
      m << 1.0, 0.0, 0.0, Complex(0.0, 1.0);
      break;
  }
  return m;
}

std::string TestState::label() const {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ',';
    out += tokens[i];
  }
  return out;
}

TestState pauli_eigenstate(Axis axis, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("eigenstate sign must be +1 or -1");
  for (const auto& info : token_table()) {
    if (info.axis == axis && info.sign == sign) {
      return TestState{1, {std::string(info.token)}, single_density(axis, sign), {info.prep}};
    }
  }
  throw std::logic_error("unreachable");
}

TestState state_from_tokens(std::span<const std::string> tokens) {
  if (tokens.empty()) throw std::invalid_argument("test state needs at least one qubit");
  TestState state;
  state.num_qubits = static_cast<int>(tokens.size());
  for (const auto& t : tokens) {
    const TokenInfo& info = token_table()[token_position(t)];
    ComplexMatrix rho = single_density(info.axis, info.sign);
    state.density = state.tokens.empty() ? rho : kron(state.density, rho);
    state.tokens.push_back(t);
    state.prep_sequence.push_back(info.prep);
  }
  return state;
}

TestState state_from_label(std::string_view label) {
  std::vector<std::string> tokens;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = label.find(',', start);
    tokens.emplace_back(label.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return state_from_tokens(tokens);
}

std::size_t canonical_state_index(std::span<const std::string> tokens) {
  std::size_t index = 0;
  for (const auto& t : tokens) index = index * 6 + token_position(t);
  return index;
}

std::vector<TestState> test_state_set(int num_qubits, bool allow_large) {
  if (num_qubits < 1) throw std::invalid_argument("test state set needs at least one qubit");
  if (num_qubits > kMaxTestStateQubits && !allow_large) {
    throw std::invalid_argument(fmt::format(
        "{} qubits requires 6^{} test states; pass allow_large to go beyond {} qubits", num_qubits,
        num_qubits, kMaxTestStateQubits));
  }
  std::size_t count = 1;
  for (int q = 0; q < num_qubits; ++q) count *= 6;

  std::vector<TestState> states;
  states.reserve(count);
  std::vector<std::string> tokens(num_qubits);
  for (std::size_t index = 0; index < count; ++index) {
    std::size_t rest = index;
    for (int q = num_qubits - 1; q >= 0; --q) {
      tokens[q] = std::string(kStateTokens[rest % 6]);
      rest /= 6;
    }
    states.push_back(state_from_tokens(tokens));
  }
  return states;
}

CompletenessReport informational_completeness_check(std::span<const TestState> states) {
  CompletenessReport report;
  if (states.empty()) {
    report.condition_number = std::numeric_limits<double>::infinity();
    return report;
  }
  const int n = states.front().num_qubits;
  const std::size_t dim = std::size_t{1} << (2 * n);
  Eigen::MatrixXd stacked(states.size(), dim);
  for (std::size_t r = 0; r < states.size(); ++r) {
    if (states[r].num_qubits != n) {
      throw std::invalid_argument("test states disagree on the number of qubits");
    }
    const PauliCoeffTensor c = pauli_expand(states[r].density, n);
    for (std::size_t i = 0; i < dim; ++i) stacked(r, i) = c[i];
  }
  const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXd>(stacked).singularValues();
  const double smax = s.size() ? s[0] : 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > 1e-10 * smax) ++report.rank;
  }
  report.complete = report.rank == static_cast<int>(dim);
  report.condition_number = report.complete ? smax / s[s.size() - 1]
                                            : std::numeric_limits<double>::infinity();
  return report;
}

}  // namespace qdt
