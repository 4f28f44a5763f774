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

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "support/oracles.h"

namespace qdt {
namespace {

// Applies a preparation sequence to |0> with explicit 2x2 gates.
ComplexMatrix prepare(const std::vector<Gate>& gates) {
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd x, h, s;
  x << 0, 1, 1, 0;
  h << r, r, r, -r;
  s << 1, 0, 0, Complex(0, 1);
  Eigen::Vector2cd psi(1, 0);
  for (Gate g : gates) psi = (g == Gate::X ? x : g == Gate::H ? h : s) * psi;
  return psi * psi.adjoint();
}

TEST(StateLibrary, PrepSequencesProduceTheLabelledStates) {
  for (std::string_view token : kStateTokens) {
    const std::vector<std::string> tokens = {std::string(token)};
    const TestState s = state_from_tokens(tokens);
    ASSERT_EQ(s.prep_sequence.size(), 1U);
    EXPECT_LT((prepare(s.prep_sequence[0]) - s.density).norm(), 1e-14) << token;
  }
}

TEST(StateLibrary, EigenstatesHaveExpectedBlochVectors) {
  const std::vector<std::pair<std::string, std::array<double, 3>>> cases = {
      {"0", {0, 0, 1}}, {"1", {0, 0, -1}}, {"+", {1, 0, 0}},
      {"-", {-1, 0, 0}}, {"+i", {0, 1, 0}}, {"-i", {0, -1, 0}}};
  for (const auto& [label, bloch] : cases) {
    const TestState s = state_from_label(label);
    for (int k = 0; k < 3; ++k) {
      EXPECT_NEAR((s.density * oracle::sigma(k + 1)).trace().real(), bloch[k], 1e-14) << label;
    }
  }
}

TEST(StateLibrary, MultiQubitStatesAreKroneckerProducts) {
  const TestState s = state_from_label("+,1,-i");
  const ComplexMatrix expected = oracle::kron(
      oracle::kron(state_from_label("+").density, state_from_label("1").density),
      state_from_label("-i").density);
  EXPECT_LT((s.density - expected).norm(), 1e-14);
  EXPECT_EQ(s.label(), "+,1,-i");
  EXPECT_THROW(state_from_label("0,x"), std::invalid_argument);
}

TEST(StateLibrary, CanonicalOrderingIsBaseSix) {
  const auto states = test_state_set(2);
  ASSERT_EQ(states.size(), 36U);
  EXPECT_EQ(states[0].label(), "0,0");
  EXPECT_EQ(states[1].label(), "0,1");
  EXPECT_EQ(states[6].label(), "1,0");
  EXPECT_EQ(states[35].label(), "-i,-i");
  for (std::size_t i = 0; i < states.size(); ++i) {
    EXPECT_EQ(canonical_state_index(states[i].tokens), i);
  }
  EXPECT_THROW(test_state_set(4), std::invalid_argument);
  EXPECT_EQ(test_state_set(4, true).size(), 1296U);
}

TEST(StateLibrary, SixStateSetIsInformationallyComplete) {
  for (int n = 1; n <= 2; ++n) {
    const CompletenessReport r = informational_completeness_check(test_state_set(n));
    EXPECT_TRUE(r.complete);
    EXPECT_EQ(r.rank, 1 << (2 * n));
  }
  // Z eigenstates alone only span the diagonal operators.
  const std::vector<TestState> z_only = {state_from_label("0"), state_from_label("1")};
  const CompletenessReport r = informational_completeness_check(z_only);
  EXPECT_FALSE(r.complete);
  EXPECT_EQ(r.rank, 2);
}

}  // namespace
}  // namespace qdt
