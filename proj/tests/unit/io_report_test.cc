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

#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "qdt/detector_simulator.h"
#include "qdt/io.h"
#include "qdt/report.h"
#include "support/golden.h"
#include "support/oracles.h"

namespace qdt {
namespace {

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const std::invalid_argument& e) {
    return e.what();
  }
  return {};
}

// Minimal structural check: every start tag is closed in order.
bool well_formed_xml(const std::string& s) {
  std::vector<std::string> stack;
  std::size_t pos = 0;
  while ((pos = s.find('<', pos)) != std::string::npos) {
    const std::size_t end = s.find('>', pos);
    if (end == std::string::npos) return false;
    const std::string tag = s.substr(pos + 1, end - pos - 1);
    pos = end + 1;
    if (tag.empty()) return false;
    if (tag[0] == '?' || tag[0] == '!') continue;
    if (tag[0] == '/') {
      if (stack.empty() || stack.back() != tag.substr(1)) return false;
      stack.pop_back();
    } else if (tag.back() != '/') {
      stack.push_back(tag.substr(0, tag.find(' ')));
    }
  }
  return stack.empty();
}

TEST(PovmJson, RoundTripsBitExactly) {
  std::mt19937_64 rng(12);
  for (int n = 1; n <= 3; ++n) {
    const DetectorPovm p = oracle::povm_from(oracle::random_povm_matrices(n, rng), n);
    const std::string text = io::povm_to_json(p);
    EXPECT_EQ(io::povm_from_json(text), p);
    EXPECT_EQ(io::peek_schema(text), "qdt-povm/1");
  }
}

TEST(PovmJson, DiagnosticsNameTheProblem) {
  EXPECT_NE(error_of([] { io::povm_from_json("{\n  \"num_qubits\": 1,\n  \"elements\": {\n}"); }).find("line 4"),
            std::string::npos);
  EXPECT_NE(error_of([] { io::povm_from_json(R"({"schema": "qdt-counts/1"})"); }).find("schema"), std::string::npos);
  EXPECT_NE(error_of([] { io::povm_from_json(R"({"num_qubits": 1, "elements": {"0": [1, 0, 0], "1": [0, 0, 0, 0]}})"); })
                .find("elements['0']"),
            std::string::npos);
  EXPECT_NE(error_of([] { io::povm_from_json(R"({"elements": {}})"); }).find("num_qubits"), std::string::npos);
  // Without a schema field the document is accepted.
  EXPECT_EQ(io::povm_from_json(R"({"num_qubits": 1, "elements": {"0": [0.5, 0, 0, 0.5], "1": [0.5, 0, 0, -0.5]}})"),
            ideal_computational_povm(1));
}

TEST(CountsJson, RoundTripAndValidation) {
  const CountsDataset d = simulate_qdt_experiment(make_noisy_detector({{{0.05, 0.03, 0, 0}}}), 300, 3, 2);
  const CountsDataset back = io::counts_from_json(io::counts_to_json(d));
  ASSERT_EQ(back.runs.size(), 3U);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 6; ++c) EXPECT_EQ(back.runs[r].circuits[c].counts, d.runs[r].circuits[c].counts);
  EXPECT_EQ(io::counts_to_json(back), io::counts_to_json(d));
  const std::string bad_bits = R"({"num_qubits": 1, "shots": 2, "runs": [{"circuits": [{"state": "0", "counts": {"2": 2}}]}]})";
  EXPECT_NE(error_of([&] { io::counts_from_json(bad_bits); }).find("runs[0].circuits[0].counts['2']"), std::string::npos);
  const std::string short_run = R"({"num_qubits": 1, "shots": 2, "runs": [{"circuits": [{"state": "0", "counts": {"0": 2}}]}]})";
  EXPECT_NE(error_of([&] { io::counts_from_json(short_run); }).find("expected 6 circuits"), std::string::npos);
}

TEST(DistributionJson, MissingKeysAreZero) {
  const io::Distribution d = io::distribution_from_json(R"({"num_qubits": 2, "probabilities": {"11": 0.25, "00": 0.75}})");
  EXPECT_EQ(d.probabilities, (std::vector<double>{0.75, 0.0, 0.0, 0.25}));
  EXPECT_EQ(io::distribution_from_json(io::distribution_to_json(d)).probabilities, d.probabilities);
}

TEST(ResponseMatrixJson, RoundTrip) {
  const ResponseMatrix m = build_response_matrix(std::vector<ReadoutPair>{
      {{0.52, 0, 0, 0.45}, {0.48, 0, 0, -0.45}}, {{0.49, 0, 0, 0.46}, {0.51, 0, 0, -0.46}}});
  const ResponseMatrix back = io::response_matrix_from_json(io::response_matrix_to_json(m));
  EXPECT_EQ(back.entries(), m.entries());
}

TEST(NoiseJson, DefaultsMissingFieldsToZero) {
  const NoisySpec s = io::noise_from_json(R"({"schema": "qdt-noise/1", "qubits": [{"p01": 0.1}, {"p10": 0.2, "tilt_x": 0.01}]})");
  ASSERT_EQ(s.qubits.size(), 2U);
  EXPECT_EQ(s.qubits[0].p10, 0.0);
  EXPECT_EQ(s.qubits[1].tilt_x, 0.01);
}

TEST(Report, IdealDetectorArrows) {
  const DetectorReport r = bloch_summary(ideal_computational_povm(1));
  ASSERT_EQ(r.arrows.size(), 2U);
  EXPECT_EQ(r.arrows[0].direction, (std::array<double, 3>{0, 0, 1}));
  EXPECT_EQ(r.arrows[1].direction, (std::array<double, 3>{0, 0, -1}));
  EXPECT_EQ(r.arrows[0].width, 0.5);
  EXPECT_EQ(r.arrows[1].width, 0.5);
  EXPECT_TRUE(r.warnings.empty());
}

TEST(Report, AnomalousQubitHasNarrowerZeroArrow) {
  const DetectorReport r = bloch_summary(single_qubit_povm({0.4535, 0.002, 0.0023, 0.4229}));
  EXPECT_DOUBLE_EQ(r.arrows[0].width, 0.4535);
  EXPECT_DOUBLE_EQ(r.arrows[1].width, 1 - 0.4535);
  EXPECT_LT(r.arrows[0].width, r.arrows[1].width);
  EXPECT_DOUBLE_EQ(r.arrows[0].direction[2], 0.4229 / 0.4535);
  EXPECT_DOUBLE_EQ(r.arrows[0].direction[0], 0.002 / 0.4535);
  testing::expect_golden("report_anomalous_qubit.txt", render_text(r));
}

TEST(Report, MultiQubitDetectorsAreReducedPerQubit) {
  const DetectorPovm p = make_noisy_detector({{{0.05, 0.03, 0, 0}, {0.1, 0.0, 0, 0}}});
  const DetectorReport r = bloch_summary(p);
  ASSERT_EQ(r.arrows.size(), 4U);
  EXPECT_EQ(r.arrows[2].qubit, 1);
  EXPECT_DOUBLE_EQ(r.arrows[2].width, 0.45);
}

TEST(Report, JsonEmbedsPovmBitExactly) {
  std::mt19937_64 rng(13);
  const DetectorPovm p = oracle::povm_from(oracle::random_povm_matrices(2, rng), 2);
  const std::string json = render_json(p, bloch_summary(p));
  EXPECT_EQ(io::peek_schema(json), "qdt-report/1");
  EXPECT_EQ(io::povm_from_json(json), p);
}

TEST(Report, ClampsOverlongArrowsWithWarning) {
  const DetectorReport r = bloch_summary(single_qubit_povm({0.5, 0.0, 0.0, 0.6}));
  EXPECT_TRUE(r.arrows[0].clamped);
  EXPECT_DOUBLE_EQ(r.arrows[0].length, 1.2);
  EXPECT_DOUBLE_EQ(r.arrows[0].direction[2], 1.0);
  EXPECT_FALSE(r.warnings.empty());
}

TEST(Report, SvgIsWellFormedIncludingDegenerateDetectors) {
  const std::string ideal = render_svg(bloch_summary(ideal_computational_povm(1)));
  EXPECT_TRUE(well_formed_xml(ideal));
  testing::expect_golden("report_ideal.svg", ideal);
  // Pi^(0) = I, Pi^(1) = 0: zero-width, zero-length arrow.
  const DetectorReport degenerate = bloch_summary(single_qubit_povm({1.0, 0, 0, 0}));
  EXPECT_FALSE(degenerate.warnings.empty());
  EXPECT_TRUE(well_formed_xml(render_svg(degenerate)));
  EXPECT_TRUE(well_formed_xml(render_svg(bloch_summary(make_noisy_detector({{{0.1, 0.05, 0.02, 0}, {}, {}}})))));
}

TEST(TableText, AlignedWithFlags) {
  ComparisonTable t;
  t.rows = {"0", "1"};
  t.cols = {"0", "1"};
  t.distances = {{std::nullopt, 0.0123}, {0.0009, std::nullopt}};
  t.fluctuation_scale = 1e-3;
  t.missing = {};
  const std::string text = render_table_text(t, flag_crosstalk(t));
  testing::expect_golden("table_flags.txt", text);
  EXPECT_NE(text.find("0.0123*"), std::string::npos);
  EXPECT_EQ(text.find("0.0009*"), std::string::npos);
}

}  // namespace
}  // namespace qdt
