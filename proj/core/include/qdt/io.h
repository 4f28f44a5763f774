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

// JSON file formats. Every document carries a "schema" field; readers accept
// documents without one but reject a different schema. Malformed input raises
// std::invalid_argument naming the offending line or field.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qdt/analysis.h"
#include "qdt/detector_model.h"
#include "qdt/detector_simulator.h"
#include "qdt/mitigation.h"
#include "qdt/tomography_engine.h"

namespace qdt::io {

inline constexpr std::string_view kPovmSchema = "qdt-povm/1";
inline constexpr std::string_view kCountsSchema = "qdt-counts/1";
inline constexpr std::string_view kDistributionSchema = "qdt-distribution/1";
inline constexpr std::string_view kTableSchema = "qdt-table/1";
inline constexpr std::string_view kMleDiagnosticsSchema = "qdt-mle-diagnostics/1";
inline constexpr std::string_view kBootstrapSchema = "qdt-bootstrap/1";
inline constexpr std::string_view kResponseMatrixSchema = "qdt-response-matrix/1";
inline constexpr std::string_view kMitigationSchema = "qdt-mitigation/1";
inline constexpr std::string_view kAVectorsSchema = "qdt-avectors/1";
inline constexpr std::string_view kNoiseSchema = "qdt-noise/1";
inline constexpr std::string_view kReportSchema = "qdt-report/1";

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

/// Value of the top-level "schema" field, or empty when absent. Parse errors
/// are reported with line and column.
std::string peek_schema(std::string_view text);

// POVM: {"schema", "num_qubits", "elements": {"<bits>": [4^N coefficients]}}.
// Coefficients are Pauli coefficients with qubit 0 as the most significant digit.
std::string povm_to_json(const DetectorPovm& p);
/// Also accepts a qdt-report/1 document and reads its embedded "povm".
DetectorPovm povm_from_json(std::string_view text);

std::string counts_to_json(const CountsDataset& d);
CountsDataset counts_from_json(std::string_view text);

struct Distribution {
  int num_qubits = 0;
  std::vector<double> probabilities;  // indexed by outcome
};
std::string distribution_to_json(const Distribution& d);
/// Missing bitstrings mean probability zero.
Distribution distribution_from_json(std::string_view text);

/// Per-qubit Pi^(0) a-vectors: {"qubits": [{"qubit": q, "a": [a0, a1, a2, a3]}]}.
struct QubitAVector {
  int qubit = 0;
  AVector zero;
};
std::string avectors_to_json(const std::vector<QubitAVector>& v);
std::vector<QubitAVector> avectors_from_json(std::string_view text);

/// {"qubits": [{"p01", "p10", "tilt_x", "tilt_y"}]}, one entry per qubit.
NoisySpec noise_from_json(std::string_view text);
std::string noise_to_json(const NoisySpec& spec);

std::string table_to_json(const ComparisonTable& t, const std::vector<CrosstalkFlag>& flags = {});

/// Diagnostics for one MLE run, including the validity of the final POVM.
std::string mle_diagnostics_to_json(const MleResult& r, const MleConfig& cfg);

std::string bootstrap_to_json(const BootstrapReport& r, std::uint64_t seed,
                              std::optional<double> fluctuation = std::nullopt);

/// Dense row-major entries with the bitstring legend for rows and columns.
std::string response_matrix_to_json(const ResponseMatrix& m,
                                    std::optional<double> excluded_weight = std::nullopt);
ResponseMatrix response_matrix_from_json(std::string_view text);

std::string mitigation_to_json(const MitigationResult& r, int num_qubits);

}  // namespace qdt::io
