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

#include "qdt/io.h"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

namespace qdt::io {
namespace {

using Json = nlohmann::ordered_json;

Json parse(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    // e.what() already names line and column.
    throw std::invalid_argument(fmt::format("malformed JSON: {}", e.what()));
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void expect_schema(const Json& j, std::string_view schema) {
  if (!j.is_object()) throw std::invalid_argument("top-level JSON value must be an object");
  if (!j.contains("schema")) return;
  const Json& s = j["schema"];
  if (!s.is_string() || s.get<std::string>() != schema) {
    throw std::invalid_argument(
        fmt::format("field 'schema': expected \"{}\", got {}", schema, s.dump()));
  }
}

const Json& field(const Json& j, std::string_view key, std::string_view where) {
  if (!j.is_object()) throw std::invalid_argument(fmt::format("{}: expected an object", where));
  const auto it = j.find(key);
  if (it == j.end()) {
    throw std::invalid_argument(fmt::format("{}: missing field '{}'", where, key));
  }
  return *it;
}

double number(const Json& j, std::string_view where) {
  if (!j.is_number()) {
    throw std::invalid_argument(fmt::format("{}: expected a number, got {}", where, j.dump()));
  }
  return j.get<double>();
}

std::uint64_t unsigned_integer(const Json& j, std::string_view where) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    throw std::invalid_argument(
        fmt::format("{}: expected a non-negative integer, got {}", where, j.dump()));
  }
  return j.get<std::uint64_t>();
}

int qubit_number(const Json& j, std::string_view where) {
  const std::uint64_t n = unsigned_integer(j, where);
  if (n < 1 || n > 12) {
    throw std::invalid_argument(fmt::format("{}: qubit count {} out of range [1, 12]", where, n));
  }
  return static_cast<int>(n);
}

std::size_t bitstring_index(const std::string& bits, int num_qubits, std::string_view where) {
  if (static_cast<int>(bits.size()) != num_qubits ||
      bits.find_first_not_of("01") != std::string::npos) {
    throw std::invalid_argument(
        fmt::format("{}: '{}' is not a {}-bit outcome string", where, bits, num_qubits));
  }
  return outcome_index(bits);
}

Json coeff_array(const PauliCoeffTensor& c) {
  Json a = Json::array();
  for (double x : c.coeffs()) a.push_back(x);
  return a;
}

Json povm_object(const DetectorPovm& p) {
  Json j;
  j["schema"] = kPovmSchema;
  j["num_qubits"] = p.num_qubits();
  Json elements = Json::object();
  for (std::size_t n = 0; n < p.num_outcomes(); ++n) {
    elements[outcome_bitstring(n, p.num_qubits())] = coeff_array(p.element(n));
  }
  j["elements"] = std::move(elements);
  return j;
}

DetectorPovm povm_from_object(const Json& j, std::string_view where) {
  expect_schema(j, kPovmSchema);
  const int n = qubit_number(field(j, "num_qubits", where), fmt::format("{}.num_qubits", where));
  const Json& elements = field(j, "elements", where);
  if (!elements.is_object()) {
    throw std::invalid_argument(fmt::format("{}.elements: expected an object", where));
  }
  const std::size_t outcomes = std::size_t{1} << n;
  const std::size_t dim = std::size_t{1} << (2 * n);
  if (elements.size() != outcomes) {
    throw std::invalid_argument(fmt::format("{}.elements: expected {} outcomes, got {}", where,
                                            outcomes, elements.size()));
  }
  std::vector<std::optional<PauliCoeffTensor>> slots(outcomes);
  for (const auto& [bits, coeffs] : elements.items()) {
    const std::string path = fmt::format("{}.elements['{}']", where, bits);
    const std::size_t idx = bitstring_index(bits, n, path);
    if (!coeffs.is_array() || coeffs.size() != dim) {
      throw std::invalid_argument(fmt::format("{}: expected an array of {} coefficients", path, dim));
    }
    std::vector<double> c;
    c.reserve(dim);
    for (std::size_t i = 0; i < dim; ++i) c.push_back(number(coeffs[i], fmt::format("{}[{}]", path, i)));
    if (slots[idx]) throw std::invalid_argument(fmt::format("{}: duplicate outcome", path));
    slots[idx] = PauliCoeffTensor(n, std::move(c));
  }
  std::vector<PauliCoeffTensor> out;
  for (auto& s : slots) out.push_back(std::move(*s));
  return DetectorPovm(std::move(out));
}

Json string_legend(int num_qubits) {
  Json a = Json::array();
  for (std::size_t k = 0; k < (std::size_t{1} << num_qubits); ++k) {
    a.push_back(outcome_bitstring(k, num_qubits));
  }
  return a;
}

}  // namespace

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument(fmt::format("cannot open '{}' for reading", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::invalid_argument(fmt::format("cannot open '{}' for writing", path.string()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error(fmt::format("failed writing '{}'", path.string()));
}

std::string peek_schema(std::string_view text) {
  const Json j = parse(text);
  if (j.is_object() && j.contains("schema") && j["schema"].is_string()) {
    return j["schema"].get<std::string>();
  }
  return {};
}

std::string povm_to_json(const DetectorPovm& p) { return dump(povm_object(p)); }

DetectorPovm povm_from_json(std::string_view text) {
  const Json j = parse(text);
  if (j.is_object() && j.contains("schema") && j["schema"] == kReportSchema) {
    return povm_from_object(field(j, "povm", "report"), "povm");
  }
  return povm_from_object(j, "povm");
}

std::string counts_to_json(const CountsDataset& d) {
  Json j;
  j["schema"] = kCountsSchema;
  j["num_qubits"] = d.num_qubits;
  j["shots"] = d.shots_per_circuit;
  j["seed"] = d.seed;
  Json meta = Json::object();
  for (const auto& [k, v] : d.metadata) meta[k] = v;
  j["metadata"] = std::move(meta);
  Json runs = Json::array();
  for (const auto& run : d.runs) {
    Json circuits = Json::array();
    for (const auto& c : run.circuits) {
      Json counts = Json::object();
      for (std::size_t k = 0; k < c.counts.size(); ++k) {
        if (c.counts[k] != 0) counts[outcome_bitstring(k, d.num_qubits)] = c.counts[k];
      }
      circuits.push_back({{"state", c.state}, {"counts", std::move(counts)}});
    }
    runs.push_back({{"circuits", std::move(circuits)}});
  }
  j["runs"] = std::move(runs);
  return dump(j);
}

CountsDataset counts_from_json(std::string_view text) {
  const Json j = parse(text);
  expect_schema(j, kCountsSchema);
  CountsDataset d;
  d.num_qubits = qubit_number(field(j, "num_qubits", "counts"), "counts.num_qubits");
  d.shots_per_circuit = unsigned_integer(field(j, "shots", "counts"), "counts.shots");
  if (j.contains("seed")) d.seed = unsigned_integer(j["seed"], "counts.seed");
  if (j.contains("metadata")) {
    const Json& meta = j["metadata"];
    if (!meta.is_object()) throw std::invalid_argument("counts.metadata: expected an object");
    for (const auto& [k, v] : meta.items()) {
      d.metadata[k] = v.is_string() ? v.get<std::string>() : v.dump();
    }
  }
  const Json& runs = field(j, "runs", "counts");
  if (!runs.is_array()) throw std::invalid_argument("counts.runs: expected an array");
  const std::size_t outcomes = std::size_t{1} << d.num_qubits;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const std::string run_path = fmt::format("counts.runs[{}]", r);
    const Json& circuits = field(runs[r], "circuits", run_path);
    if (!circuits.is_array()) {
      throw std::invalid_argument(fmt::format("{}.circuits: expected an array", run_path));
    }
    Run run;
    for (std::size_t c = 0; c < circuits.size(); ++c) {
      const std::string path = fmt::format("{}.circuits[{}]", run_path, c);
      const Json& state = field(circuits[c], "state", path);
      if (!state.is_string()) throw std::invalid_argument(fmt::format("{}.state: expected a string", path));
      CircuitRecord rec{state.get<std::string>(), std::vector<std::uint64_t>(outcomes, 0)};
      const Json& counts = field(circuits[c], "counts", path);
      if (!counts.is_object()) throw std::invalid_argument(fmt::format("{}.counts: expected an object", path));
      for (const auto& [bits, value] : counts.items()) {
        const std::string cpath = fmt::format("{}.counts['{}']", path, bits);
        rec.counts[bitstring_index(bits, d.num_qubits, cpath)] = unsigned_integer(value, cpath);
      }
      run.circuits.push_back(std::move(rec));
    }
    d.runs.push_back(std::move(run));
  }
  d.validate();
  return d;
}

std::string distribution_to_json(const Distribution& d) {
  Json j;
  j["schema"] = kDistributionSchema;
  j["num_qubits"] = d.num_qubits;
  Json probs = Json::object();
  for (std::size_t k = 0; k < d.probabilities.size(); ++k) {
    probs[outcome_bitstring(k, d.num_qubits)] = d.probabilities[k];
  }
  j["probabilities"] = std::move(probs);
  return dump(j);
}

Distribution distribution_from_json(std::string_view text) {
  const Json j = parse(text);
  expect_schema(j, kDistributionSchema);
  Distribution d;
  d.num_qubits = qubit_number(field(j, "num_qubits", "distribution"), "distribution.num_qubits");
  d.probabilities.assign(std::size_t{1} << d.num_qubits, 0.0);
  const Json& probs = field(j, "probabilities", "distribution");
  if (!probs.is_object()) throw std::invalid_argument("distribution.probabilities: expected an object");
  for (const auto& [bits, value] : probs.items()) {
    const std::string path = fmt::format("distribution.probabilities['{}']", bits);
    d.probabilities[bitstring_index(bits, d.num_qubits, path)] = number(value, path);
  }
  return d;
}

std::string avectors_to_json(const std::vector<QubitAVector>& v) {
  Json j;
  j["schema"] = kAVectorsSchema;
  Json qubits = Json::array();
  for (const auto& q : v) {
    qubits.push_back({{"qubit", q.qubit}, {"a", {q.zero.a0, q.zero.a1, q.zero.a2, q.zero.a3}}});
  }
  j["qubits"] = std::move(qubits);
  return dump(j);
}

std::vector<QubitAVector> avectors_from_json(std::string_view text) {
  const Json j = parse(text);
  expect_schema(j, kAVectorsSchema);
  const Json& qubits = field(j, "qubits", "avectors");
  if (!qubits.is_array()) throw std::invalid_argument("avectors.qubits: expected an array");
  std::vector<QubitAVector> out;
  for (std::size_t k = 0; k < qubits.size(); ++k) {
    const std::string path = fmt::format("avectors.qubits[{}]", k);
    QubitAVector q;
    q.qubit = static_cast<int>(unsigned_integer(field(qubits[k], "qubit", path), path + ".qubit"));
    const Json& a = field(qubits[k], "a", path);
    if (!a.is_array() || a.size() != 4) {
      throw std::invalid_argument(fmt::format("{}.a: expected [a0, a1, a2, a3]", path));
    }
    q.zero = {number(a[0], path + ".a[0]"), number(a[1], path + ".a[1]"),
              number(a[2], path + ".a[2]"), number(a[3], path + ".a[3]")};
    out.push_back(q);
  }
  return out;
}

NoisySpec noise_from_json(std::string_view text) {
  const Json j = parse(text);
  expect_schema(j, kNoiseSchema);
  const Json& qubits = field(j, "qubits", "noise");
  if (!qubits.is_array() || qubits.empty()) {
    throw std::invalid_argument("noise.qubits: expected a non-empty array");
  }
  NoisySpec spec;
  for (std::size_t k = 0; k < qubits.size(); ++k) {
    const std::string path = fmt::format("noise.qubits[{}]", k);
    const Json& q = qubits[k];
    if (!q.is_object()) throw std::invalid_argument(fmt::format("{}: expected an object", path));
    auto opt = [&](const char* key) {
      return q.contains(key) ? number(q[key], fmt::format("{}.{}", path, key)) : 0.0;
    };
    spec.qubits.push_back({opt("p01"), opt("p10"), opt("tilt_x"), opt("tilt_y")});
  }
  return spec;
}

std::string noise_to_json(const NoisySpec& spec) {
  Json j;
  j["schema"] = kNoiseSchema;
  Json qubits = Json::array();
  for (const auto& q : spec.qubits) {
    qubits.push_back({{"p01", q.p01}, {"p10", q.p10}, {"tilt_x", q.tilt_x}, {"tilt_y", q.tilt_y}});
  }
  j["qubits"] = std::move(qubits);
  return dump(j);
}

std::string table_to_json(const ComparisonTable& t, const std::vector<CrosstalkFlag>& flags) {
  Json j;
  j["schema"] = kTableSchema;
  j["rows"] = t.rows;
  j["cols"] = t.cols;
  Json dist = Json::array();
  for (const auto& row : t.distances) {
    Json r = Json::array();
    for (const auto& d : row) r.push_back(d ? Json(*d) : Json(nullptr));
    dist.push_back(std::move(r));
  }
  j["distances"] = std::move(dist);
  j["floor"] = t.fluctuation_scale;
  j["missing"] = t.missing;
  if (!flags.empty()) {
    Json f = Json::array();
    for (const auto& flag : flags) {
      f.push_back({{"row", flag.row},
                   {"col", flag.col},
                   {"distance", flag.distance},
                   {"threshold", flag.threshold},
                   {"flagged", flag.flagged}});
    }
    j["flags"] = std::move(f);
  }
  return dump(j);
}

std::string mle_diagnostics_to_json(const MleResult& r, const MleConfig& cfg) {
  const PovmValidityReport validity = check_povm(r.povm);
  Json j;
  j["schema"] = kMleDiagnosticsSchema;
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  j["final_step_norm"] = r.final_step_norm;
  j["epsilon"] = cfg.epsilon;
  j["max_iterations"] = cfg.max_iterations;
  j["trace_interval"] = cfg.trace_interval;
  j["log_likelihood_trace"] = r.log_likelihood_trace;
  j["max_s_asymmetry"] = r.max_s_asymmetry;
  j["damped_steps"] = r.damped_steps;
  j["completeness_residual"] = validity.completeness_residual;
  j["min_eigenvalue"] = validity.min_eigenvalue;
  return dump(j);
}

std::string bootstrap_to_json(const BootstrapReport& r, std::uint64_t seed,
                              std::optional<double> fluctuation) {
  Json j;
  j["schema"] = kBootstrapSchema;
  j["num_qubits"] = r.num_qubits;
  j["num_resamples"] = r.num_resamples;
  j["excluded"] = r.excluded;
  j["seed"] = seed;
  Json mean = Json::object(), stddev = Json::object();
  for (std::size_t n = 0; n < r.mean.size(); ++n) {
    const std::string bits = outcome_bitstring(n, r.num_qubits);
    mean[bits] = coeff_array(r.mean[n]);
    stddev[bits] = coeff_array(r.stddev[n]);
  }
  j["mean"] = std::move(mean);
  j["stddev"] = std::move(stddev);
  if (fluctuation) j["fluctuation_scale"] = *fluctuation;
  return dump(j);
}

std::string response_matrix_to_json(const ResponseMatrix& m, std::optional<double> excluded_weight) {
  Json j;
  j["schema"] = kResponseMatrixSchema;
  j["num_qubits"] = m.num_qubits();
  j["legend"] = string_legend(m.num_qubits());
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.entries().rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.entries().cols(); ++c) row.push_back(m.entries()(r, c));
    rows.push_back(std::move(row));
  }
  j["entries"] = std::move(rows);
  j["has_negative_entries"] = m.has_negative_entries();
  if (excluded_weight) j["excluded_weight"] = *excluded_weight;
  return dump(j);
}

ResponseMatrix response_matrix_from_json(std::string_view text) {
  const Json j = parse(text);
  expect_schema(j, kResponseMatrixSchema);
  const int n = qubit_number(field(j, "num_qubits", "response_matrix"), "response_matrix.num_qubits");
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
  const Json& rows = field(j, "entries", "response_matrix");
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != dim) {
    throw std::invalid_argument(fmt::format("response_matrix.entries: expected {} rows", dim));
  }
  Eigen::MatrixXd m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    const Json& row = rows[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim) {
      throw std::invalid_argument(fmt::format("response_matrix.entries[{}]: expected {} values", r, dim));
    }
    for (Eigen::Index c = 0; c < dim; ++c) {
      m(r, c) = number(row[static_cast<std::size_t>(c)], fmt::format("response_matrix.entries[{}][{}]", r, c));
    }
  }
  return ResponseMatrix(n, std::move(m));
}

std::string mitigation_to_json(const MitigationResult& r, int num_qubits) {
  Json j;
  j["schema"] = kMitigationSchema;
  j["num_qubits"] = num_qubits;
  j["method"] = method_name(r.method);
  Json probs = Json::object();
  for (std::size_t k = 0; k < r.corrected.size(); ++k) {
    probs[outcome_bitstring(k, num_qubits)] = r.corrected[k];
  }
  j["probabilities"] = std::move(probs);
  j["residual"] = r.residual;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["projected_gradient_norm"] = r.projected_gradient_norm;
  j["kkt_satisfied"] = r.kkt_satisfied;
  return dump(j);
}

}  // namespace qdt::io
