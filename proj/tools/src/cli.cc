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

#include "qdt_cli/cli.h"

#include <cmath>
#include <filesystem>
#include <optional>
#include <stdexcept>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "qdt/analysis.h"
#include "qdt/detector_simulator.h"
#include "qdt/errors.h"
#include "qdt/io.h"
#include "qdt/mitigation.h"
#include "qdt/report.h"
#include "qdt/tomography_engine.h"

namespace qdt::cli {
namespace {

namespace fs = std::filesystem;

struct Options {
  int verbosity = 0;

  // simulate
  int qubits = 0;
  std::uint64_t shots = 8192;
  std::size_t runs = 100;
  std::uint64_t seed = 0;
  bool ideal = false;
  std::string povm_in;
  std::string noise_in;
  std::optional<double> p01, p10, tilt_x, tilt_y;
  std::string target;

  // tomo / bootstrap
  std::string counts_in;
  double epsilon = 1e-10;
  std::size_t max_iters = 1'000'000;
  std::string out_povm;
  std::string out_diag;
  std::size_t resamples = 100;

  // reduce
  std::vector<int> keep;

  // compare
  std::string a_in, b_in;
  double floor = 0.0;
  double multiplier = 10.0;

  // mitigate
  std::string matrix_from;
  std::string dist_in;
  std::string method = "lsq";
  bool crosstalk = false;
  double tol = 1e-10;
  std::size_t lsq_iters = 100'000;
  std::string out_matrix;

  // report
  std::string format = "text";

  std::string out;
};

// Writes to --out when given, otherwise to stdout.
void emit(const Options& o, std::ostream& out, std::string_view text) {
  if (o.out.empty()) {
    out << text;
  } else {
    io::write_text(o.out, text);
  }
}

void require_distinct(const std::vector<std::string>& inputs, const std::vector<std::string>& outputs) {
  for (const auto& i : inputs) {
    for (const auto& o : outputs) {
      if (i.empty() || o.empty()) continue;
      std::error_code ec;
      if (i == o || fs::equivalent(i, o, ec)) {
        throw std::invalid_argument(fmt::format("output path '{}' would overwrite input '{}'", o, i));
      }
    }
  }
  for (std::size_t a = 0; a < outputs.size(); ++a) {
    for (std::size_t b = a + 1; b < outputs.size(); ++b) {
      if (!outputs[a].empty() && outputs[a] == outputs[b]) {
        throw std::invalid_argument(fmt::format("output path '{}' given twice", outputs[a]));
      }
    }
  }
}

MleConfig mle_config(const Options& o) {
  MleConfig cfg;
  cfg.epsilon = o.epsilon;
  cfg.max_iterations = o.max_iters;
  return cfg;
}

DetectorPovm simulation_detector(const Options& o) {
  const bool uniform = o.p01 || o.p10 || o.tilt_x || o.tilt_y;
  const int sources = int{o.ideal} + int{!o.povm_in.empty()} + int{!o.noise_in.empty()} + int{uniform};
  if (sources != 1) {
    throw std::invalid_argument(
        "choose exactly one detector: --ideal, --povm, --noise, or --p01/--p10/--tilt-x/--tilt-y");
  }
  if (o.ideal) return ideal_computational_povm(o.qubits);
  if (!o.povm_in.empty()) {
    DetectorPovm p = io::povm_from_json(io::read_text(o.povm_in));
    if (p.num_qubits() != o.qubits) {
      throw std::invalid_argument(fmt::format("POVM file describes {} qubits but --qubits is {}",
                                              p.num_qubits(), o.qubits));
    }
    const PovmValidityReport v = check_povm(p);
    if (!v.is_valid) {
      throw std::invalid_argument(fmt::format("POVM file is not a valid detector (residual {:.3e}, min eigenvalue {:.3e})",
                                              v.completeness_residual, v.min_eigenvalue));
    }
    return p;
  }
  NoisySpec spec;
  if (!o.noise_in.empty()) {
    spec = io::noise_from_json(io::read_text(o.noise_in));
    if (static_cast<int>(spec.qubits.size()) != o.qubits) {
      throw std::invalid_argument(fmt::format("noise file lists {} qubits but --qubits is {}",
                                              spec.qubits.size(), o.qubits));
    }
  } else {
    const QubitNoise q{o.p01.value_or(0.0), o.p10.value_or(0.0), o.tilt_x.value_or(0.0),
                       o.tilt_y.value_or(0.0)};
    spec.qubits.assign(static_cast<std::size_t>(o.qubits), q);
  }
  return make_noisy_detector(spec);
}

ComplexMatrix ghz_state(int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
  rho(0, 0) = rho(0, dim - 1) = rho(dim - 1, 0) = rho(dim - 1, dim - 1) = 0.5;
  return rho;
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
  require_distinct({o.povm_in, o.noise_in}, {o.out});
  const DetectorPovm p = simulation_detector(o);
  if (!o.target.empty()) {
    if (o.target != "ghz") throw std::invalid_argument(fmt::format("unknown --target '{}'", o.target));
    io::Distribution d{o.qubits, simulate_state_measurement(p, ghz_state(o.qubits), o.shots, o.runs, o.seed)};
    emit(o, out, io::distribution_to_json(d));
    return kOk;
  }
  CountsDataset d = simulate_qdt_experiment(p, o.shots, o.runs, o.seed);
  d.metadata["detector"] = o.ideal ? "ideal" : !o.povm_in.empty() ? "povm" : "noise";
  if (o.verbosity > 0) {
    err << fmt::format("simulated {} runs x {} circuits\n", d.runs.size(),
                       d.runs.empty() ? 0 : d.runs.front().circuits.size());
  }
  emit(o, out, io::counts_to_json(d));
  return kOk;
}

int cmd_tomo(const Options& o, std::ostream& out, std::ostream& err) {
  require_distinct({o.counts_in}, {o.out_povm, o.out_diag});
  const CountsDataset d = io::counts_from_json(io::read_text(o.counts_in));
  const MleConfig cfg = mle_config(o);
  const MleResult r = run_mle(d, cfg);
  const std::string povm = io::povm_to_json(r.povm);
  if (o.out_povm.empty()) {
    out << povm;
  } else {
    io::write_text(o.out_povm, povm);
  }
  if (!o.out_diag.empty()) io::write_text(o.out_diag, io::mle_diagnostics_to_json(r, cfg));
  if (o.verbosity > 0) {
    err << fmt::format("{} after {} iterations (step norm {:.3e})\n",
                       r.converged ? "converged" : "not converged", r.iterations, r.final_step_norm);
  }
  if (!r.converged) {
    err << fmt::format("warning: MLE did not converge within {} iterations\n", cfg.max_iterations);
    return kNotConverged;
  }
  return kOk;
}

int cmd_reduce(const Options& o, std::ostream& out) {
  require_distinct({o.povm_in}, {o.out});
  const DetectorPovm p = io::povm_from_json(io::read_text(o.povm_in));
  emit(o, out, io::povm_to_json(reduce_detector(p, o.keep)));
  return kOk;
}

// Per-qubit single-qubit detectors from either a POVM file (reduced per
// qubit) or an a-vector file.
std::map<int, DetectorPovm> single_qubit_detectors(const std::string& path) {
  const std::string text = io::read_text(path);
  std::map<int, DetectorPovm> out;
  if (io::peek_schema(text) == io::kAVectorsSchema) {
    for (const auto& q : io::avectors_from_json(text)) {
      if (!out.emplace(q.qubit, single_qubit_povm(q.zero)).second) {
        throw std::invalid_argument(fmt::format("{}: qubit {} listed twice", path, q.qubit));
      }
    }
    return out;
  }
  const DetectorPovm p = io::povm_from_json(text);
  for (int q = 0; q < p.num_qubits(); ++q) {
    const int keep[] = {q};
    out.emplace(q, p.num_qubits() == 1 ? p : reduce_detector(p, keep));
  }
  return out;
}

int cmd_compare(const Options& o, std::ostream& out) {
  require_distinct({o.a_in, o.b_in}, {o.out});
  ComparisonTable t = individual_vs_parallel(single_qubit_detectors(o.a_in), single_qubit_detectors(o.b_in));
  std::vector<CrosstalkFlag> flags;
  if (o.floor > 0.0) {
    t.fluctuation_scale = o.floor;
    flags = flag_crosstalk(t, o.multiplier);
  }
  if (o.format == "json") {
    emit(o, out, io::table_to_json(t, flags));
  } else if (o.format == "text") {
    emit(o, out, render_table_text(t, flags));
  } else {
    throw std::invalid_argument(fmt::format("compare supports --format json|text, not '{}'", o.format));
  }
  return kOk;
}

struct LoadedMatrix {
  ResponseMatrix matrix;
  std::optional<double> excluded_weight;
};

LoadedMatrix load_response_matrix(const Options& o) {
  const std::string text = io::read_text(o.matrix_from);
  const std::string schema = io::peek_schema(text);
  if (schema == io::kResponseMatrixSchema) return {io::response_matrix_from_json(text), std::nullopt};
  if (schema == io::kAVectorsSchema) {
    std::vector<ReadoutPair> pairs;
    for (const auto& q : io::avectors_from_json(text)) pairs.emplace_back(q.zero, q.zero.complement());
    return {build_response_matrix(pairs), std::nullopt};
  }
  const DetectorPovm p = io::povm_from_json(text);
  if (o.crosstalk) {
    CrosstalkResponse c = build_response_matrix_crosstalk(p);
    return {std::move(c.matrix), c.excluded_weight};
  }
  std::vector<ReadoutPair> pairs;
  for (const auto& [q, single] : single_qubit_detectors(o.matrix_from)) {
    pairs.emplace_back(single.avector(0), single.avector(1));
  }
  return {build_response_matrix(pairs), std::nullopt};
}

int cmd_mitigate(const Options& o, std::ostream& out, std::ostream& err) {
  require_distinct({o.matrix_from, o.dist_in}, {o.out, o.out_matrix});
  const LoadedMatrix m = load_response_matrix(o);
  io::Distribution dist = io::distribution_from_json(io::read_text(o.dist_in));
  if (dist.num_qubits != m.matrix.num_qubits()) {
    throw std::invalid_argument(fmt::format("distribution has {} qubits, response matrix {}",
                                            dist.num_qubits, m.matrix.num_qubits()));
  }
  // Partial listings (rounded or truncated reports) are renormalized.
  double total = 0.0;
  for (double p : dist.probabilities) {
    if (!(p >= 0.0)) throw std::invalid_argument(fmt::format("distribution has a negative entry {}", p));
    total += p;
  }
  if (!(total > 0.0)) throw std::invalid_argument("distribution has no probability mass");
  if (std::abs(total - 1.0) > 1e-6) {
    err << fmt::format("warning: distribution sums to {:.6f}; renormalizing\n", total);
  }
  for (double& p : dist.probabilities) p /= total;
  if (!o.out_matrix.empty()) {
    io::write_text(o.out_matrix, io::response_matrix_to_json(m.matrix, m.excluded_weight));
  }
  MitigationResult r;
  if (o.method == "inversion") {
    r = mitigate_inversion(m.matrix, dist.probabilities);
  } else if (o.method == "lsq") {
    r = mitigate_lsq(m.matrix, dist.probabilities, {o.tol, o.lsq_iters, false});
  } else {
    throw std::invalid_argument(fmt::format("unknown --method '{}' (inversion|lsq)", o.method));
  }
  emit(o, out, io::mitigation_to_json(r, dist.num_qubits));
  if (!r.converged) {
    err << fmt::format("warning: least squares stopped with projected gradient norm {:.3e}\n",
                       r.projected_gradient_norm);
    return kNotConverged;
  }
  return kOk;
}

int cmd_bootstrap(const Options& o, std::ostream& out) {
  require_distinct({o.counts_in}, {o.out});
  const CountsDataset d = io::counts_from_json(io::read_text(o.counts_in));
  const BootstrapReport r = bootstrap(d, o.resamples, o.seed, mle_config(o));
  std::optional<double> scale;
  if (r.samples.size() >= 2) scale = fluctuation_scale(r);
  emit(o, out, io::bootstrap_to_json(r, o.seed, scale));
  return kOk;
}

int cmd_report(const Options& o, std::ostream& out, std::ostream& err) {
  require_distinct({o.povm_in}, {o.out});
  const DetectorPovm p = io::povm_from_json(io::read_text(o.povm_in));
  const DetectorReport r = bloch_summary(p);
  for (const auto& w : r.warnings) err << "warning: " << w << "\n";
  if (o.format == "text") {
    emit(o, out, render_text(r));
  } else if (o.format == "json") {
    emit(o, out, render_json(p, r));
  } else if (o.format == "svg") {
    emit(o, out, render_svg(r));
  } else {
    throw std::invalid_argument(fmt::format("report supports --format json|text|svg, not '{}'", o.format));
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Quantum detector tomography and readout-error mitigation", "qdt"};
  app.require_subcommand(1);
  app.add_flag("-v,--verbose", o.verbosity, "Print progress to stderr");

  auto* sim = app.add_subcommand("simulate", "Simulate a detector-tomography experiment");
  sim->add_option("--qubits", o.qubits, "Number of qubits")->required()->check(CLI::Range(1, 5));
  sim->add_option("--shots", o.shots, "Shots per circuit")->check(CLI::PositiveNumber);
  sim->add_option("--runs", o.runs, "Independent runs")->check(CLI::PositiveNumber);
  sim->add_option("--seed", o.seed, "Random seed");
  sim->add_flag("--ideal", o.ideal, "Ideal computational-basis detector");
  sim->add_option("--povm", o.povm_in, "Detector POVM file")->check(CLI::ExistingFile);
  sim->add_option("--noise", o.noise_in, "Per-qubit noise file")->check(CLI::ExistingFile);
  sim->add_option("--p01", o.p01, "P(read 1 | prepared 0), every qubit");
  sim->add_option("--p10", o.p10, "P(read 0 | prepared 1), every qubit");
  sim->add_option("--tilt-x", o.tilt_x, "a1 of Pi^(0), every qubit");
  sim->add_option("--tilt-y", o.tilt_y, "a2 of Pi^(0), every qubit");
  sim->add_option("--target", o.target, "Measure a target state instead (ghz); writes a distribution");
  sim->add_option("--out", o.out, "Output file (default stdout)");

  auto* tomo = app.add_subcommand("tomo", "Reconstruct a POVM by maximum likelihood");
  tomo->add_option("--counts", o.counts_in, "Counts file")->required()->check(CLI::ExistingFile);
  tomo->add_option("--epsilon", o.epsilon, "Convergence threshold")->check(CLI::PositiveNumber);
  tomo->add_option("--max-iters", o.max_iters, "Iteration cap")->check(CLI::PositiveNumber);
  tomo->add_option("--out-povm", o.out_povm, "POVM output (default stdout)");
  tomo->add_option("--out-diag", o.out_diag, "Diagnostics output");

  auto* reduce = app.add_subcommand("reduce", "Reduce a POVM to a subset of qubits");
  reduce->add_option("--povm", o.povm_in, "POVM file")->required()->check(CLI::ExistingFile);
  reduce->add_option("--keep", o.keep, "Qubits to keep")->required()->delimiter(',');
  reduce->add_option("--out", o.out, "Output file (default stdout)");

  auto* compare = app.add_subcommand("compare", "Per-qubit distances between two detectors");
  compare->add_option("--a", o.a_in, "POVM or a-vector file")->required()->check(CLI::ExistingFile);
  compare->add_option("--b", o.b_in, "POVM or a-vector file")->required()->check(CLI::ExistingFile);
  compare->add_option("--floor", o.floor, "Statistical distance floor; enables flags")->check(CLI::NonNegativeNumber);
  compare->add_option("--multiplier", o.multiplier, "Flag threshold in units of the floor")->check(CLI::PositiveNumber);
  compare->add_option("--format", o.format, "json or text");
  compare->add_option("--out", o.out, "Output file (default stdout)");

  auto* mitigate = app.add_subcommand("mitigate", "Correct a readout distribution");
  mitigate->add_option("--matrix-from", o.matrix_from, "POVM, a-vector or response-matrix file")
      ->required()->check(CLI::ExistingFile);
  mitigate->add_option("--dist", o.dist_in, "Observed distribution")->required()->check(CLI::ExistingFile);
  mitigate->add_option("--method", o.method, "inversion or lsq");
  mitigate->add_flag("--crosstalk", o.crosstalk, "Use the full I/Z support of an N-qubit POVM");
  mitigate->add_option("--tol", o.tol, "Projected-gradient tolerance")->check(CLI::PositiveNumber);
  mitigate->add_option("--max-iters", o.lsq_iters, "Iteration cap")->check(CLI::PositiveNumber);
  mitigate->add_option("--out-matrix", o.out_matrix, "Also write the response matrix");
  mitigate->add_option("--out", o.out, "Output file (default stdout)");

  auto* boot = app.add_subcommand("bootstrap", "Bootstrap uncertainties of the MLE over runs");
  boot->add_option("--counts", o.counts_in, "Counts file")->required()->check(CLI::ExistingFile);
  boot->add_option("--resamples", o.resamples, "Number of resamples")->check(CLI::PositiveNumber);
  boot->add_option("--seed", o.seed, "Random seed");
  boot->add_option("--epsilon", o.epsilon, "Convergence threshold")->check(CLI::PositiveNumber);
  boot->add_option("--max-iters", o.max_iters, "Iteration cap")->check(CLI::PositiveNumber);
  boot->add_option("--out", o.out, "Output file (default stdout)");

  auto* report = app.add_subcommand("report", "Bloch-vector summary of a detector");
  report->add_option("--povm", o.povm_in, "POVM file")->required()->check(CLI::ExistingFile);
  report->add_option("--format", o.format, "json, text or svg");
  report->add_option("--out", o.out, "Output file (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidInput;
  }

  try {
    if (*sim) return cmd_simulate(o, out, err);
    if (*tomo) return cmd_tomo(o, out, err);
    if (*reduce) return cmd_reduce(o, out);
    if (*compare) return cmd_compare(o, out);
    if (*mitigate) return cmd_mitigate(o, out, err);
    if (*boot) return cmd_bootstrap(o, out);
    if (*report) return cmd_report(o, out, err);
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << "\n";
    return kNotConverged;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
  return kInvalidInput;
}

}  // namespace qdt::cli
