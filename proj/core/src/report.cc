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

#include "qdt/report.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <json.hpp>

#include "qdt/io.h"

namespace qdt {

DetectorReport bloch_summary(const DetectorPovm& p) {
  DetectorReport r;
  r.num_qubits = p.num_qubits();
  for (int q = 0; q < p.num_qubits(); ++q) {
    const int keep[] = {q};
    const DetectorPovm single = p.num_qubits() == 1 ? p : reduce_detector(p, keep);
    for (int outcome = 0; outcome < 2; ++outcome) {
      BlochArrow arrow;
      arrow.qubit = q;
      arrow.outcome = outcome;
      arrow.a = single.avector(static_cast<std::size_t>(outcome));
      arrow.width = arrow.a.a0;
      if (!(arrow.a.a0 > 0.0)) {
        r.warnings.push_back(fmt::format(
            "qubit {} outcome {}: a0 = {:.6g} is not positive; arrow drawn with zero length", q,
            outcome, arrow.a.a0));
        arrow.width = std::max(arrow.a.a0, 0.0);
      } else {
        std::array<double, 3> v = {arrow.a.a1 / arrow.a.a0, arrow.a.a2 / arrow.a.a0,
                                   arrow.a.a3 / arrow.a.a0};
        arrow.length = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
        if (arrow.length > 1.0) {
          arrow.clamped = true;
          for (double& x : v) x /= arrow.length;
          r.warnings.push_back(fmt::format(
              "qubit {} outcome {}: arrow length {:.6f} exceeds 1 (element not positive); clamped", q,
              outcome, arrow.length));
        }
        arrow.direction = v;
      }
      r.arrows.push_back(arrow);
    }
  }
  return r;
}

std::string render_text(const DetectorReport& r) {
  std::string out = fmt::format("detector summary: {} qubit(s)\n", r.num_qubits);
  out += fmt::format("{:>5} {:>7} {:>10} {:>10} {:>10} {:>10} {:>8}\n", "qubit", "outcome", "a0", "a1",
                     "a2", "a3", "length");
  for (const auto& a : r.arrows) {
    out += fmt::format("{:>5} {:>7} {:>10.6f} {:>10.6f} {:>10.6f} {:>10.6f} {:>8.5f}{}\n", a.qubit,
                       a.outcome, a.a.a0, a.a.a1, a.a.a2, a.a.a3, a.length, a.clamped ? " !" : "");
  }
  for (const auto& w : r.warnings) out += "warning: " + w + "\n";
  return out;
}

std::string render_json(const DetectorPovm& p, const DetectorReport& r) {
  using Json = nlohmann::ordered_json;
  Json j;
  j["schema"] = io::kReportSchema;
  j["num_qubits"] = r.num_qubits;
  Json arrows = Json::array();
  for (const auto& a : r.arrows) {
    arrows.push_back({{"qubit", a.qubit},
                      {"outcome", a.outcome},
                      {"a", {a.a.a0, a.a.a1, a.a.a2, a.a.a3}},
                      {"width", a.width},
                      {"vector", a.direction},
                      {"length", a.length},
                      {"clamped", a.clamped}});
  }
  j["arrows"] = std::move(arrows);
  j["warnings"] = r.warnings;
  j["povm"] = Json::parse(io::povm_to_json(p));
  return j.dump(2) + "\n";
}

std::string render_svg(const DetectorReport& r) {
  constexpr double kPanel = 220.0, kRadius = 80.0, kMaxStroke = 16.0;
  const int panels = std::max(r.num_qubits, 1);
  const double width = kPanel * panels, height = kPanel + 20.0;
  std::string out = fmt::format(
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0:.0f}\" height=\"{1:.0f}\" "
      "viewBox=\"0 0 {0:.0f} {1:.0f}\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      width, height);
  for (int q = 0; q < r.num_qubits; ++q) {
    const double cx = kPanel * q + kPanel / 2, cy = kPanel / 2 + 10.0;
    out += fmt::format("<g id=\"qubit{}\">\n", q);
    out += fmt::format(
        "<circle cx=\"{:.3f}\" cy=\"{:.3f}\" r=\"{:.3f}\" fill=\"none\" stroke=\"#888\"/>\n", cx, cy,
        kRadius);
    out += fmt::format(
        "<ellipse cx=\"{:.3f}\" cy=\"{:.3f}\" rx=\"{:.3f}\" ry=\"{:.3f}\" fill=\"none\" "
        "stroke=\"#bbb\" stroke-dasharray=\"4 3\"/>\n",
        cx, cy, kRadius, kRadius * 0.3);
    out += fmt::format("<text x=\"{:.3f}\" y=\"{:.3f}\" font-size=\"14\" text-anchor=\"middle\">qubit {}</text>\n",
                       cx, kPanel + 8.0, q);
    for (const auto& a : r.arrows) {
      if (a.qubit != q) continue;
      // Oblique projection: x to the lower left, y to the right, z up.
      const auto& v = a.direction;
      const double px = cx + kRadius * (v[1] - 0.35 * v[0]);
      const double py = cy - kRadius * (v[2] - 0.3 * v[0]);
      const char* colour = a.outcome == 0 ? "#1f77b4" : "#d62728";
      const double stroke = std::max(kMaxStroke * a.width, 0.5);
      if (std::hypot(px - cx, py - cy) < 1e-9) {
        out += fmt::format("<circle cx=\"{:.3f}\" cy=\"{:.3f}\" r=\"{:.3f}\" fill=\"{}\"/>\n", cx, cy,
                           stroke / 2, colour);
      } else {
        out += fmt::format(
            "<line x1=\"{:.3f}\" y1=\"{:.3f}\" x2=\"{:.3f}\" y2=\"{:.3f}\" stroke=\"{}\" "
            "stroke-width=\"{:.3f}\" stroke-linecap=\"round\" opacity=\"0.8\"/>\n",
            cx, cy, px, py, colour, stroke);
      }
    }
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string render_table_text(const ComparisonTable& t, const std::vector<CrosstalkFlag>& flags) {
  auto flagged = [&](const std::string& row, const std::string& col) {
    return std::any_of(flags.begin(), flags.end(),
                       [&](const CrosstalkFlag& f) { return f.flagged && f.row == row && f.col == col; });
  };
  std::size_t label_width = 5;
  for (const auto& r : t.rows) label_width = std::max(label_width, r.size());
  std::size_t cell = 10;
  for (const auto& c : t.cols) cell = std::max(cell, c.size() + 1);
  std::string out = fmt::format("{:<{}}", "", label_width);
  for (const auto& c : t.cols) out += fmt::format(" {:>{}}", c, cell);
  out += "\n";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    out += fmt::format("{:<{}}", t.rows[r], label_width);
    for (std::size_t c = 0; c < t.cols.size(); ++c) {
      const auto& d = t.distances[r][c];
      const std::string text =
          d ? fmt::format("{:.4f}{}", *d, flagged(t.rows[r], t.cols[c]) ? "*" : " ") : "- ";
      out += fmt::format(" {:>{}}", text, cell);
    }
    out += "\n";
  }
  if (t.fluctuation_scale > 0.0) out += fmt::format("floor: {:.3e}\n", t.fluctuation_scale);
  for (const auto& m : t.missing) out += "missing: " + m + "\n";
  return out;
}

}  // namespace qdt
