// Copyright 2026 The auditfuse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// CSV output. Every file starts with "# auditfuse-csv v<N> <schema>" followed
// by a header row. Numbers use '.' and round-trip precision.

#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "auditfuse/analytic.hpp"
#include "auditfuse/simcore.hpp"

namespace auditfuse::csv {

inline constexpr int kSchemaVersion = 1;

inline std::string version_line(std::string_view schema) {
  return "# auditfuse-csv v" + std::to_string(kSchemaVersion) + " " + std::string(schema);
}

/// Shortest decimal that reads back to the same double.
inline std::string number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

inline std::string number(std::optional<double> x) { return x ? number(*x) : std::string(); }

inline void write_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k) out << ',';
    out << cells[k];
  }
  out << '\n';
}

// ---------------------------------------------------------------------------
// Performance schema, shared by analytic sweeps and Monte Carlo runs.

inline constexpr std::string_view kPerformanceSchema = "performance";
inline constexpr std::size_t kComponentSlots = 4;

inline std::vector<std::string> performance_header() {
  std::vector<std::string> h = {"scheme", "alpha0",  "p1",    "p2",   "n_sensors", "p_d",     "p_f",       "prior0",
                                "prior1", "threshold", "mu0", "mu1",  "var0",      "var1",    "gamma_f",   "gamma_m",
                                "p_e",    "degenerate"};
  for (std::size_t c = 0; c < kComponentSlots; ++c) {
    const std::string p = "c" + std::to_string(c) + "_";
    for (const char* f : {"label", "count", "pi11", "pi10", "weight", "posterior"}) h.push_back(p + f);
  }
  for (const char* f : {"expected_ras_bits", "expected_ras_group_bits", "tas_bits", "ratio_f", "trials", "p_e_hat",
                        "standard_error", "false_alarm_rate", "miss_rate"})
    h.push_back(f);
  return h;
}

inline std::vector<std::string> performance_row(const analytic::SchemePerformance& perf, const DetectionParams& det,
                                                const AttackParams& atk,
                                                const std::optional<sim::EmpiricalPerf>& empirical = std::nullopt) {
  std::vector<std::string> r = {std::string(analytic::to_string(perf.scheme)),
                                number(atk.alpha0),
                                number(atk.p1),
                                number(atk.p2),
                                std::to_string(perf.n_sensors),
                                number(det.p_d),
                                number(det.p_f),
                                number(det.prior0),
                                number(det.prior1),
                                number(perf.threshold),
                                number(perf.mu0),
                                number(perf.mu1),
                                number(perf.var0),
                                number(perf.var1),
                                number(perf.gamma_f),
                                number(perf.gamma_m),
                                number(perf.p_e),
                                perf.degenerate ? "1" : "0"};
  for (std::size_t c = 0; c < kComponentSlots; ++c) {
    if (c < perf.components.size()) {
      const auto& k = perf.components[c];
      for (auto s : {k.label, number(k.expected_count), number(k.pmf.pi11), number(k.pmf.pi10), number(k.weight),
                     number(k.posterior)})
        r.push_back(s);
    } else {
      r.insert(r.end(), 6, std::string());
    }
  }
  const auto bits = analytic::expected_transmitted_bits(det, atk, perf.n_sensors);
  r.push_back(number(bits.ras_sensor_bits));
  r.push_back(number(bits.ras_group_bits));
  r.push_back(number(bits.tas_bits));
  r.push_back(number(analytic::mismatch_ratio_f(det, atk)));
  if (empirical) {
    r.push_back(std::to_string(empirical->trials));
    r.push_back(number(empirical->p_e_hat()));
    r.push_back(number(empirical->standard_error()));
    r.push_back(number(empirical->false_alarm_rate()));
    r.push_back(number(empirical->miss_rate()));
  } else {
    r.insert(r.end(), 5, std::string());
  }
  return r;
}

}  // namespace auditfuse::csv
