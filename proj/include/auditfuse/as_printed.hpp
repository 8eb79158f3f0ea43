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

// Expanded polynomials in the form they are usually quoted, kept for
// documentation and comparison only. Fusion never reads from here; the values
// in analytic.hpp are the ones the oracle agrees with.

#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "auditfuse/analytic.hpp"

namespace auditfuse::as_printed {

/// α̲ for the legacy attack (p1 = p2 = p).
inline double tas_low(double a, double p) {
  return a * (1.0 - p) * (1.0 - 2.0 * a * p * (1.0 - 2.0 * p)) /
         (1.0 - a * (3.0 - 2.0 * p) * p + 4.0 * a * a * (1.0 - p) * p * p);
}

/// ᾱ for the legacy attack. Does not vanish at a = 0.
inline double tas_high(double a, double p) {
  return (1.0 + 2.0 * (1.0 - p) * (a - 2.0 * a * p)) / (1.0 + 2.0 * (1.0 - p) * (1.0 - 2.0 * a * p));
}

/// α̲^I, intelligent attack.
inline double intelligent_low(double a, double p1, double p2) {
  const double num = 4 * a * a * p1 * p1 * p2 + 4 * a * a * p1 * p2 - 2 * a * a * p1 + 2 * a * a * p1 * p1 -
                     a * p2 + a;
  const double den = 4 * a * a * p1 * p1 * p2 + 4 * a * a * p1 * p2 + 2 * a * p1 * p1 - a * p2 - 2 * a * p1 + 1;
  return num / den;
}

/// ᾱ^I, intelligent attack.
inline double intelligent_high(double a, double p1, double p2) {
  const double num = 4 * a * p1 * p1 * p2 - 4 * a * p1 * p2 + 2 * a * p1 - 2 * a * p1 * p1 + p2;
  const double den = 4 * a * p1 * p1 * p2 - 4 * a * p1 * p2 - 2 * p1 * p1 + p2 + 2 * p1;
  return num / den;
}

/// Occupancy weight of SS_high for a Byzantine pair.
inline double f4_bb(double p1, double p2) {
  const double t = 2.0 * p1 * (1.0 - p2) * (1.0 - p1) + p2 * p1 * p1;
  return t * t;
}

/// EAS set pmf with flip probability α_e·p1.
inline std::optional<analytic::ConditionalPmf> eas_pmf(const DetectionParams& det, const AttackParams& atk,
                                                       EasSet set) {
  const auto post = analytic::eas_posterior(atk)[set].posterior;
  if (!post) return std::nullopt;
  return analytic::conditional_pmf(det, *post, atk.p1);
}

struct Discrepancy {
  std::string quantity;
  double printed = 0.0;
  double exact = 0.0;

  [[nodiscard]] double abs_diff() const { return std::abs(printed - exact); }
};

/// Printed vs exact values at one parameter point. Entries whose exact value
/// is undefined (empty set) are skipped.
inline std::vector<Discrepancy> diagnose(const DetectionParams& det, const AttackParams& atk) {
  std::vector<Discrepancy> out;
  const auto intel = analytic::intelligent_posterior(atk);
  if (atk.is_legacy()) {
    if (intel.low.posterior) out.push_back({"tas_low", tas_low(atk.alpha0, atk.p1), *intel.low.posterior});
    if (intel.high.posterior) out.push_back({"tas_high", tas_high(atk.alpha0, atk.p1), *intel.high.posterior});
  }
  if (intel.low.posterior)
    out.push_back({"intelligent_low", intelligent_low(atk.alpha0, atk.p1, atk.p2), *intel.low.posterior});
  if (intel.high.posterior)
    out.push_back({"intelligent_high", intelligent_high(atk.alpha0, atk.p1, atk.p2), *intel.high.posterior});
  out.push_back({"f4_bb", f4_bb(atk.p1, atk.p2),
                 analytic::eas_factor(atk, EasSet::ss_high, Identity::byzantine, Identity::byzantine)});
  for (EasSet s : kEasSets) {
    const auto printed = eas_pmf(det, atk, s);
    const auto exact = analytic::set_pmf(det, atk, s);
    if (printed && exact) {
      out.push_back({"pi11_" + std::string(to_string(s)), printed->pi11, exact->pi11});
      out.push_back({"pi10_" + std::string(to_string(s)), printed->pi10, exact->pi10});
    }
  }
  const auto votes = analytic::group_vote_model(det, atk);
  const auto ss = analytic::set_pmf(det, atk, EasSet::ss_low);
  if (votes.vote && ss) {
    const auto approx = analytic::group_vote_pmf(*ss);
    out.push_back({"pi11_group_vote", approx.pi11, votes.vote->pi11});
    out.push_back({"pi10_group_vote", approx.pi10, votes.vote->pi10});
  }
  return out;
}

}  // namespace auditfuse::as_printed
