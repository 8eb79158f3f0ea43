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

// Attacker-side grid search over (p1, p2).

#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "auditfuse/analytic.hpp"
#include "auditfuse/numeric.hpp"
#include "auditfuse/parallel.hpp"

namespace auditfuse::adversary {

using analytic::Scheme;

/// P_e over the grid p1 x p2, row-major in p1. For the legacy `tas` scheme
/// the attack is tied (p2 = p1) and only the diagonal is defined; other cells
/// hold NaN.
struct Surface {
  Scheme scheme = Scheme::direct;
  double alpha0 = 0.0;
  std::vector<double> p1;
  std::vector<double> p2;
  std::vector<double> p_e;

  [[nodiscard]] double at(std::size_t r, std::size_t c) const { return p_e[r * p2.size() + c]; }
  [[nodiscard]] bool defined(std::size_t r, std::size_t c) const { return at(r, c) == at(r, c); }
};

struct AttackOptimum {
  double p1 = 0.0;
  double p2 = 0.0;
  double p_e = 0.0;
};

inline std::vector<double> unit_grid(double step) {
  if (!(step > 0.0) || step > 0.5) throw std::invalid_argument("grid_step must lie in (0, 0.5]");
  const std::size_t n = grid_count(0.0, 1.0, step);
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = grid_value(0.0, 1.0, step, k);
  return out;
}

inline Surface best_response_surface(Scheme scheme, const DetectionParams& det, double alpha0,
                                     std::uint32_t n_sensors, double grid_step = 0.05, unsigned threads = 0) {
  Surface s;
  s.scheme = scheme;
  s.alpha0 = alpha0;
  s.p1 = unit_grid(grid_step);
  s.p2 = s.p1;
  const std::size_t cols = s.p2.size();
  s.p_e.assign(s.p1.size() * cols, std::numeric_limits<double>::quiet_NaN());
  parallel_for(
      s.p1.size(),
      [&](std::size_t r) {
        for (std::size_t c = 0; c < cols; ++c) {
          if (scheme == Scheme::tas && r != c) continue;
          const AttackParams atk{alpha0, s.p1[r], s.p2[c]};
          s.p_e[r * cols + c] = analytic::scheme_performance(scheme, det, atk, n_sensors).p_e;
        }
      },
      threads);
  return s;
}

/// Argmax of P_e; exact ties go to the smaller p1, then the smaller p2.
inline AttackOptimum argmax(const Surface& s) {
  AttackOptimum best{0.0, 0.0, -1.0};
  bool found = false;
  for (std::size_t r = 0; r < s.p1.size(); ++r)
    for (std::size_t c = 0; c < s.p2.size(); ++c) {
      if (!s.defined(r, c)) continue;
      const double v = s.at(r, c);
      // Row-major traversal visits smaller p1, then smaller p2, first; strict
      // improvement keeps the earliest of equal values.
      if (!found || v > best.p_e) {
        best = {s.p1[r], s.p2[c], v};
        found = true;
      }
    }
  return best;
}

inline AttackOptimum optimize_attack(Scheme scheme, const DetectionParams& det, double alpha0,
                                     std::uint32_t n_sensors, double grid_step = 0.01, unsigned threads = 0) {
  return argmax(best_response_surface(scheme, det, alpha0, n_sensors, grid_step, threads));
}

/// Sign of P_e(p1, p2[c+1]) - P_e(p1, p2[c]) for every adjacent pair in row r:
/// +1, -1, or 0 when the difference is within `tol`.
inline std::vector<int> p2_slope_signs(const Surface& s, std::size_t r, double tol = 1e-15) {
  std::vector<int> out;
  for (std::size_t c = 0; c + 1 < s.p2.size(); ++c) {
    if (!s.defined(r, c) || !s.defined(r, c + 1)) continue;
    const double d = s.at(r, c + 1) - s.at(r, c);
    out.push_back(d > tol ? 1 : (d < -tol ? -1 : 0));
  }
  return out;
}

/// p2 that maximizes P_e in row r (smallest on ties).
inline double row_argmax_p2(const Surface& s, std::size_t r) {
  double best = -1.0;
  double where = 0.0;
  for (std::size_t c = 0; c < s.p2.size(); ++c) {
    if (!s.defined(r, c)) continue;
    if (s.at(r, c) > best) {
      best = s.at(r, c);
      where = s.p2[c];
    }
  }
  return where;
}

}  // namespace auditfuse::adversary
