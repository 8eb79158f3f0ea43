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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>

namespace auditfuse {

/// Probabilities are clamped to [kProbEpsilon, 1 - kProbEpsilon] before logs.
inline constexpr double kProbEpsilon = 1e-15;

inline double clamp_probability(double p) { return std::clamp(p, kProbEpsilon, 1.0 - kProbEpsilon); }

/// Standard Gaussian tail Q(x) = P(Z > x).
inline double gaussian_q(double x) {
  if (std::isinf(x)) return x > 0 ? 0.0 : 1.0;
  return 0.5 * std::erfc(x / std::sqrt(2.0));
}

/// Pairwise summation; error grows with log(n) instead of n.
inline double pairwise_sum(std::span<const double> xs) {
  constexpr std::size_t kBlock = 8;
  if (xs.size() <= kBlock) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

/// Grid {lo, lo+step, ..., hi} with the endpoint included even if step does not divide the span.
inline std::size_t grid_count(double lo, double hi, double step) {
  if (!(step > 0.0) || hi < lo) return 0;
  const double n = (hi - lo) / step;
  auto k = static_cast<std::size_t>(std::floor(n + 1e-9));
  const double last = lo + static_cast<double>(k) * step;
  return k + 1 + (hi - last > 1e-9 ? 1 : 0);
}

inline double grid_value(double lo, double hi, double step, std::size_t index) {
  const double x = lo + static_cast<double>(index) * step;
  // Snap to the endpoint and to a clean decimal so 0.05*3 prints as 0.15.
  if (x >= hi - 1e-9) return hi;
  return std::round(x * 1e12) / 1e12;
}

}  // namespace auditfuse
