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

// Monte Carlo trials, per-scheme fusion and experiment aggregation.

#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "auditfuse/analytic.hpp"
#include "auditfuse/model.hpp"

namespace auditfuse::sim {

using analytic::Scheme;
using analytic::SchemePerformance;

// ---------------------------------------------------------------------------
// Random streams.

/// splitmix64 finalizer; used only to derive per-trial seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of trial `index`; trial t can be replayed without running 0..t-1.
constexpr std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(master + 0x9e3779b97f4a7c15ULL * (index + 1));
}

/// std::mt19937_64 with portable draws (the standard distributions are not
/// specified bit-for-bit across library implementations).
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) on a 2^-53 lattice.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, n), rejection sampled.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

 private:
  std::mt19937_64 engine_;
};

// ---------------------------------------------------------------------------
// Trials.

/// Realized set sizes of one trial.
struct SetCardinalities {
  std::uint32_t tas_low = 0;                   // N̲
  std::uint32_t tas_high = 0;                  // N̄
  std::array<std::uint32_t, 4> eas{};          // N1..N4, indexed by EasSet
  std::uint32_t matched_low_groups = 0;        // N_re^LL (groups)
  std::uint32_t low_high = 0;                  // N_re^L
  std::uint32_t high_low = 0;                  // N_re^U

  /// Direct decisions the MMSD forwards under RAS, both sensors of each matched SS_low group counted.
  [[nodiscard]] std::uint32_t ras_sensor_bits() const { return 2 * matched_low_groups + low_high + high_low; }
  [[nodiscard]] std::uint32_t ras_group_bits() const { return matched_low_groups + low_high + high_low; }
};

struct TrialRecord {
  Hypothesis hypothesis = Hypothesis::h0;
  std::vector<GroupTranscript> groups;

  [[nodiscard]] std::uint32_t n_sensors() const { return static_cast<std::uint32_t>(2 * groups.size()); }
};

/// Sensor-level transcript update for one group.
inline GroupTranscript draw_group(Stream& rng, Hypothesis h, Identity id_i, Identity id_j,
                                  const DetectionParams& det, const AttackParams& atk) {
  const double p_one = det.p_one(h);
  GroupTranscript g;
  g.i.identity = id_i;
  g.j.identity = id_j;
  g.i.v = rng.bernoulli(p_one) ? 1 : 0;
  g.j.v = rng.bernoulli(p_one) ? 1 : 0;
  // Draw order per sensor: u-flip, w-flip, relay flip.
  auto flips = [&](Identity id, std::array<std::uint8_t, 3>& f) {
    f = {0, 0, 0};
    if (id != Identity::byzantine) return;
    f[0] = rng.bernoulli(atk.p1) ? 1 : 0;
    f[1] = rng.bernoulli(atk.p1) ? 1 : 0;
    f[2] = rng.bernoulli(atk.p2) ? 1 : 0;
  };
  std::array<std::uint8_t, 3> fi{}, fj{};
  flips(id_i, fi);
  flips(id_j, fj);
  g.i.u = g.i.v ^ fi[0];
  g.i.w = g.i.v ^ fi[1];
  g.j.u = g.j.v ^ fj[0];
  g.j.w = g.j.v ^ fj[1];
  g.i.z = g.j.w ^ fi[2];
  g.j.z = g.i.w ^ fj[2];
  return g;
}

/// One detection round. Deterministic in `seed`.
inline TrialRecord run_trial(std::uint64_t seed, const NetworkConfig& config, const DetectionParams& det,
                             const AttackParams& atk) {
  Stream rng(seed);
  TrialRecord rec;
  rec.hypothesis = rng.bernoulli(det.prior1) ? Hypothesis::h1 : Hypothesis::h0;

  const std::uint32_t n = config.n_sensors;
  std::vector<Identity> ids(n, Identity::honest);
  if (config.identity_mode == IdentityMode::iid_bernoulli) {
    for (auto& id : ids) id = rng.bernoulli(atk.alpha0) ? Identity::byzantine : Identity::honest;
  } else {
    const std::uint32_t k = std::min(fixed_byzantine_count(config, atk), n);
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    for (std::uint32_t t = 0; t < k; ++t) {  // partial Fisher-Yates
      const auto pick = t + static_cast<std::uint32_t>(rng.below(n - t));
      std::swap(order[t], order[pick]);
      ids[order[t]] = Identity::byzantine;
    }
  }

  rec.groups.reserve(n / 2);
  for (std::uint32_t g = 0; g < n / 2; ++g) {
    rec.groups.push_back(draw_group(rng, rec.hypothesis, ids[2 * g], ids[2 * g + 1], det, atk));
  }
  return rec;
}

inline SetCardinalities cardinalities(const std::vector<GroupTranscript>& groups) {
  SetCardinalities c;
  for (const auto& g : groups) {
    const auto di = g.d_i();
    const auto dj = g.d_j();
    c.tas_low += di + dj;
    c.tas_high += 2 - di - dj;
    c.eas[static_cast<std::size_t>(eas_set(di, dj))] += 1;
    c.eas[static_cast<std::size_t>(eas_set(dj, di))] += 1;
    if (di && dj && g.matched()) c.matched_low_groups += 1;
    if (di && !dj) {
      c.low_high += 1;  // i
      c.high_low += 1;  // j
    } else if (!di && dj) {
      c.low_high += 1;  // j
      c.high_low += 1;  // i
    }
  }
  return c;
}

inline SetCardinalities cardinalities(const TrialRecord& trial) { return cardinalities(trial.groups); }

// ---------------------------------------------------------------------------
// Fusion.

/// Units and ones per fusion component, in the component order of
/// analytic::component_labels. Integer counts keep the statistic independent of
/// how the sensors were partitioned before aggregation.
struct ComponentTally {
  std::array<std::uint32_t, 4> units{};
  std::array<std::uint32_t, 4> ones{};

  ComponentTally& operator+=(const ComponentTally& o) {
    for (std::size_t c = 0; c < 4; ++c) {
      units[c] += o.units[c];
      ones[c] += o.ones[c];
    }
    return *this;
  }
};

inline ComponentTally tally(Scheme scheme, const std::vector<GroupTranscript>& groups) {
  ComponentTally t;
  auto add = [&t](std::size_t c, std::uint8_t bit) {
    t.units[c] += 1;
    t.ones[c] += bit;
  };
  for (const auto& g : groups) {
    const auto di = g.d_i();
    const auto dj = g.d_j();
    switch (scheme) {
      case Scheme::direct:
        add(0, g.i.u);
        add(0, g.j.u);
        break;
      case Scheme::tas:
      case Scheme::tas_intelligent:
        add(static_cast<std::size_t>(tas_set(di)), g.i.u);
        add(static_cast<std::size_t>(tas_set(dj)), g.j.u);
        break;
      case Scheme::eas:
        add(static_cast<std::size_t>(eas_set(di, dj)), g.i.u);
        add(static_cast<std::size_t>(eas_set(dj, di)), g.j.u);
        break;
      case Scheme::ras:
        // 0: group vote, 1: S_low_high, 2: S_high_low. SS_high and
        // mismatched SS_low pairs are censored.
        if (di && dj) {
          if (g.matched()) add(0, g.i.u);
        } else if (di) {
          add(1, g.i.u);
          add(2, g.j.u);
        } else if (dj) {
          add(1, g.j.u);
          add(2, g.i.u);
        }
        break;
    }
  }
  return t;
}

inline ComponentTally tally(Scheme scheme, const TrialRecord& trial) { return tally(scheme, trial.groups); }

struct FusionOutcome {
  double statistic = 0.0;
  double threshold = 0.0;
  Hypothesis decision = Hypothesis::h0;
};

/// Σ W_c · ones_c against η; a tie decides H1.
inline FusionOutcome fuse_tally(const ComponentTally& t, const SchemePerformance& perf, ThresholdMode mode) {
  FusionOutcome out;
  for (std::size_t c = 0; c < perf.components.size(); ++c) {
    out.statistic += perf.components[c].weight * static_cast<double>(t.ones[c]);
  }
  out.threshold = mode == ThresholdMode::expected ? perf.threshold : perf.threshold_for(t.units);
  out.decision = out.statistic >= out.threshold ? Hypothesis::h1 : Hypothesis::h0;
  return out;
}

inline FusionOutcome fuse(const TrialRecord& trial, const SchemePerformance& perf, ThresholdMode mode) {
  return fuse_tally(tally(perf.scheme, trial), perf, mode);
}

// ---------------------------------------------------------------------------
// Experiments.

struct EmpiricalPerf {
  std::uint64_t trials = 0;
  std::uint64_t errors = 0;
  std::uint64_t trials_h0 = 0, errors_h0 = 0;  // false alarms
  std::uint64_t trials_h1 = 0, errors_h1 = 0;  // misses
  // Expected vs realized threshold: decisions that differ, and those among
  // them not explained by the threshold shift (must stay 0).
  std::uint64_t mode_disagreements = 0;
  std::uint64_t mode_unexplained = 0;

  [[nodiscard]] double p_e_hat() const { return trials ? static_cast<double>(errors) / static_cast<double>(trials) : 0.0; }
  [[nodiscard]] double standard_error() const {
    if (trials == 0) return 0.0;
    const double p = p_e_hat();
    return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  }
  [[nodiscard]] double false_alarm_rate() const {
    return trials_h0 ? static_cast<double>(errors_h0) / static_cast<double>(trials_h0) : 0.0;
  }
  [[nodiscard]] double miss_rate() const {
    return trials_h1 ? static_cast<double>(errors_h1) / static_cast<double>(trials_h1) : 0.0;
  }

  EmpiricalPerf& operator+=(const EmpiricalPerf& o) {
    trials += o.trials;
    errors += o.errors;
    trials_h0 += o.trials_h0;
    errors_h0 += o.errors_h0;
    trials_h1 += o.trials_h1;
    errors_h1 += o.errors_h1;
    mode_disagreements += o.mode_disagreements;
    mode_unexplained += o.mode_unexplained;
    return *this;
  }
};

/// Running integer sums of a per-trial count.
struct CountMoments {
  std::uint64_t n = 0;
  std::uint64_t sum = 0;
  std::uint64_t sum_sq = 0;

  void add(std::uint64_t x) {
    ++n;
    sum += x;
    sum_sq += x * x;
  }
  [[nodiscard]] double mean() const { return n ? static_cast<double>(sum) / static_cast<double>(n) : 0.0; }
  [[nodiscard]] double variance() const {
    if (n < 2) return 0.0;
    const double m = mean();
    return (static_cast<double>(sum_sq) - static_cast<double>(n) * m * m) / static_cast<double>(n - 1);
  }
  [[nodiscard]] double standard_error() const { return n ? std::sqrt(variance() / static_cast<double>(n)) : 0.0; }

  CountMoments& operator+=(const CountMoments& o) {
    n += o.n;
    sum += o.sum;
    sum_sq += o.sum_sq;
    return *this;
  }
};

/// Set-occupancy and overhead statistics gathered alongside the error counts.
struct ExperimentStats {
  // Label of the first sensor of every group; groups are independent, so these
  // are multinomial counts.
  std::array<std::uint64_t, 4> eas_first{};
  std::array<std::uint64_t, 2> tas_first{};
  std::uint64_t groups = 0;
  // Conditional frequency of a match given SS_low with at least one Byzantine.
  std::uint64_t attacked_low_groups = 0;
  std::uint64_t attacked_low_matched = 0;
  CountMoments ras_sensor_bits;
  CountMoments ras_group_bits;

  ExperimentStats& operator+=(const ExperimentStats& o) {
    for (std::size_t k = 0; k < 4; ++k) eas_first[k] += o.eas_first[k];
    for (std::size_t k = 0; k < 2; ++k) tas_first[k] += o.tas_first[k];
    groups += o.groups;
    attacked_low_groups += o.attacked_low_groups;
    attacked_low_matched += o.attacked_low_matched;
    ras_sensor_bits += o.ras_sensor_bits;
    ras_group_bits += o.ras_group_bits;
    return *this;
  }
};

struct ExperimentResult {
  std::map<Scheme, EmpiricalPerf> perf;
  std::map<Scheme, SchemePerformance> theory;
  ExperimentStats stats;
};

struct ExperimentOptions {
  std::uint64_t n_trials = 1;
  unsigned threads = 0;  // 0: hardware concurrency
  std::uint64_t block = 512;
};

namespace detail {

struct BlockResult {
  std::vector<EmpiricalPerf> perf;
  ExperimentStats stats;
};

inline void record_trial(const TrialRecord& trial, const std::vector<SchemePerformance>& theory,
                         ThresholdMode mode, BlockResult& out) {
  for (std::size_t s = 0; s < theory.size(); ++s) {
    const auto t = tally(theory[s].scheme, trial);
    const auto primary = fuse_tally(t, theory[s], mode);
    const auto other = fuse_tally(t, theory[s], mode == ThresholdMode::expected ? ThresholdMode::realized
                                                                                 : ThresholdMode::expected);
    auto& p = out.perf[s];
    const bool wrong = primary.decision != trial.hypothesis;
    p.trials += 1;
    p.errors += wrong;
    if (trial.hypothesis == Hypothesis::h0) {
      p.trials_h0 += 1;
      p.errors_h0 += wrong;
    } else {
      p.trials_h1 += 1;
      p.errors_h1 += wrong;
    }
    if (primary.decision != other.decision) {
      p.mode_disagreements += 1;
      // A flip is only possible when the statistic lies between the two thresholds.
      const double shift = std::abs(primary.threshold - other.threshold);
      if (std::abs(primary.statistic - primary.threshold) > shift) p.mode_unexplained += 1;
    }
  }

  auto& st = out.stats;
  for (const auto& g : trial.groups) {
    st.groups += 1;
    st.eas_first[static_cast<std::size_t>(eas_set(g.d_i(), g.d_j()))] += 1;
    st.tas_first[static_cast<std::size_t>(tas_set(g.d_i()))] += 1;
    const bool attacked = g.i.identity == Identity::byzantine || g.j.identity == Identity::byzantine;
    if (attacked && g.d_i() && g.d_j()) {
      st.attacked_low_groups += 1;
      st.attacked_low_matched += g.matched();
    }
  }
  const auto c = cardinalities(trial);
  st.ras_sensor_bits.add(c.ras_sensor_bits());
  st.ras_group_bits.add(c.ras_group_bits());
}

}  // namespace detail

/// Runs `n_trials` trials and aggregates per scheme. Work is split into fixed
/// blocks of consecutive trial indices and merged in block order, so the result
/// depends only on the master seed.
inline ExperimentResult run_experiment(const NetworkConfig& config, const DetectionParams& det,
                                       const AttackParams& atk, const std::vector<Scheme>& schemes,
                                       const ExperimentOptions& options) {
  if (options.n_trials < 1) throw std::invalid_argument("n_trials must be at least 1");
  if (options.block < 1) throw std::invalid_argument("block must be at least 1");

  std::vector<SchemePerformance> theory;
  theory.reserve(schemes.size());
  for (Scheme s : schemes) theory.push_back(analytic::scheme_performance(s, det, atk, config.n_sensors));

  const std::uint64_t n_blocks = (options.n_trials + options.block - 1) / options.block;
  std::vector<detail::BlockResult> blocks(n_blocks);
  std::atomic<std::uint64_t> next{0};

  auto worker = [&] {
    for (std::uint64_t b = next.fetch_add(1); b < n_blocks; b = next.fetch_add(1)) {
      auto& out = blocks[b];
      out.perf.assign(theory.size(), {});
      const std::uint64_t end = std::min(options.n_trials, (b + 1) * options.block);
      for (std::uint64_t t = b * options.block; t < end; ++t) {
        const auto trial = run_trial(trial_seed(config.seed, t), config, det, atk);
        detail::record_trial(trial, theory, config.threshold_mode, out);
      }
    }
  };

  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, n_blocks));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  ExperimentResult result;
  for (std::size_t s = 0; s < theory.size(); ++s) {
    result.theory.emplace(theory[s].scheme, theory[s]);
    result.perf[theory[s].scheme];
  }
  for (const auto& b : blocks) {
    for (std::size_t s = 0; s < theory.size(); ++s) result.perf[theory[s].scheme] += b.perf[s];
    result.stats += b.stats;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Goodness of fit.

/// Pearson statistic Σ (O - E)^2 / E over cells with E > 0. Cells with E = 0
/// and O > 0 make the statistic infinite.
template <std::size_t K>
double chi_square(const std::array<std::uint64_t, K>& observed, const std::array<double, K>& probabilities) {
  std::uint64_t total = 0;
  for (auto o : observed) total += o;
  double stat = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const double expected = probabilities[k] * static_cast<double>(total);
    if (expected > 0.0) {
      const double diff = static_cast<double>(observed[k]) - expected;
      stat += diff * diff / expected;
    } else if (observed[k] > 0) {
      return std::numeric_limits<double>::infinity();
    }
  }
  return stat;
}

/// Upper 0.001 quantiles of the chi-square distribution.
inline double chi_square_critical_0001(std::size_t dof) {
  static constexpr double kTable[] = {0.0, 10.828, 13.816, 16.266, 18.467};
  if (dof == 0 || dof >= std::size(kTable)) throw std::out_of_range("dof");
  return kTable[dof];
}

}  // namespace auditfuse::sim
