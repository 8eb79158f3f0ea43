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

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace auditfuse {

enum class Hypothesis : std::uint8_t { h0 = 0, h1 = 1 };

enum class Identity : std::uint8_t { honest = 0, byzantine = 1 };

/// Per-sensor quality and the hypothesis priors.
struct DetectionParams {
  double p_d = 0.9;     // P(v = 1 | H1)
  double p_f = 0.1;     // P(v = 1 | H0)
  double prior0 = 0.5;  // P(H0)
  double prior1 = 0.5;  // P(H1)

  [[nodiscard]] double prior(Hypothesis h) const { return h == Hypothesis::h1 ? prior1 : prior0; }
  [[nodiscard]] double p_one(Hypothesis h) const { return h == Hypothesis::h1 ? p_d : p_f; }
};

/// Byzantine population and flip probabilities.
///
/// `p1` applies independently to the direct bit u and to the relayed-out bit w;
/// `p2` applies to the partner's bit on its way back to the MMSD. The legacy
/// attack model is p1 == p2.
struct AttackParams {
  double alpha0 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;

  [[nodiscard]] bool is_legacy() const { return p1 == p2; }
};

enum class IdentityMode : std::uint8_t { iid_bernoulli, fixed_count };
enum class ThresholdMode : std::uint8_t { expected, realized };

struct NetworkConfig {
  std::uint32_t n_sensors = 100;
  std::uint32_t n_clusters = 1;
  IdentityMode identity_mode = IdentityMode::iid_bernoulli;
  ThresholdMode threshold_mode = ThresholdMode::expected;
  std::uint64_t seed = 0;

  [[nodiscard]] std::uint32_t n_groups() const { return n_sensors / 2; }
  [[nodiscard]] std::uint32_t groups_per_cluster() const { return n_groups() / n_clusters; }
};

/// Number of Byzantines placed by IdentityMode::fixed_count.
inline std::uint32_t fixed_byzantine_count(const NetworkConfig& config, const AttackParams& atk) {
  return static_cast<std::uint32_t>(std::lround(atk.alpha0 * static_cast<double>(config.n_sensors)));
}

// ---------------------------------------------------------------------------
// Group transcripts and set labels.

/// What one sensor of a pair produced in a single round.
struct SensorRecord {
  Identity identity = Identity::honest;
  std::uint8_t v = 0;  // true local decision
  std::uint8_t u = 0;  // direct bit to the MMSD
  std::uint8_t w = 0;  // bit handed to the partner
  std::uint8_t z = 0;  // partner's w as forwarded by this sensor
};

/// Both sensors of a group. `i.z` is i's forwarded copy of j's bit and vice versa.
struct GroupTranscript {
  SensorRecord i;
  SensorRecord j;

  /// d_i = 1 iff j's direct bit matches the copy i forwarded.
  [[nodiscard]] std::uint8_t d_i() const { return j.u == i.z ? 1 : 0; }
  [[nodiscard]] std::uint8_t d_j() const { return i.u == j.z ? 1 : 0; }
  [[nodiscard]] bool matched() const { return i.u == j.u; }
};

enum class TasSet : std::uint8_t { s_low = 0, s_high = 1 };

enum class EasSet : std::uint8_t {
  ss_low = 0,      // d_i = 1, d_j = 1
  s_low_high = 1,  // d_i = 1, d_j = 0
  s_high_low = 2,  // d_i = 0, d_j = 1
  ss_high = 3,     // d_i = 0, d_j = 0
};

inline constexpr EasSet kEasSets[] = {EasSet::ss_low, EasSet::s_low_high, EasSet::s_high_low,
                                      EasSet::ss_high};

constexpr TasSet tas_set(std::uint8_t d_i) { return d_i != 0 ? TasSet::s_low : TasSet::s_high; }

/// Four-set label of sensor i, given its own indicator and its partner's.
constexpr EasSet eas_set(std::uint8_t d_i, std::uint8_t d_j) {
  if (d_i != 0) return d_j != 0 ? EasSet::ss_low : EasSet::s_low_high;
  return d_j != 0 ? EasSet::s_high_low : EasSet::ss_high;
}

/// Full label of sensor i: TAS set, EAS set, and whether the pair's direct bits agree.
struct SetLabel {
  TasSet tas = TasSet::s_low;
  EasSet eas = EasSet::ss_low;
  bool matched = true;

  friend bool operator==(const SetLabel&, const SetLabel&) = default;
};

constexpr SetLabel label_of(std::uint8_t d_i, std::uint8_t d_j, std::uint8_t u_i, std::uint8_t u_j) {
  return SetLabel{tas_set(d_i), eas_set(d_i, d_j), u_i == u_j};
}

/// Label of the partner j when i carries `set`.
constexpr EasSet mirror(EasSet set) {
  switch (set) {
    case EasSet::s_low_high: return EasSet::s_high_low;
    case EasSet::s_high_low: return EasSet::s_low_high;
    default: return set;
  }
}

inline std::string_view to_string(EasSet set) {
  switch (set) {
    case EasSet::ss_low: return "ss_low";
    case EasSet::s_low_high: return "s_low_high";
    case EasSet::s_high_low: return "s_high_low";
    case EasSet::ss_high: return "ss_high";
  }
  return "?";
}

inline std::string_view to_string(TasSet set) { return set == TasSet::s_low ? "s_low" : "s_high"; }

// ---------------------------------------------------------------------------
// Validation.

struct Violation {
  std::string field;
  std::string message;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<Violation> violations)
      : std::runtime_error(render(violations)), violations_(std::move(violations)) {}

  [[nodiscard]] const std::vector<Violation>& violations() const { return violations_; }

 private:
  static std::string render(const std::vector<Violation>& violations) {
    std::string out = "invalid configuration:";
    for (const auto& v : violations) out += "\n  " + v.field + ": " + v.message;
    return out;
  }

  std::vector<Violation> violations_;
};

struct CheckedConfig {
  NetworkConfig network;
  DetectionParams detection;
  AttackParams attack;
};

namespace detail {

inline bool is_probability(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

}  // namespace detail

/// Itemized invariant check; empty result means valid.
inline std::vector<Violation> violations(const NetworkConfig& config, const DetectionParams& det,
                                         const AttackParams& atk) {
  std::vector<Violation> out;
  auto prob = [&](const char* field, double x) {
    if (!detail::is_probability(x)) out.push_back({field, "must be a probability in [0, 1]"});
  };

  if (config.n_sensors == 0) {
    out.push_back({"n_sensors", "n_sensors must be positive"});
  } else if (config.n_sensors % 2 != 0) {
    out.push_back({"n_sensors", "n_sensors must be even"});
  }
  if (config.n_clusters == 0) {
    out.push_back({"n_clusters", "n_clusters must be at least 1"});
  } else if (config.n_sensors % 2 == 0 && config.n_sensors % (2 * config.n_clusters) != 0) {
    out.push_back({"n_clusters", "n_sensors must be divisible by 2 * n_clusters"});
  }

  prob("p_d", det.p_d);
  prob("p_f", det.p_f);
  prob("prior0", det.prior0);
  prob("prior1", det.prior1);
  if (detail::is_probability(det.p_d) && detail::is_probability(det.p_f) && !(det.p_f < det.p_d)) {
    out.push_back({"p_f", "p_f < p_d required"});
  }
  if (detail::is_probability(det.prior0) && detail::is_probability(det.prior1) &&
      std::abs(det.prior0 + det.prior1 - 1.0) > 1e-12) {
    out.push_back({"prior1", "prior0 + prior1 must equal 1"});
  }

  prob("alpha0", atk.alpha0);
  prob("p1", atk.p1);
  prob("p2", atk.p2);
  return out;
}

/// Returns the configuration with priors renormalized, or throws ConfigError.
inline CheckedConfig validate(const NetworkConfig& config, const DetectionParams& det,
                              const AttackParams& atk) {
  auto found = violations(config, det, atk);
  if (!found.empty()) throw ConfigError(std::move(found));
  CheckedConfig checked{config, det, atk};
  checked.detection.prior1 = 1.0 - det.prior0;
  return checked;
}

}  // namespace auditfuse
