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

// JSON configuration.
//
//   {
//     "network":   {"n_sensors": 100, "n_clusters": 1, "identity_mode": "iid_bernoulli",
//                   "threshold_mode": "expected", "seed": 42},
//     "detection": {"p_d": 0.9, "p_f": 0.1, "prior0": 0.5, "prior1": 0.5},
//     "attack":    {"alpha0": 0.3, "p1": 0.7, "p2": 0.7}
//   }
//
// n_sensors, p_d, p_f, alpha0, p1 and p2 are required; the rest default as
// above (seed 0, prior1 = 1 - prior0). Unknown keys are errors.

#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "auditfuse/model.hpp"

namespace auditfuse {

/// Parsed but unvalidated values; command-line overrides are applied here
/// before `finalize`.
struct ConfigDraft {
  std::optional<std::uint32_t> n_sensors;
  std::optional<std::uint32_t> n_clusters;
  std::optional<IdentityMode> identity_mode;
  std::optional<ThresholdMode> threshold_mode;
  std::optional<std::uint64_t> seed;
  std::optional<double> p_d, p_f, prior0, prior1;
  std::optional<double> alpha0, p1, p2;
};

inline std::string_view to_string(IdentityMode m) {
  return m == IdentityMode::iid_bernoulli ? "iid_bernoulli" : "fixed_count";
}

inline std::string_view to_string(ThresholdMode m) { return m == ThresholdMode::expected ? "expected" : "realized"; }

inline std::optional<IdentityMode> parse_identity_mode(std::string_view s) {
  if (s == "iid_bernoulli") return IdentityMode::iid_bernoulli;
  if (s == "fixed_count") return IdentityMode::fixed_count;
  return std::nullopt;
}

inline std::optional<ThresholdMode> parse_threshold_mode(std::string_view s) {
  if (s == "expected") return ThresholdMode::expected;
  if (s == "realized") return ThresholdMode::realized;
  return std::nullopt;
}

namespace detail {

using nlohmann::json;

class DraftReader {
 public:
  explicit DraftReader(std::vector<Violation>& errors) : errors_(errors) {}

  const json* section(const json& root, const char* name) {
    if (!root.contains(name)) return nullptr;
    const json& s = root.at(name);
    if (!s.is_object()) {
      errors_.push_back({name, "must be an object"});
      return nullptr;
    }
    return &s;
  }

  void unknown_keys(const json& obj, const std::string& where, std::initializer_list<std::string_view> known) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      bool ok = false;
      for (auto k : known) ok = ok || it.key() == k;
      if (!ok) errors_.push_back({where.empty() ? it.key() : where + "." + it.key(), "unknown key"});
    }
  }

  void number(const json* obj, const char* key, std::optional<double>& out) {
    if (!obj || !obj->contains(key)) return;
    const json& v = obj->at(key);
    if (!v.is_number()) {
      errors_.push_back({key, "must be a number"});
      return;
    }
    out = v.get<double>();
  }

  template <class Int>
  void integer(const json* obj, const char* key, std::optional<Int>& out) {
    if (!obj || !obj->contains(key)) return;
    const json& v = obj->at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      errors_.push_back({key, "must be a non-negative integer"});
      return;
    }
    const auto x = v.get<std::uint64_t>();
    if (x > std::numeric_limits<Int>::max()) {
      errors_.push_back({key, "out of range"});
      return;
    }
    out = static_cast<Int>(x);
  }

  template <class Enum, class Parse>
  void enumeration(const json* obj, const char* key, std::optional<Enum>& out, Parse parse) {
    if (!obj || !obj->contains(key)) return;
    const json& v = obj->at(key);
    const auto parsed = v.is_string() ? parse(v.get<std::string>()) : std::nullopt;
    if (!parsed) {
      errors_.push_back({key, "unrecognized value"});
      return;
    }
    out = *parsed;
  }

 private:
  std::vector<Violation>& errors_;
};

}  // namespace detail

/// Reads a configuration document; structural problems throw ConfigError.
inline ConfigDraft parse_config(const nlohmann::json& root) {
  std::vector<Violation> errors;
  if (!root.is_object()) throw ConfigError(std::vector<Violation>{{"<root>", "configuration must be a JSON object"}});
  detail::DraftReader r(errors);
  r.unknown_keys(root, "", {"network", "detection", "attack"});

  ConfigDraft d;
  const auto* net = r.section(root, "network");
  const auto* det = r.section(root, "detection");
  const auto* atk = r.section(root, "attack");
  if (net) {
    r.unknown_keys(*net, "network", {"n_sensors", "n_clusters", "identity_mode", "threshold_mode", "seed"});
    r.integer(net, "n_sensors", d.n_sensors);
    r.integer(net, "n_clusters", d.n_clusters);
    r.integer(net, "seed", d.seed);
    r.enumeration(net, "identity_mode", d.identity_mode, parse_identity_mode);
    r.enumeration(net, "threshold_mode", d.threshold_mode, parse_threshold_mode);
  }
  if (det) {
    r.unknown_keys(*det, "detection", {"p_d", "p_f", "prior0", "prior1"});
    r.number(det, "p_d", d.p_d);
    r.number(det, "p_f", d.p_f);
    r.number(det, "prior0", d.prior0);
    r.number(det, "prior1", d.prior1);
  }
  if (atk) {
    r.unknown_keys(*atk, "attack", {"alpha0", "p1", "p2"});
    r.number(atk, "alpha0", d.alpha0);
    r.number(atk, "p1", d.p1);
    r.number(atk, "p2", d.p2);
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return d;
}

inline ConfigDraft load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(std::vector<Violation>{{"config", "cannot open " + path}});
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::vector<Violation>{{"config", std::string("malformed JSON: ") + e.what()}});
  }
  return parse_config(root);
}

/// Fills defaults, checks required fields, then runs `validate`.
inline CheckedConfig finalize(const ConfigDraft& d) {
  std::vector<Violation> missing;
  auto need = [&](const auto& v, const char* name) {
    if (!v) missing.push_back({name, "required field missing"});
  };
  need(d.n_sensors, "n_sensors");
  need(d.p_d, "p_d");
  need(d.p_f, "p_f");
  need(d.alpha0, "alpha0");
  need(d.p1, "p1");
  need(d.p2, "p2");
  if (!missing.empty()) throw ConfigError(std::move(missing));

  NetworkConfig net;
  net.n_sensors = *d.n_sensors;
  net.n_clusters = d.n_clusters.value_or(1);
  net.identity_mode = d.identity_mode.value_or(IdentityMode::iid_bernoulli);
  net.threshold_mode = d.threshold_mode.value_or(ThresholdMode::expected);
  net.seed = d.seed.value_or(0);

  DetectionParams det;
  det.p_d = *d.p_d;
  det.p_f = *d.p_f;
  if (d.prior0 && d.prior1) {
    det.prior0 = *d.prior0;
    det.prior1 = *d.prior1;
  } else if (d.prior0) {
    det.prior0 = *d.prior0;
    det.prior1 = 1.0 - *d.prior0;
  } else if (d.prior1) {
    det.prior1 = *d.prior1;
    det.prior0 = 1.0 - *d.prior1;
  }
  return validate(net, det, AttackParams{*d.alpha0, *d.p1, *d.p2});
}

inline nlohmann::json to_json(const CheckedConfig& c) {
  return {
      {"network",
       {{"n_sensors", c.network.n_sensors},
        {"n_clusters", c.network.n_clusters},
        {"identity_mode", to_string(c.network.identity_mode)},
        {"threshold_mode", to_string(c.network.threshold_mode)},
        {"seed", c.network.seed}}},
      {"detection",
       {{"p_d", c.detection.p_d}, {"p_f", c.detection.p_f}, {"prior0", c.detection.prior0}, {"prior1", c.detection.prior1}}},
      {"attack", {{"alpha0", c.attack.alpha0}, {"p1", c.attack.p1}, {"p2", c.attack.p2}}},
  };
}

}  // namespace auditfuse
