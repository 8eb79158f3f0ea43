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

// Brute-force enumeration of one two-sensor group.
//
// Every identity pair, local decision pair and flip indicator is walked
// explicitly and the observable outcome is tallied. Nothing here uses the
// factored expressions of analytic.hpp; it is the reference the closed forms
// are tested against.

#pragma once

#include <array>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <vector>

#include "auditfuse/model.hpp"
#include "auditfuse/numeric.hpp"

namespace auditfuse::oracle {

/// One observable outcome. Naming follows the MMSD's view: z_i is the copy of
/// i's bit that arrives through j, z_j the copy of j's bit that arrives through i.
struct JointOutcome {
  Hypothesis hypothesis = Hypothesis::h0;
  Identity id_i = Identity::honest;
  Identity id_j = Identity::honest;
  std::uint8_t v_i = 0, v_j = 0;
  std::uint8_t u_i = 0, u_j = 0;
  std::uint8_t z_i = 0, z_j = 0;
  double probability = 0.0;  // conditional on `hypothesis`

  [[nodiscard]] std::uint8_t d_i() const { return u_j == z_j ? 1 : 0; }
  [[nodiscard]] std::uint8_t d_j() const { return u_i == z_i ? 1 : 0; }
  [[nodiscard]] bool matched() const { return u_i == u_j; }
  [[nodiscard]] SetLabel label() const { return label_of(d_i(), d_j(), u_i, u_j); }
  [[nodiscard]] bool i_byzantine() const { return id_i == Identity::byzantine; }
  [[nodiscard]] bool j_byzantine() const { return id_j == Identity::byzantine; }
};

class JointOutcomeTable {
 public:
  JointOutcomeTable(DetectionParams det, std::vector<JointOutcome> rows)
      : det_(det), rows_(std::move(rows)) {}

  [[nodiscard]] const std::vector<JointOutcome>& rows() const { return rows_; }
  [[nodiscard]] const DetectionParams& detection() const { return det_; }

  /// Σ P(outcome | h) over the table; 1 up to rounding.
  [[nodiscard]] double total(Hypothesis h) const {
    return sum([h](const JointOutcome& o) { return o.hypothesis == h; }, false);
  }

  /// Unconditional probability (hypothesis prior folded in) of an event.
  template <class Pred>
  [[nodiscard]] double probability(Pred&& event) const {
    return sum(std::forward<Pred>(event), true);
  }

  /// P(target | given); nullopt when `given` has zero probability.
  template <class Target, class Given>
  [[nodiscard]] std::optional<double> conditional(Target&& target, Given&& given) const {
    const double den = probability(given);
    if (!(den > 0.0)) return std::nullopt;
    const double num =
        probability([&](const JointOutcome& o) { return given(o) && target(o); });
    return num / den;
  }

 private:
  template <class Pred>
  double sum(Pred&& event, bool weight_by_prior) const {
    std::vector<double> terms;
    terms.reserve(rows_.size());
    for (const auto& o : rows_) {
      if (!event(o)) continue;
      terms.push_back(weight_by_prior ? det_.prior(o.hypothesis) * o.probability : o.probability);
    }
    return pairwise_sum(terms);
  }

  DetectionParams det_;
  std::vector<JointOutcome> rows_;
};

namespace detail {

inline double bernoulli(double p, int bit) { return bit != 0 ? p : 1.0 - p; }

// Dense key over the 9 observable bits.
inline std::size_t key_of(const JointOutcome& o) {
  std::size_t k = static_cast<std::size_t>(o.hypothesis);
  k = (k << 1) | static_cast<std::size_t>(o.id_i);
  k = (k << 1) | static_cast<std::size_t>(o.id_j);
  k = (k << 1) | o.v_i;
  k = (k << 1) | o.v_j;
  k = (k << 1) | o.u_i;
  k = (k << 1) | o.u_j;
  k = (k << 1) | o.z_i;
  k = (k << 1) | o.z_j;
  return k;
}

}  // namespace detail

/// Exhaustive table over hypotheses, identities, local decisions and every flip
/// indicator (u-flip, w-flip, relay flip per Byzantine).
inline JointOutcomeTable enumerate_group(const DetectionParams& det, const AttackParams& atk) {
  using detail::bernoulli;
  constexpr std::size_t kKeys = 1u << 9;
  std::array<std::vector<double>, kKeys> contributions;
  std::array<JointOutcome, kKeys> prototypes{};
  std::array<bool, kKeys> seen{};

  for (int h = 0; h < 2; ++h) {
    const auto hyp = static_cast<Hypothesis>(h);
    const double p_one = det.p_one(hyp);
    for (int bi = 0; bi < 2; ++bi) {
      for (int bj = 0; bj < 2; ++bj) {
        const double p_ids = bernoulli(atk.alpha0, bi) * bernoulli(atk.alpha0, bj);
        // Honest sensors never flip: their flip bits only take the value 0.
        const int fi = bi != 0 ? 2 : 1;
        const int fj = bj != 0 ? 2 : 1;
        for (int ai = 0; ai < fi; ++ai)
          for (int wi = 0; wi < fi; ++wi)
            for (int ci = 0; ci < fi; ++ci)
              for (int aj = 0; aj < fj; ++aj)
                for (int wj = 0; wj < fj; ++wj)
                  for (int cj = 0; cj < fj; ++cj) {
                    double p_flips = 1.0;
                    if (bi != 0) {
                      p_flips *= bernoulli(atk.p1, ai) * bernoulli(atk.p1, wi) * bernoulli(atk.p2, ci);
                    }
                    if (bj != 0) {
                      p_flips *= bernoulli(atk.p1, aj) * bernoulli(atk.p1, wj) * bernoulli(atk.p2, cj);
                    }
                    for (int vi = 0; vi < 2; ++vi)
                      for (int vj = 0; vj < 2; ++vj) {
                        JointOutcome o;
                        o.hypothesis = hyp;
                        o.id_i = static_cast<Identity>(bi);
                        o.id_j = static_cast<Identity>(bj);
                        o.v_i = static_cast<std::uint8_t>(vi);
                        o.v_j = static_cast<std::uint8_t>(vj);
                        o.u_i = static_cast<std::uint8_t>(vi ^ ai);
                        o.u_j = static_cast<std::uint8_t>(vj ^ aj);
                        const int w_i = vi ^ wi;
                        const int w_j = vj ^ wj;
                        o.z_j = static_cast<std::uint8_t>(w_j ^ ci);  // i forwards j's bit
                        o.z_i = static_cast<std::uint8_t>(w_i ^ cj);  // j forwards i's bit
                        const double p = p_ids * p_flips * bernoulli(p_one, vi) * bernoulli(p_one, vj);
                        const std::size_t k = detail::key_of(o);
                        contributions[k].push_back(p);
                        prototypes[k] = o;
                        seen[k] = true;
                      }
                  }
      }
    }
  }

  std::vector<JointOutcome> rows;
  for (std::size_t k = 0; k < kKeys; ++k) {
    if (!seen[k]) continue;
    JointOutcome o = prototypes[k];
    o.probability = pairwise_sum(contributions[k]);
    rows.push_back(o);
  }
  return JointOutcomeTable(det, std::move(rows));
}

// ---------------------------------------------------------------------------
// Events.

namespace events {

inline auto tas(TasSet set) {
  return [set](const JointOutcome& o) { return tas_set(o.d_i()) == set; };
}

inline auto eas(EasSet set) {
  return [set](const JointOutcome& o) { return eas_set(o.d_i(), o.d_j()) == set; };
}

/// SS_low ∩ M: the pairs whose common decision travels as a group vote.
inline auto group_vote() {
  return [](const JointOutcome& o) { return eas_set(o.d_i(), o.d_j()) == EasSet::ss_low && o.matched(); };
}

inline auto i_byzantine() {
  return [](const JointOutcome& o) { return o.i_byzantine(); };
}

/// At least one Byzantine in the pair.
inline auto any_byzantine() {
  return [](const JointOutcome& o) { return o.i_byzantine() || o.j_byzantine(); };
}

inline auto hypothesis(Hypothesis h) {
  return [h](const JointOutcome& o) { return o.hypothesis == h; };
}

}  // namespace events

/// P(i = B | event); nullopt for a zero-probability event.
template <class Event>
std::optional<double> posterior_from_oracle(const JointOutcomeTable& table, Event&& event) {
  return table.conditional(events::i_byzantine(), std::forward<Event>(event));
}

/// P(u_i = 1 | event, h).
template <class Event>
std::optional<double> conditional_decision_pmf(const JointOutcomeTable& table, Event&& event, Hypothesis h) {
  auto given = [&, h](const JointOutcome& o) { return o.hypothesis == h && event(o); };
  return table.conditional([](const JointOutcome& o) { return o.u_i == 1; }, given);
}

inline std::optional<double> conditional_decision_pmf(const JointOutcomeTable& table, EasSet set, Hypothesis h) {
  return conditional_decision_pmf(table, events::eas(set), h);
}

inline std::optional<double> conditional_decision_pmf(const JointOutcomeTable& table, TasSet set, Hypothesis h) {
  return conditional_decision_pmf(table, events::tas(set), h);
}

/// Set occupancy P(sensor i carries `set`).
inline double occupancy(const JointOutcomeTable& table, EasSet set) {
  return table.probability(events::eas(set));
}

inline double occupancy(const JointOutcomeTable& table, TasSet set) {
  return table.probability(events::tas(set));
}

/// One row per outcome, probabilities in scientific notation.
inline void write_csv(std::ostream& out, const JointOutcomeTable& table) {
  out << "hypothesis,id_i,id_j,v_i,v_j,u_i,u_j,z_i,z_j,d_i,d_j,probability\n";
  char buf[32];
  for (const auto& o : table.rows()) {
    std::snprintf(buf, sizeof buf, "%.17e", o.probability);
    out << (o.hypothesis == Hypothesis::h1 ? "H1" : "H0") << ',' << (o.i_byzantine() ? 'B' : 'H') << ','
        << (o.j_byzantine() ? 'B' : 'H') << ',' << int{o.v_i} << ',' << int{o.v_j} << ',' << int{o.u_i} << ','
        << int{o.u_j} << ',' << int{o.z_i} << ',' << int{o.z_j} << ',' << int{o.d_i()} << ',' << int{o.d_j()}
        << ',' << buf << '\n';
  }
}

}  // namespace auditfuse::oracle
