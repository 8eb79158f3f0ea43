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

// Closed forms for posteriors, conditional pmfs, fusion weights, Gaussian
// moments and error probabilities of the direct, TAS, EAS and RAS schemes.
//
// Notation for one group (i, j) with sensor k Byzantine:
//   a_k  flip of the direct bit u_k          ~ Bernoulli(p1)
//   x_k  disagreement between u_k and w_k    P(x_k = 1) = 2 p1 (1 - p1)
//   c_k  flip of the partner's relayed bit   ~ Bernoulli(p2)
// Honest sensors have a = x = c = 0. The status indicators are
//   d_i = [x_j == c_i],   d_j = [x_i == c_j],
// so given both identities (a_i, x_i, c_j) and (a_j, x_j, c_i) are independent
// blocks: the first drives d_j, the second drives d_i. Everything below is a
// short sum over the four identity pairs of products of these blocks.

#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "auditfuse/model.hpp"
#include "auditfuse/numeric.hpp"

namespace auditfuse::analytic {

enum class Scheme : std::uint8_t { direct, tas, tas_intelligent, eas, ras };

inline constexpr Scheme kSchemes[] = {Scheme::direct, Scheme::tas, Scheme::tas_intelligent, Scheme::eas,
                                      Scheme::ras};

inline std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::direct: return "direct";
    case Scheme::tas: return "tas";
    case Scheme::tas_intelligent: return "tas_intelligent";
    case Scheme::eas: return "eas";
    case Scheme::ras: return "ras";
  }
  return "?";
}

inline std::optional<Scheme> parse_scheme(std::string_view name) {
  for (Scheme s : kSchemes)
    if (to_string(s) == name) return s;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Posteriors.

/// Posterior Byzantine probability of a set and the probability of landing in it.
/// `posterior` is empty when the set cannot be occupied.
struct SetEstimate {
  std::optional<double> posterior;
  double occupancy = 0.0;
};

struct TasPosterior {
  SetEstimate low;   // d_i = 1
  SetEstimate high;  // d_i = 0

  [[nodiscard]] const SetEstimate& operator[](TasSet s) const { return s == TasSet::s_low ? low : high; }
};

struct EasPosterior {
  std::array<SetEstimate, 4> sets;

  [[nodiscard]] const SetEstimate& operator[](EasSet s) const { return sets[static_cast<std::size_t>(s)]; }
};

namespace detail {

inline double bern(double p, int bit) { return bit != 0 ? p : 1.0 - p; }
inline double id_prob(double alpha0, Identity id) { return id == Identity::byzantine ? alpha0 : 1.0 - alpha0; }

inline constexpr Identity kIds[] = {Identity::honest, Identity::byzantine};

inline std::optional<double> ratio(double num, double den) {
  if (!(den > 0.0)) return std::nullopt;
  return num / den;
}

/// P(a_k = flip, x_k = inconsistent) for a Byzantine sensor.
inline double own_flips(const AttackParams& atk, int flip, int inconsistent) {
  // x = a xor b with a, b independent Bernoulli(p1).
  const double a = bern(atk.p1, flip);
  const double b = bern(atk.p1, flip ^ inconsistent);
  return a * b;
}

/// P(a_k = flip, status of k's partner = d | id_k, id_partner).
/// The partner's status indicator compares u_k against the copy of w_k that
/// the partner forwards, so it depends on x_k and the partner's relay flip.
inline double flip_and_partner_status(const AttackParams& atk, Identity self, Identity partner, int flip,
                                      int d) {
  if (self == Identity::honest) {
    if (flip != 0) return 0.0;
    if (partner == Identity::honest) return d != 0 ? 1.0 : 0.0;
    return bern(atk.p2, d == 0 ? 1 : 0);
  }
  const double consistent = own_flips(atk, flip, 0);
  const double inconsistent = own_flips(atk, flip, 1);
  if (partner == Identity::honest) return d != 0 ? consistent : inconsistent;
  // Relay flip c re-aligns an inconsistent pair and breaks a consistent one.
  return d != 0 ? consistent * (1.0 - atk.p2) + inconsistent * atk.p2
                : consistent * atk.p2 + inconsistent * (1.0 - atk.p2);
}

/// P(partner status = d | ids), marginal over k's own direct flip.
inline double partner_status(const AttackParams& atk, Identity self, Identity partner, int d) {
  return flip_and_partner_status(atk, self, partner, 0, d) + flip_and_partner_status(atk, self, partner, 1, d);
}

}  // namespace detail

/// Probability that a status indicator reads "match" or "mismatch", for each
/// combination of (relay owner, checked sensor) identities. These are the
/// factors behind the TAS and EAS posteriors.
struct MatchFactors {
  double consistent = 1.0;    // P(x = 0 | B) = p1^2 + (1 - p1)^2
  double inconsistent = 0.0;  // P(x = 1 | B) = 2 p1 (1 - p1)
  double p2 = 0.0;

  explicit MatchFactors(const AttackParams& atk)
      : consistent(atk.p1 * atk.p1 + (1.0 - atk.p1) * (1.0 - atk.p1)),
        inconsistent(2.0 * atk.p1 * (1.0 - atk.p1)),
        p2(atk.p2) {}

  /// P(d_i = d | id_i, id_j); d_i checks j's bit through i's relay.
  [[nodiscard]] double status(Identity relay, Identity checked, int d) const {
    const bool br = relay == Identity::byzantine;
    const bool bc = checked == Identity::byzantine;
    if (d != 0) {
      if (br && bc) return consistent * (1.0 - p2) + inconsistent * p2;
      if (br) return 1.0 - p2;
      if (bc) return consistent;
      return 1.0;
    }
    if (br && bc) return inconsistent * (1.0 - p2) + consistent * p2;
    if (br) return p2;
    if (bc) return inconsistent;
    return 0.0;
  }
};

/// Intelligent-attack TAS posteriors: split on d_i only.
inline TasPosterior intelligent_posterior(const AttackParams& atk) {
  const MatchFactors f(atk);
  const double a = atk.alpha0;
  TasPosterior out;
  for (int d : {1, 0}) {
    // P(d_i = d | i = B) and P(d_i = d | i = H), marginal over j.
    const double given_b = a * f.status(Identity::byzantine, Identity::byzantine, d) +
                           (1.0 - a) * f.status(Identity::byzantine, Identity::honest, d);
    const double given_h = a * f.status(Identity::honest, Identity::byzantine, d) +
                           (1.0 - a) * f.status(Identity::honest, Identity::honest, d);
    const double joint_b = a * given_b;
    const double occ = joint_b + (1.0 - a) * given_h;
    SetEstimate& s = d != 0 ? out.low : out.high;
    s.occupancy = occ;
    s.posterior = detail::ratio(joint_b, occ);
  }
  return out;
}

/// Legacy TAS posteriors (p1 == p2 == p).
inline TasPosterior tas_posterior(const AttackParams& atk) {
  if (!atk.is_legacy()) throw std::invalid_argument("tas_posterior requires p1 == p2");
  return intelligent_posterior(atk);
}

/// Occupancy weights f^(e) of set `set` given both identities.
inline double eas_factor(const AttackParams& atk, EasSet set, Identity id_i, Identity id_j) {
  const MatchFactors f(atk);
  const int di = set == EasSet::ss_low || set == EasSet::s_low_high ? 1 : 0;
  const int dj = set == EasSet::ss_low || set == EasSet::s_high_low ? 1 : 0;
  return f.status(id_i, id_j, di) * f.status(id_j, id_i, dj);
}

/// EAS posteriors α1..α4 and set occupancies.
inline EasPosterior eas_posterior(const AttackParams& atk) {
  const double a = atk.alpha0;
  EasPosterior out;
  for (EasSet set : kEasSets) {
    const double bb = a * a * eas_factor(atk, set, Identity::byzantine, Identity::byzantine);
    const double bh = a * (1.0 - a) * eas_factor(atk, set, Identity::byzantine, Identity::honest);
    const double hb = a * (1.0 - a) * eas_factor(atk, set, Identity::honest, Identity::byzantine);
    const double hh = (1.0 - a) * (1.0 - a) * eas_factor(atk, set, Identity::honest, Identity::honest);
    auto& s = out.sets[static_cast<std::size_t>(set)];
    s.occupancy = bb + bh + hb + hh;
    s.posterior = detail::ratio(bb + bh, s.occupancy);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Conditional pmfs.

/// P(u = 1 | H1) and P(u = 1 | H0) for one set.
struct ConditionalPmf {
  double pi11 = 0.5;
  double pi10 = 0.5;

  [[nodiscard]] double pi01() const { return 1.0 - pi11; }
  [[nodiscard]] double pi00() const { return 1.0 - pi10; }
  [[nodiscard]] double p_one(Hypothesis h) const { return h == Hypothesis::h1 ? pi11 : pi10; }
};

/// pmf of a sensor whose direct bit is inverted with probability `flip`.
inline ConditionalPmf pmf_from_flip(const DetectionParams& det, double flip) {
  return {det.p_d * (1.0 - flip) + flip * (1.0 - det.p_d), det.p_f * (1.0 - flip) + flip * (1.0 - det.p_f)};
}

/// pmf for a set whose sensors are Byzantine with probability `alpha`.
inline ConditionalPmf conditional_pmf(const DetectionParams& det, double alpha, double p1) {
  return pmf_from_flip(det, alpha * p1);
}

/// P(i = B, a_i = 1 | i in set): the probability that a sensor in `set` sent an
/// inverted direct bit. For the TAS split this is exactly α·p1; for the EAS
/// split it is not, because d_j depends on i's own flips.
inline std::optional<double> effective_flip(const AttackParams& atk, EasSet set) {
  const int di = set == EasSet::ss_low || set == EasSet::s_low_high ? 1 : 0;
  const int dj = set == EasSet::ss_low || set == EasSet::s_high_low ? 1 : 0;
  double flipped = 0.0;
  double occ = 0.0;
  for (Identity id_i : detail::kIds) {
    for (Identity id_j : detail::kIds) {
      const double p_ids = detail::id_prob(atk.alpha0, id_i) * detail::id_prob(atk.alpha0, id_j);
      const double status_i = detail::partner_status(atk, id_j, id_i, di);
      flipped += p_ids * detail::flip_and_partner_status(atk, id_i, id_j, 1, dj) * status_i;
      occ += p_ids * detail::partner_status(atk, id_i, id_j, dj) * status_i;
    }
  }
  return detail::ratio(flipped, occ);
}

inline std::optional<double> effective_flip(const AttackParams& atk, TasSet set) {
  const auto post = intelligent_posterior(atk)[set].posterior;
  if (!post) return std::nullopt;
  return *post * atk.p1;
}

/// Exact per-set pmf P(u_i = 1 | set, H) for the EAS split.
inline std::optional<ConditionalPmf> set_pmf(const DetectionParams& det, const AttackParams& atk, EasSet set) {
  const auto flip = effective_flip(atk, set);
  if (!flip) return std::nullopt;
  return pmf_from_flip(det, *flip);
}

inline std::optional<ConditionalPmf> set_pmf(const DetectionParams& det, const AttackParams& atk, TasSet set) {
  const auto flip = effective_flip(atk, set);
  if (!flip) return std::nullopt;
  return pmf_from_flip(det, *flip);
}

/// Group-vote pmf π²/(π² + (1-π)²) from the per-sensor SS_low pmf. Exact when
/// the two direct bits are independent given SS_low (p2 = 0).
inline ConditionalPmf group_vote_pmf(const ConditionalPmf& pmf) {
  auto vote = [](double p) {
    const double agree1 = p * p;
    const double agree0 = (1.0 - p) * (1.0 - p);
    return agree1 / (agree1 + agree0);  // denominator >= 1/2
  };
  return {vote(pmf.pi11), vote(pmf.pi10)};
}

/// Matched-pair statistics of SS_low.
struct GroupVoteModel {
  double ss_low = 0.0;                 // P(i, j in SS_low)
  std::array<double, 2> match{};       // P(u_i = u_j | SS_low, H_q)
  std::array<double, 2> both_one{};    // P(u_i = u_j = 1 | SS_low, H_q)
  double match_marginal = 0.0;         // P(u_i = u_j | SS_low)
  std::optional<ConditionalPmf> vote;  // P(u_i = 1 | SS_low ∩ M, H)
};

/// Joint direct-flip law of a pair inside SS_low, then the decision pmfs.
inline GroupVoteModel group_vote_model(const DetectionParams& det, const AttackParams& atk) {
  using detail::flip_and_partner_status;
  // joint[a_i][a_j] = P(a_i, a_j, SS_low)
  double joint[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
  for (Identity id_i : detail::kIds) {
    for (Identity id_j : detail::kIds) {
      const double p_ids = detail::id_prob(atk.alpha0, id_i) * detail::id_prob(atk.alpha0, id_j);
      for (int ai = 0; ai < 2; ++ai)
        for (int aj = 0; aj < 2; ++aj)
          joint[ai][aj] += p_ids * flip_and_partner_status(atk, id_i, id_j, ai, 1) *
                           flip_and_partner_status(atk, id_j, id_i, aj, 1);
    }
  }
  GroupVoteModel m;
  m.ss_low = joint[0][0] + joint[0][1] + joint[1][0] + joint[1][1];
  if (!(m.ss_low > 0.0)) return m;

  for (int q = 0; q < 2; ++q) {
    const double pv = det.p_one(static_cast<Hypothesis>(q));
    // P(u = t | a) = P(v = t xor a)
    auto p_u = [pv](int t, int a) { return (t ^ a) != 0 ? pv : 1.0 - pv; };
    double agree = 0.0;
    double ones = 0.0;
    for (int ai = 0; ai < 2; ++ai)
      for (int aj = 0; aj < 2; ++aj) {
        const double w = joint[ai][aj] / m.ss_low;
        ones += w * p_u(1, ai) * p_u(1, aj);
        agree += w * (p_u(1, ai) * p_u(1, aj) + p_u(0, ai) * p_u(0, aj));
      }
    m.match[q] = agree;
    m.both_one[q] = ones;
  }
  m.match_marginal = det.prior0 * m.match[0] + det.prior1 * m.match[1];
  if (m.match[0] > 0.0 && m.match[1] > 0.0) {
    m.vote = ConditionalPmf{m.both_one[1] / m.match[1], m.both_one[0] / m.match[0]};
  }
  return m;
}

// ---------------------------------------------------------------------------
// Weights.

/// log(π11 (1-π10) / (π10 (1-π11))); empty at a boundary probability.
inline std::optional<double> llr_weight(const ConditionalPmf& pmf) {
  if (pmf.pi11 <= 0.0 || pmf.pi11 >= 1.0 || pmf.pi10 <= 0.0 || pmf.pi10 >= 1.0) return std::nullopt;
  return std::log(pmf.pi11 * (1.0 - pmf.pi10) / (pmf.pi10 * (1.0 - pmf.pi11)));
}

inline ConditionalPmf clamped(const ConditionalPmf& pmf) {
  return {clamp_probability(pmf.pi11), clamp_probability(pmf.pi10)};
}

inline double clamped_llr_weight(const ConditionalPmf& pmf) { return *llr_weight(clamped(pmf)); }

/// Per-unit threshold contribution log((1-π10)/(1-π11)).
inline double threshold_term(const ConditionalPmf& pmf) {
  const auto c = clamped(pmf);
  return std::log((1.0 - c.pi10) / (1.0 - c.pi11));
}

// ---------------------------------------------------------------------------
// Scheme performance.

/// One additive block of a fusion statistic: `expected_count` units, each a
/// Bernoulli(pmf) vote weighted by `weight`.
struct FusionComponent {
  std::string label;
  double expected_count = 0.0;
  ConditionalPmf pmf;
  double weight = 0.0;
  double threshold_term = 0.0;
  std::optional<double> posterior;
};

struct SchemePerformance {
  Scheme scheme = Scheme::direct;
  std::uint32_t n_sensors = 0;
  double log_prior_ratio = 0.0;  // log(π0/π1)
  std::vector<FusionComponent> components;
  double threshold = 0.0;  // η with expected cardinalities
  double mu0 = 0.0, mu1 = 0.0;
  double var0 = 0.0, var1 = 0.0;
  double gamma_f = 0.0, gamma_m = 0.0;
  double p_e = 0.0;
  bool degenerate = false;  // a variance is zero; P_e is the deterministic limit

  /// η = log(π0/π1) + Σ count_c · threshold_term_c for arbitrary counts.
  template <class Counts>
  [[nodiscard]] double threshold_for(const Counts& counts) const {
    double eta = log_prior_ratio;
    for (std::size_t c = 0; c < components.size(); ++c)
      eta += static_cast<double>(counts[c]) * components[c].threshold_term;
    return eta;
  }
};

namespace detail {

inline FusionComponent make_component(std::string label, double count, std::optional<ConditionalPmf> pmf,
                                      const DetectionParams& det, std::optional<double> posterior = {}) {
  FusionComponent c;
  c.label = std::move(label);
  c.expected_count = count;
  // An unoccupied set never contributes; give it the attacker-free pmf so the
  // weights stay finite.
  c.pmf = pmf.value_or(pmf_from_flip(det, 0.0));
  c.weight = clamped_llr_weight(c.pmf);
  c.threshold_term = threshold_term(c.pmf);
  c.posterior = posterior;
  return c;
}

inline void finish_moments(SchemePerformance& perf, const DetectionParams& det) {
  perf.threshold = perf.log_prior_ratio;
  perf.mu0 = perf.mu1 = perf.var0 = perf.var1 = 0.0;
  for (const auto& c : perf.components) {
    const auto p = clamped(c.pmf);
    perf.threshold += c.expected_count * c.threshold_term;
    perf.mu0 += c.expected_count * p.pi10 * c.weight;
    perf.mu1 += c.expected_count * p.pi11 * c.weight;
    perf.var0 += c.expected_count * p.pi10 * (1.0 - p.pi10) * c.weight * c.weight;
    perf.var1 += c.expected_count * p.pi11 * (1.0 - p.pi11) * c.weight * c.weight;
  }
  constexpr double kInf = std::numeric_limits<double>::infinity();
  perf.degenerate = !(perf.var0 > 0.0) || !(perf.var1 > 0.0);
  // Zero variance: the statistic sits at its mean and ties go to H1.
  perf.gamma_f = perf.var0 > 0.0 ? (perf.threshold - perf.mu0) / std::sqrt(perf.var0)
                                 : (perf.mu0 >= perf.threshold ? -kInf : kInf);
  perf.gamma_m = perf.var1 > 0.0 ? (perf.mu1 - perf.threshold) / std::sqrt(perf.var1)
                                 : (perf.mu1 >= perf.threshold ? kInf : -kInf);
  perf.p_e = det.prior0 * gaussian_q(perf.gamma_f) + det.prior1 * gaussian_q(perf.gamma_m);
}

}  // namespace detail

/// Component labels in the order fusion counts are reported.
inline std::vector<std::string> component_labels(Scheme scheme) {
  switch (scheme) {
    case Scheme::direct: return {"all"};
    case Scheme::tas:
    case Scheme::tas_intelligent: return {"s_low", "s_high"};
    case Scheme::eas: return {"ss_low", "s_low_high", "s_high_low", "ss_high"};
    case Scheme::ras: return {"group_vote", "s_low_high", "s_high_low"};
  }
  return {};
}

/// Gaussian-approximation performance of one scheme with N sensors.
inline SchemePerformance scheme_performance(Scheme scheme, const DetectionParams& det, const AttackParams& atk,
                                            std::uint32_t n_sensors) {
  if (n_sensors < 2 || n_sensors % 2 != 0) throw std::invalid_argument("N must be even and at least 2");
  if (scheme == Scheme::tas && !atk.is_legacy()) throw std::invalid_argument("scheme tas requires p1 == p2");

  SchemePerformance perf;
  perf.scheme = scheme;
  perf.n_sensors = n_sensors;
  perf.log_prior_ratio = std::log(det.prior0 / det.prior1);
  const double n = static_cast<double>(n_sensors);

  switch (scheme) {
    case Scheme::direct:
      perf.components.push_back(detail::make_component("all", n, conditional_pmf(det, atk.alpha0, atk.p1), det,
                                                       atk.alpha0));
      break;
    case Scheme::tas:
    case Scheme::tas_intelligent: {
      const auto post = intelligent_posterior(atk);
      for (TasSet s : {TasSet::s_low, TasSet::s_high}) {
        perf.components.push_back(detail::make_component(std::string(to_string(s)), n * post[s].occupancy,
                                                         set_pmf(det, atk, s), det, post[s].posterior));
      }
      break;
    }
    case Scheme::eas: {
      const auto post = eas_posterior(atk);
      for (EasSet s : kEasSets) {
        perf.components.push_back(detail::make_component(std::string(to_string(s)), n * post[s].occupancy,
                                                         set_pmf(det, atk, s), det, post[s].posterior));
      }
      break;
    }
    case Scheme::ras: {
      const auto post = eas_posterior(atk);
      const auto votes = group_vote_model(det, atk);
      const double groups = n / 2.0;
      perf.components.push_back(detail::make_component("group_vote", groups * votes.match_marginal * votes.ss_low,
                                                       votes.vote, det, post[EasSet::ss_low].posterior));
      for (EasSet s : {EasSet::s_low_high, EasSet::s_high_low}) {
        perf.components.push_back(detail::make_component(std::string(to_string(s)), n * post[s].occupancy,
                                                         set_pmf(det, atk, s), det, post[s].posterior));
      }
      break;
    }
  }
  detail::finish_moments(perf, det);
  return perf;
}

/// γ_f, γ_m via the divergence decomposition
///   γ_f = (log(π0/π1)/√N + √N Σ w_c D0_c) / sqrt(Σ w_c g0_c)
///   γ_m = (-log(π0/π1)/√N + √N Σ w_c D1_c) / sqrt(Σ w_c g1_c)
/// with w_c = count_c / N. Independent of the moment path in scheme_performance.
struct DivergenceArguments {
  double gamma_f = 0.0;
  double gamma_m = 0.0;
};

inline double kl_bernoulli(double p, double q) {
  return p * std::log(p / q) + (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
}

inline DivergenceArguments divergence_arguments(const SchemePerformance& perf) {
  const double n = static_cast<double>(perf.n_sensors);
  const double root_n = std::sqrt(n);
  double d0 = 0.0, d1 = 0.0, g0 = 0.0, g1 = 0.0;
  for (const auto& c : perf.components) {
    const auto p = clamped(c.pmf);
    const double share = c.expected_count / n;
    const double w = std::log(p.pi11 / p.pi10) - std::log((1.0 - p.pi11) / (1.0 - p.pi10));
    d0 += share * kl_bernoulli(p.pi10, p.pi11);
    d1 += share * kl_bernoulli(p.pi11, p.pi10);
    g0 += share * p.pi10 * (1.0 - p.pi10) * w * w;
    g1 += share * p.pi11 * (1.0 - p.pi11) * w * w;
  }
  return {(perf.log_prior_ratio / root_n + root_n * d0) / std::sqrt(g0),
          (-perf.log_prior_ratio / root_n + root_n * d1) / std::sqrt(g1)};
}

// ---------------------------------------------------------------------------
// Blinding, ratio F, Bhattacharyya distance, transmitted bits.

struct BlindingResult {
  bool is_blind = false;
  double d0 = 0.0;  // KL(π10 || π11) of the ungrouped pmf
};

/// α0·p1 = 1/2 makes every direct bit independent of the hypothesis.
inline BlindingResult blinding_condition(const DetectionParams& det, const AttackParams& atk) {
  const auto pmf = clamped(conditional_pmf(det, atk.alpha0, atk.p1));
  return {std::abs(atk.alpha0 * atk.p1 - 0.5) <= 1e-12, kl_bernoulli(pmf.pi10, pmf.pi11)};
}

/// F = P(u_i = u_j | SS_low, at least one Byzantine in the pair), expanded as
///   [P(M|SS) - P(HH|SS) P(M|SS,HH)] / [1 - P(HH|SS)].
/// Empty when no Byzantine can sit in SS_low.
inline std::optional<double> mismatch_ratio_f(const DetectionParams& det, const AttackParams& atk) {
  const auto votes = group_vote_model(det, atk);
  if (!(votes.ss_low > 0.0)) return std::nullopt;
  const double honest_pair = (1.0 - atk.alpha0) * (1.0 - atk.alpha0) / votes.ss_low;  // f_HH = 1
  const double attacked = 1.0 - honest_pair;
  if (!(attacked > 1e-300)) return std::nullopt;
  auto agree = [](double p) { return p * p + (1.0 - p) * (1.0 - p); };
  const double honest_match = det.prior1 * agree(det.p_d) + det.prior0 * agree(det.p_f);
  return (votes.match_marginal - honest_pair * honest_match) / attacked;
}

enum class BhattacharyyaMode : std::uint8_t { grouped, ungrouped };

inline double bhattacharyya_coefficient(const ConditionalPmf& pmf) {
  return std::sqrt(pmf.pi11 * pmf.pi10) + std::sqrt((1.0 - pmf.pi11) * (1.0 - pmf.pi10));
}

/// Per-sensor Bhattacharyya distance -ln BC. Grouped mode mixes the
/// coefficient over the TAS status indicator, E_d[BC(u | d)].
inline double bhattacharyya_distance(const DetectionParams& det, const AttackParams& atk, BhattacharyyaMode mode) {
  if (mode == BhattacharyyaMode::ungrouped) {
    return -std::log(bhattacharyya_coefficient(conditional_pmf(det, atk.alpha0, atk.p1)));
  }
  const auto post = intelligent_posterior(atk);
  double bc = 0.0;
  for (TasSet s : {TasSet::s_low, TasSet::s_high}) {
    const auto pmf = set_pmf(det, atk, s);
    if (pmf) bc += post[s].occupancy * bhattacharyya_coefficient(*pmf);
  }
  return -std::log(bc);
}

/// Expected decision bits reaching the FC.
struct TransmittedBits {
  double group_votes = 0.0;       // E(N_re^LL), matched SS_low groups
  double low_high = 0.0;          // E(N_re^L)
  double high_low = 0.0;          // E(N_re^U)
  double ras_sensor_bits = 0.0;   // 2 E(N_re^LL) + E(N_re^L) + E(N_re^U): every forwarded direct decision
  double ras_group_bits = 0.0;    // E(N_re^LL) + E(N_re^L) + E(N_re^U): one bit per group vote
  double tas_bits = 0.0;          // 2N
};

inline TransmittedBits expected_transmitted_bits(const DetectionParams& det, const AttackParams& atk,
                                                 std::uint32_t n_sensors) {
  if (n_sensors % 2 != 0) throw std::invalid_argument("N must be even");
  const double n = static_cast<double>(n_sensors);
  const auto post = eas_posterior(atk);
  const auto votes = group_vote_model(det, atk);
  TransmittedBits out;
  out.group_votes = n / 2.0 * votes.match_marginal * votes.ss_low;
  out.low_high = n * post[EasSet::s_low_high].occupancy;
  out.high_low = n * post[EasSet::s_high_low].occupancy;
  out.ras_sensor_bits = 2.0 * out.group_votes + out.low_high + out.high_low;
  out.ras_group_bits = out.group_votes + out.low_high + out.high_low;
  out.tas_bits = 2.0 * n;
  return out;
}

}  // namespace auditfuse::analytic
