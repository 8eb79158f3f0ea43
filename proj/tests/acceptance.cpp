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
// Acceptance suite. Prints one PASS/FAIL line per criterion followed by
// indented detail lines, and exits nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "auditfuse/auditfuse.hpp"

namespace {

using namespace auditfuse;
using analytic::Scheme;

// Pinned tolerances.
constexpr double kExact = 1e-12;          // closed form vs enumeration, identities
constexpr double kGammaTol = 1e-9;        // γ values compared across schemes
constexpr double kOrderSlack = 1e-12;     // slack on P_e inequalities
constexpr double kMcSigmas = 3.0;         // Monte Carlo: sigmas of the standard error
constexpr double kMcAbsolute = 0.01;      // Monte Carlo: absolute allowance on P_e
constexpr double kOverheadSigmas = 3.0;   // transmitted-bit mean vs expectation
constexpr double kOracleSeconds = 60.0;   // runtime budget, criterion 1
constexpr double kMcSeconds = 120.0;      // runtime budget, criterion 9

const DetectionParams kDet{0.9, 0.1, 0.5, 0.5};
constexpr std::uint32_t kN = 100;

std::vector<double> Grid(double from, double to, double step) {
  std::vector<double> out(grid_count(from, to, step));
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = grid_value(from, to, step, k);
  return out;
}

const std::vector<double> kGrid9 = Grid(0.0, 1.0, 0.125);

std::string Fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

class Report {
 public:
  void detail(const std::string& s) { details_.push_back(s); }
  void check(bool ok, const std::string& what) {
    ok_ = ok_ && ok;
    details_.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void finish(int id, const std::string& title) {
    std::printf("%s criterion %d: %s\n", ok_ ? "PASS" : "FAIL", id, title.c_str());
    for (const auto& d : details_) std::printf("      %s\n", d.c_str());
    std::fflush(stdout);
  }
  [[nodiscard]] bool ok() const { return ok_; }

 private:
  bool ok_ = true;
  std::vector<std::string> details_;
};

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

// Tracks the worst deviation seen and where.
struct Worst {
  double value = 0.0;
  std::string where = "-";
  void see(double d, const std::string& at) {
    if (!(d <= value)) {  // NaN counts as worse
      value = std::isnan(d) ? std::numeric_limits<double>::infinity() : d;
      where = at;
    }
  }
};

std::string At(double a, double p1, double p2) { return Fmt("(a0=%.3f p1=%.3f p2=%.3f)", a, p1, p2); }

// ---------------------------------------------------------------------------

bool Criterion1() {
  Report r;
  const auto start = std::chrono::steady_clock::now();
  Worst post, pmf, occ;
  std::size_t missing = 0;
  auto cmp = [&](Worst& w, std::optional<double> got, std::optional<double> want, const std::string& at) {
    if (got.has_value() != want.has_value()) {
      ++missing;
      return;
    }
    if (got) w.see(std::abs(*got - *want), at);
  };
  for (double a : kGrid9)
    for (double p1 : kGrid9)
      for (double p2 : kGrid9) {
        const AttackParams atk{a, p1, p2};
        const auto at = At(a, p1, p2);
        const auto table = oracle::enumerate_group(kDet, atk);
        const auto intel = analytic::intelligent_posterior(atk);
        for (TasSet s : {TasSet::s_low, TasSet::s_high}) {
          occ.see(std::abs(intel[s].occupancy - oracle::occupancy(table, s)), at);
          cmp(post, intel[s].posterior, oracle::posterior_from_oracle(table, oracle::events::tas(s)), at);
          if (atk.is_legacy()) {
            cmp(post, analytic::tas_posterior(atk)[s].posterior,
                oracle::posterior_from_oracle(table, oracle::events::tas(s)), at);
          }
          const auto m = analytic::set_pmf(kDet, atk, s);
          cmp(pmf, m ? std::optional(m->pi11) : std::nullopt, oracle::conditional_decision_pmf(table, s, Hypothesis::h1), at);
          cmp(pmf, m ? std::optional(m->pi10) : std::nullopt, oracle::conditional_decision_pmf(table, s, Hypothesis::h0), at);
        }
        const auto eas = analytic::eas_posterior(atk);
        for (EasSet s : kEasSets) {
          occ.see(std::abs(eas[s].occupancy - oracle::occupancy(table, s)), at);
          cmp(post, eas[s].posterior, oracle::posterior_from_oracle(table, oracle::events::eas(s)), at);
          const auto m = analytic::set_pmf(kDet, atk, s);
          cmp(pmf, m ? std::optional(m->pi11) : std::nullopt, oracle::conditional_decision_pmf(table, s, Hypothesis::h1), at);
          cmp(pmf, m ? std::optional(m->pi10) : std::nullopt, oracle::conditional_decision_pmf(table, s, Hypothesis::h0), at);
        }
        const auto gv = analytic::group_vote_model(kDet, atk);
        const auto v1 = oracle::conditional_decision_pmf(table, oracle::events::group_vote(), Hypothesis::h1);
        const auto v0 = oracle::conditional_decision_pmf(table, oracle::events::group_vote(), Hypothesis::h0);
        cmp(pmf, gv.vote ? std::optional(gv.vote->pi11) : std::nullopt, v1, at);
        cmp(pmf, gv.vote ? std::optional(gv.vote->pi10) : std::nullopt, v0, at);
        const auto flat = analytic::conditional_pmf(kDet, a, p1);
        cmp(pmf, flat.pi11, oracle::conditional_decision_pmf(table, [](const auto&) { return true; }, Hypothesis::h1), at);
        cmp(pmf, flat.pi10, oracle::conditional_decision_pmf(table, [](const auto&) { return true; }, Hypothesis::h0), at);
      }
  const double secs = Seconds(start);
  r.check(post.value <= kExact, Fmt("max |posterior - oracle| = %.3g", post.value) + " at " + post.where);
  r.check(pmf.value <= kExact, Fmt("max |pmf - oracle| = %.3g", pmf.value) + " at " + pmf.where);
  r.check(occ.value <= kExact, Fmt("max |occupancy - oracle| = %.3g", occ.value) + " at " + occ.where);
  r.check(missing == 0, Fmt("definedness mismatches = %.0f", static_cast<double>(missing)));
  r.check(secs < kOracleSeconds, Fmt("runtime %.2f s (budget %.0f s)", secs, kOracleSeconds));
  r.finish(1, "closed-form posteriors and pmfs match the enumeration oracle on the 9x9x9 grid");
  return r.ok();
}

bool Criterion2() {
  Report r;
  std::size_t violations = 0, checked = 0;
  Worst eq;
  for (double a : kGrid9)
    for (double p1 : kGrid9)
      for (double p2 : kGrid9) {
        const auto post = analytic::intelligent_posterior({a, p1, p2});
        const auto& lo = post[TasSet::s_low].posterior;
        const auto& hi = post[TasSet::s_high].posterior;
        if (lo) {
          ++checked;
          if (*lo > a + kExact) ++violations;
          if (p2 == 0.0) eq.see(std::abs(*lo - a), At(a, p1, p2));
        }
        if (hi) {
          ++checked;
          if (*hi < a - kExact) ++violations;
          if (p2 == 0.0) eq.see(std::abs(*hi - a), At(a, p1, p2));
        }
      }
  r.check(violations == 0, Fmt("low <= alpha0 <= high: %.0f violations over %.0f defined posteriors",
                               static_cast<double>(violations), static_cast<double>(checked)));
  r.check(eq.value <= kExact, Fmt("p2 = 0: max |posterior - alpha0| = %.3g", eq.value) + " at " + eq.where);
  r.finish(2, "intelligent-attack posteriors bracket alpha0 and equal it at p2 = 0");
  return r.ok();
}

bool Criterion3() {
  Report r;
  Worst w;
  for (double a : kGrid9)
    for (double p1 : kGrid9)
      for (double p2 : kGrid9) {
        const AttackParams atk{a, p1, p2};
        const auto tas = analytic::intelligent_posterior(atk);
        const auto eas = analytic::eas_posterior(atk);
        auto mix = [&](TasSet t, EasSet same, EasSet other) {
          const auto& whole = tas[t];
          if (!whole.posterior) return;
          double sum = 0.0;
          for (EasSet s : {same, other}) {
            const double weight = eas[s].occupancy / whole.occupancy;  // P(d_j | d_i)
            if (weight > 0.0) sum += weight * *eas[s].posterior;
          }
          w.see(std::abs(sum - *whole.posterior), At(a, p1, p2));
        };
        mix(TasSet::s_low, EasSet::ss_low, EasSet::s_low_high);
        mix(TasSet::s_high, EasSet::ss_high, EasSet::s_high_low);
      }
  r.check(w.value <= kExact, Fmt("max |weighted average - two-set posterior| = %.3g", w.value) + " at " + w.where);
  r.finish(3, "two-set posteriors are occupancy-weighted averages of the four-set posteriors");
  return r.ok();
}

bool Criterion4() {
  Report r;
  const auto alphas = Grid(0.05, 0.5, 0.05);
  const auto p_grid = Grid(0.0, 1.0, 0.05);

  Worst a_diff;
  for (double a : alphas)
    for (double p1 : p_grid) {
      const double pi = analytic::scheme_performance(Scheme::tas_intelligent, kDet, {a, p1, 0.0}, kN).p_e;
      const double pd = analytic::scheme_performance(Scheme::direct, kDet, {a, p1, 0.0}, kN).p_e;
      a_diff.see(std::abs(pi - pd), At(a, p1, 0.0));
    }
  r.check(a_diff.value <= kExact, Fmt("(a) max |P_e^I(p2=0) - P_e^D| = %.3g", a_diff.value) + " at " + a_diff.where);

  std::size_t rows = 0, bad = 0;
  std::string first_bad = "-";
  for (double a : alphas) {
    const auto s = adversary::best_response_surface(Scheme::tas_intelligent, kDet, a, kN, 0.05);
    for (std::size_t row = 0; row < s.p1.size(); ++row) {
      ++rows;
      double best = -1.0;
      for (std::size_t c = 0; c < s.p2.size(); ++c) best = std::max(best, s.at(row, c));
      if (s.at(row, 0) < best - kOrderSlack) {
        if (bad++ == 0) first_bad = At(a, s.p1[row], 0.0);
      }
    }
  }
  r.check(bad == 0, Fmt("(b) p2 = 0 maximizes P_e^I in %.0f of %.0f (alpha0, p1) rows", static_cast<double>(rows - bad),
                        static_cast<double>(rows)) +
                        (bad ? " first miss " + first_bad : ""));

  const AttackParams blind{0.5, 1.0, 0.0};
  const auto pmf = analytic::conditional_pmf(kDet, blind.alpha0, blind.p1);
  const double pe = analytic::scheme_performance(Scheme::direct, kDet, blind, kN).p_e;
  r.check(pmf.pi11 == 0.5 && pmf.pi10 == 0.5, Fmt("(c) pi11 = %.17g, pi10 = %.17g", pmf.pi11, pmf.pi10));
  r.check(std::abs(pe - 0.5) <= kExact, Fmt("(c) P_e^D at alpha0 = 0.5, p1 = 1: %.17g", pe));
  r.finish(4, "relaying honestly is the optimal intelligent attack; alpha0 = 0.5, p1 = 1 blinds the FC");
  return r.ok();
}

bool Criterion5() {
  Report r;
  const AttackParams base{0.3, 0.7, 0.0};
  const auto direct = analytic::scheme_performance(Scheme::direct, kDet, base, kN);
  double min_f = std::numeric_limits<double>::infinity(), min_m = min_f;
  double at_f = -1, at_m = -1;
  for (double p2 : Grid(0.0, 1.0, 0.01)) {
    const auto perf = analytic::scheme_performance(Scheme::tas_intelligent, kDet, {0.3, 0.7, p2}, kN);
    if (perf.gamma_f < min_f) {
      min_f = perf.gamma_f;
      at_f = p2;
    }
    if (perf.gamma_m < min_m) {
      min_m = perf.gamma_m;
      at_m = p2;
    }
  }
  const auto zero = analytic::scheme_performance(Scheme::tas_intelligent, kDet, base, kN);
  r.check(at_f == 0.0, Fmt("gamma_f minimum %.6f at p2 = %.2f", min_f, at_f));
  r.check(at_m == 0.0, Fmt("gamma_m minimum %.6f at p2 = %.2f", min_m, at_m));
  r.check(std::abs(zero.gamma_f - direct.gamma_f) <= kGammaTol,
          Fmt("gamma_f(p2=0) = %.12f, direct %.12f", zero.gamma_f, direct.gamma_f));
  r.check(std::abs(zero.gamma_m - direct.gamma_m) <= kGammaTol,
          Fmt("gamma_m(p2=0) = %.12f, direct %.12f", zero.gamma_m, direct.gamma_m));
  r.finish(5, "p2 sweep at p1 = 0.7, alpha0 = 0.3: gamma minimized at p2 = 0 where it equals direct");
  return r.ok();
}

bool Criterion6() {
  Report r;
  Worst w;
  std::size_t defined = 0;
  for (double a : kGrid9)
    for (double p1 : kGrid9) {
      const auto eas = analytic::eas_posterior({a, p1, 0.0});
      const auto& s = eas[EasSet::ss_high];
      if (s.occupancy > 0.0 && s.posterior) {
        ++defined;
        w.see(std::abs(*s.posterior - 1.0), At(a, p1, 0.0));
      }
    }
  r.check(defined > 0 && w.value <= kExact,
          Fmt("(a) p2 = 0: max |P(B | SS_high) - 1| = %.3g over %.0f cells", w.value, static_cast<double>(defined)) +
              " at " + w.where);

  // F(alpha0) at p2 = 0.1 for each p1 >= 0.5; strictly decreasing is required.
  const auto alphas = Grid(0.05, 0.5, 0.05);
  std::size_t rows = 0, decreasing = 0;
  for (double p1 : Grid(0.5, 1.0, 0.05)) {
    ++rows;
    std::vector<double> f;
    for (double a : alphas) f.push_back(analytic::mismatch_ratio_f(kDet, {a, p1, 0.1}).value_or(std::nan("")));
    std::size_t up = 0, flat = 0, down = 0;
    for (std::size_t k = 0; k + 1 < f.size(); ++k) {
      const double d = f[k + 1] - f[k];
      (d < -kExact ? down : (d > kExact ? up : flat)) += 1;
    }
    if (down == f.size() - 1) ++decreasing;
    r.detail(Fmt("p1=%.2f  F(0.05)=%.6f  F(0.5)=%.6f", p1, f.front(), f.back()) +
             Fmt("  steps down/flat/up = %.0f/%.0f/%.0f", static_cast<double>(down), static_cast<double>(flat),
                 static_cast<double>(up)));
  }
  r.check(decreasing == rows, Fmt("(b) F strictly decreasing in alpha0 for %.0f of %.0f p1 values",
                                  static_cast<double>(decreasing), static_cast<double>(rows)));
  r.finish(6, "SS_high pairs are all Byzantine at p2 = 0; F decreases in alpha0 at p2 = 0.1");
  return r.ok();
}

bool Criterion7() {
  Report r;
  std::size_t cells = 0, bad = 0;
  std::string first = "-";
  Worst tas_direct;
  for (double a : {0.15, 0.3, 0.45})
    for (double p1 : Grid(0.0, 1.0, 0.05)) {
      const AttackParams atk{a, p1, 0.0};
      const double d = analytic::scheme_performance(Scheme::direct, kDet, atk, kN).p_e;
      const double t = analytic::scheme_performance(Scheme::tas_intelligent, kDet, atk, kN).p_e;
      const double e = analytic::scheme_performance(Scheme::eas, kDet, atk, kN).p_e;
      const double ras = analytic::scheme_performance(Scheme::ras, kDet, atk, kN).p_e;
      ++cells;
      tas_direct.see(std::abs(t - d), At(a, p1, 0.0));
      if (!(ras <= e + kOrderSlack && e <= t + kOrderSlack)) {
        if (bad++ == 0) first = At(a, p1, 0.0) + Fmt(" ras=%.3g eas=%.3g tas=%.3g", ras, e, t);
      }
    }
  r.check(bad == 0, Fmt("P_e(RAS) <= P_e(EAS) <= P_e(TAS) in %.0f of %.0f cells", static_cast<double>(cells - bad),
                        static_cast<double>(cells)) +
                        (bad ? " first miss " + first : ""));
  r.check(tas_direct.value <= kExact, Fmt("max |P_e(TAS) - P_e(direct)| = %.3g", tas_direct.value));
  const AttackParams strict{0.15, 0.5, 0.0};
  const double ras = analytic::scheme_performance(Scheme::ras, kDet, strict, kN).p_e;
  const double eas = analytic::scheme_performance(Scheme::eas, kDet, strict, kN).p_e;
  const double dir = analytic::scheme_performance(Scheme::direct, kDet, strict, kN).p_e;
  r.check(ras < eas && ras < dir, Fmt("alpha0 = 0.15, p1 = 0.5: RAS %.6g < EAS %.6g, direct %.6g", ras, eas, dir));
  r.finish(7, "scheme ordering under the intelligent attack (p2 = 0)");
  return r.ok();
}

bool Criterion8() {
  Report r;
  std::size_t cells = 0, bad = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (double p : Grid(0.1, 0.9, 0.1))
    for (double a : Grid(0.1, 0.5, 0.1)) {
      const double t = analytic::scheme_performance(Scheme::tas, kDet, {a, p, p}, kN).p_e;
      const double d = analytic::scheme_performance(Scheme::direct, kDet, {a, p, p}, kN).p_e;
      ++cells;
      worst = std::max(worst, t - d);
      if (t > d + kOrderSlack) ++bad;
    }
  r.check(bad == 0, Fmt("P_e^A <= P_e^D in %.0f of %.0f cells; max(P_e^A - P_e^D) = %.3g",
                        static_cast<double>(cells - bad), static_cast<double>(cells), worst));
  r.finish(8, "traditional audit never worse than direct under the legacy attack");
  return r.ok();
}

bool Criterion9() {
  Report r;
  NetworkConfig net;
  net.n_sensors = kN;
  net.seed = 42;
  const AttackParams atk{0.3, 0.7, 0.7};
  const std::vector<Scheme> schemes(std::begin(analytic::kSchemes), std::end(analytic::kSchemes));
  sim::ExperimentOptions opts;
  opts.n_trials = 100000;
  const auto start = std::chrono::steady_clock::now();
  const auto res = sim::run_experiment(net, kDet, atk, schemes, opts);
  const double secs = Seconds(start);
  for (Scheme s : schemes) {
    const auto& e = res.perf.at(s);
    const double theory = res.theory.at(s).p_e;
    const double allowed = kMcSigmas * e.standard_error() + kMcAbsolute;
    r.check(std::abs(e.p_e_hat() - theory) <= allowed,
            std::string(analytic::to_string(s)) +
                Fmt(": empirical %.6g (SE %.2g) vs closed form %.6g, allowed %.4g", e.p_e_hat(), e.standard_error(),
                    theory, allowed));
  }
  r.check(secs < kMcSeconds, Fmt("runtime %.2f s for 1e5 trials (budget %.0f s)", secs, kMcSeconds));
  r.finish(9, "Monte Carlo error rates agree with the closed form (N = 100, alpha0 = 0.3, p = 0.7)");
  return r.ok();
}

bool Criterion10() {
  Report r;
  // Codec round trip.
  std::mt19937_64 rng(7);
  std::size_t failures = 0;
  for (int k = 0; k < 10000; ++k) {
    net::ClusterReport rep;
    rep.cluster_id = static_cast<std::uint16_t>(rng());
    for (std::size_t g = rng() % 60; g > 0; --g) {
      const std::uint8_t b = rng() & 1;
      rep.packet(net::SetTag::matched_low).bits.insert(rep.packet(net::SetTag::matched_low).bits.end(), 2, b);
    }
    for (net::SetTag t : {net::SetTag::low_high, net::SetTag::high_low})
      for (std::size_t n = rng() % 100; n > 0; --n) rep.packet(t).bits.push_back(rng() & 1);
    try {
      if (!(net::decode(net::encode(rep)) == rep)) ++failures;
    } catch (const std::exception&) {
      ++failures;
    }
  }
  r.check(failures == 0, Fmt("codec round trip: %.0f failures in 10000 random reports", static_cast<double>(failures)));

  // Partition invariance, 100 groups as 1 or 4 clusters.
  NetworkConfig part;
  part.n_sensors = 200;
  part.n_clusters = 4;
  part.seed = 42;
  net::OverheadOptions po;
  po.n_trials = 1000;
  const auto pl = net::measure_overhead(part, kDet, {0.3, 0.7, 0.2}, po);
  r.check(pl.single_vs_multi_mismatches == 0 && pl.fc_vs_sim_mismatches == 0 && pl.decode_failures == 0,
          Fmt("T=1 vs T=4 (N=200): %.0f decision/statistic mismatches, %.0f FC vs simulator, %.0f decode failures "
              "over %.0f trials",
              static_cast<double>(pl.single_vs_multi_mismatches), static_cast<double>(pl.fc_vs_sim_mismatches),
              static_cast<double>(pl.decode_failures), static_cast<double>(pl.trials)));

  // Overhead: Monte Carlo mean vs expectation, 1e5 trials.
  NetworkConfig oc;
  oc.n_sensors = kN;
  oc.n_clusters = 5;
  oc.seed = 42;
  net::OverheadOptions oo;
  oo.n_trials = 100000;
  const AttackParams main{0.3, 0.7, 0.2};
  const auto led = net::measure_overhead(oc, kDet, main, oo);
  const auto bits = analytic::expected_transmitted_bits(kDet, main, kN);
  r.check(std::abs(led.ras_bits.mean() - bits.ras_sensor_bits) <= kOverheadSigmas * led.ras_bits.standard_error(),
          Fmt("alpha0=0.3 p1=0.7 p2=0.2: mean bits %.4f vs expected %.4f (SE %.3g)", led.ras_bits.mean(),
              bits.ras_sensor_bits, led.ras_bits.standard_error()));
  r.check(led.max_ras_bits < led.tas_bits(),
          Fmt("largest per-trial payload %.0f < %.0f", static_cast<double>(led.max_ras_bits),
              static_cast<double>(led.tas_bits())));
  r.detail(Fmt("one bit per group vote: mean %.4f vs expected %.4f (SE %.3g)", led.ras_group_bits.mean(),
               bits.ras_group_bits, led.ras_group_bits.standard_error()));

  // Expected bits over a (p1, p2, alpha0) grid: below 2N and decreasing in alpha0.
  const auto alphas = Grid(0.05, 0.5, 0.05);
  std::size_t series = 0, decreasing = 0, group_decreasing = 0;
  double max_bits = 0.0;
  for (double p2 : {0.0, 0.2})
    for (double p1 : Grid(0.5, 1.0, 0.1)) {
      ++series;
      bool down = true, group_down = true;
      double prev = std::numeric_limits<double>::infinity(), prev_g = prev;
      for (double a : alphas) {
        const auto b = analytic::expected_transmitted_bits(kDet, {a, p1, p2}, kN);
        max_bits = std::max(max_bits, b.ras_sensor_bits);
        down = down && b.ras_sensor_bits < prev;
        group_down = group_down && b.ras_group_bits < prev_g;
        prev = b.ras_sensor_bits;
        prev_g = b.ras_group_bits;
      }
      decreasing += down;
      group_decreasing += group_down;
    }
  r.check(max_bits < 2.0 * kN, Fmt("expected bits over the grid at most %.4f < %.0f", max_bits, 2.0 * kN));
  r.check(decreasing == series, Fmt("expected bits strictly decreasing in alpha0 in %.0f of %.0f (p1, p2) series",
                                    static_cast<double>(decreasing), static_cast<double>(series)));
  r.detail(Fmt("one bit per group vote: decreasing in %.0f of %.0f series", static_cast<double>(group_decreasing),
               static_cast<double>(series)));
  r.finish(10, "cluster protocol: codec, partition invariance, transmitted-bit overhead");
  return r.ok();
}

bool Criterion11() {
  Report r;
  std::size_t bad = 0;
  Worst eq;
  std::string first = "-";
  for (double a : kGrid9)
    for (double p1 : kGrid9)
      for (double p2 : kGrid9) {
        const AttackParams atk{a, p1, p2};
        const double g = analytic::bhattacharyya_distance(kDet, atk, analytic::BhattacharyyaMode::grouped);
        const double u = analytic::bhattacharyya_distance(kDet, atk, analytic::BhattacharyyaMode::ungrouped);
        if (!(g >= u - kExact)) {
          if (bad++ == 0) first = At(a, p1, p2);
        }
        if (p2 == 0.0) eq.see(std::abs(g - u), At(a, p1, p2));
      }
  r.check(bad == 0, Fmt("grouped >= ungrouped: %.0f violations", static_cast<double>(bad)) +
                        (bad ? " first at " + first : ""));
  r.check(eq.value <= kExact, Fmt("p2 = 0: max |grouped - ungrouped| = %.3g", eq.value) + " at " + eq.where);
  r.finish(11, "grouping never lowers the Bhattacharyya distance and is ineffective at p2 = 0");
  return r.ok();
}

}  // namespace

int main() {
  const std::vector<std::function<bool()>> criteria = {Criterion1, Criterion2, Criterion3, Criterion4,
                                                       Criterion5, Criterion6, Criterion7, Criterion8,
                                                       Criterion9, Criterion10, Criterion11};
  std::size_t passed = 0;
  for (const auto& c : criteria) passed += c();
  std::printf("%zu of %zu criteria passed\n", passed, criteria.size());
  return passed == criteria.size() ? 0 : 1;
}
