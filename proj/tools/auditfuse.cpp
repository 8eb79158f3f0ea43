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

// auditfuse command-line runner.
//
// Exit codes: 0 success, 2 configuration or usage error, 3 numerical
// degeneracy (a NaN reached the output).
//
// Values are taken from built-in defaults, then the JSON config file, then
// command-line flags; later sources win.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "auditfuse/auditfuse.hpp"

namespace af = auditfuse;
using af::analytic::Scheme;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

class NumericalDegeneracy : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Shared options.

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint32_t> n_sensors;
  std::optional<std::uint32_t> clusters;
  std::optional<std::uint64_t> seed;
  std::optional<double> alpha0, p1, p2, p_d, p_f, prior0;
  std::optional<std::string> identity_mode, threshold_mode;
  unsigned threads = 0;

  void attach(CLI::App* app) {
    app->add_option("config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
    app->add_option("--n-sensors", n_sensors, "Override network.n_sensors");
    app->add_option("--seed", seed, "Override network.seed");
    app->add_option("--alpha0", alpha0, "Override attack.alpha0");
    app->add_option("--p1", p1, "Override attack.p1");
    app->add_option("--p2", p2, "Override attack.p2");
    app->add_option("--p-d", p_d, "Override detection.p_d");
    app->add_option("--p-f", p_f, "Override detection.p_f");
    app->add_option("--prior0", prior0, "Override detection.prior0 (prior1 = 1 - prior0)");
    app->add_option("--identity-mode", identity_mode, "iid_bernoulli | fixed_count")
        ->check(CLI::IsMember({"iid_bernoulli", "fixed_count"}));
    app->add_option("--threshold-mode", threshold_mode, "expected | realized")
        ->check(CLI::IsMember({"expected", "realized"}));
    app->add_option("--threads", threads, "Worker threads (0: all cores)");
  }

  [[nodiscard]] af::CheckedConfig resolve() const {
    af::ConfigDraft d = config_path.empty() ? af::ConfigDraft{} : af::load_config(config_path);
    if (n_sensors) d.n_sensors = n_sensors;
    if (clusters) d.n_clusters = clusters;
    if (seed) d.seed = seed;
    if (alpha0) d.alpha0 = alpha0;
    if (p1) d.p1 = p1;
    if (p2) d.p2 = p2;
    if (p_d) d.p_d = p_d;
    if (p_f) d.p_f = p_f;
    if (prior0) {
      d.prior0 = prior0;
      d.prior1 = 1.0 - *prior0;
    }
    if (identity_mode) d.identity_mode = af::parse_identity_mode(*identity_mode);
    if (threshold_mode) d.threshold_mode = af::parse_threshold_mode(*threshold_mode);
    return af::finalize(d);
  }
};

/// Output stream that is either a file or stdout.
class Output {
 public:
  explicit Output(const std::string& path, bool append = false) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, append ? std::ios::app : std::ios::trunc);
    if (!*file_) throw UsageError("cannot open output file " + path);
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void check_finite(const af::analytic::SchemePerformance& perf) {
  if (std::isnan(perf.p_e) || std::isnan(perf.gamma_f) || std::isnan(perf.gamma_m) || std::isnan(perf.threshold)) {
    throw NumericalDegeneracy("NaN in " + std::string(af::analytic::to_string(perf.scheme)) + " performance");
  }
}

std::vector<Scheme> parse_schemes(const std::vector<std::string>& names) {
  std::vector<Scheme> out;
  for (const auto& n : names) {
    if (n == "all") return {std::begin(af::analytic::kSchemes), std::end(af::analytic::kSchemes)};
    const auto s = af::analytic::parse_scheme(n);
    if (!s) throw UsageError("unknown scheme " + n);
    out.push_back(*s);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

const std::vector<std::string> kSchemeChoices = {"direct", "tas", "tas_intelligent", "eas", "ras", "all"};

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeOptions {
  CommonOptions common;
  std::vector<std::string> schemes{"all"};
  std::string sweep;
  double from = 0.0, to = 1.0, step = 0.05;
  std::string out;
};

int run_analyze(const AnalyzeOptions& o) {
  const auto cfg = o.common.resolve();
  const auto schemes = parse_schemes(o.schemes);
  const bool explicit_tas = std::find(o.schemes.begin(), o.schemes.end(), "tas") != o.schemes.end();

  std::vector<double> points{0.0};
  if (!o.sweep.empty()) {
    const std::size_t n = af::grid_count(o.from, o.to, o.step);
    if (n == 0) throw UsageError("empty sweep range");
    if (o.from < 0.0 || o.to > 1.0) throw UsageError("sweep range must lie in [0, 1]");
    points.resize(n);
    for (std::size_t k = 0; k < n; ++k) points[k] = af::grid_value(o.from, o.to, o.step, k);
  }

  Output out(o.out);
  auto& os = out.stream();
  os << af::csv::version_line(af::csv::kPerformanceSchema) << '\n';
  af::csv::write_row(os, af::csv::performance_header());
  for (double x : points) {
    for (Scheme s : schemes) {
      af::AttackParams atk = cfg.attack;
      if (o.sweep == "alpha0") atk.alpha0 = x;
      if (o.sweep == "p1") atk.p1 = x;
      if (o.sweep == "p2") atk.p2 = x;
      if (s == Scheme::tas && (o.sweep == "p1" || o.sweep == "p2")) atk.p1 = atk.p2 = x;  // legacy attack ties p1, p2
      if (s == Scheme::tas && !atk.is_legacy()) {
        if (explicit_tas) throw UsageError("scheme tas requires p1 == p2");
        continue;
      }
      const auto perf = af::analytic::scheme_performance(s, cfg.detection, atk, cfg.network.n_sensors);
      check_finite(perf);
      af::csv::write_row(os, af::csv::performance_row(perf, cfg.detection, atk));
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOptions {
  CommonOptions common;
  std::vector<std::string> schemes{"all"};
  std::uint64_t trials = 10000;
  std::string out;
  bool append = false;
};

/// True when `path` exists and is non-empty; its first line must then be ours.
bool existing_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in || in.peek() == std::ifstream::traits_type::eof()) return false;
  std::string first;
  std::getline(in, first);
  if (first != af::csv::version_line(af::csv::kPerformanceSchema))
    throw UsageError("cannot append: " + path + " has a different CSV schema");
  return true;
}

int run_simulate(const SimulateOptions& o) {
  const auto cfg = o.common.resolve();
  auto schemes = parse_schemes(o.schemes);
  if (!cfg.attack.is_legacy()) {
    const bool explicit_tas = std::find(o.schemes.begin(), o.schemes.end(), "tas") != o.schemes.end();
    if (explicit_tas) throw UsageError("scheme tas requires p1 == p2");
    std::erase(schemes, Scheme::tas);
  }

  af::sim::ExperimentOptions opts;
  opts.n_trials = o.trials;
  opts.threads = o.common.threads;
  const auto result = af::sim::run_experiment(cfg.network, cfg.detection, cfg.attack, schemes, opts);

  const bool skip_header = o.append && !o.out.empty() && existing_csv(o.out);
  Output out(o.out, o.append);
  auto& os = out.stream();
  if (!skip_header) {
    os << af::csv::version_line(af::csv::kPerformanceSchema) << '\n';
    af::csv::write_row(os, af::csv::performance_header());
  }
  for (Scheme s : schemes) {
    const auto& perf = result.theory.at(s);
    check_finite(perf);
    af::csv::write_row(os, af::csv::performance_row(perf, cfg.detection, cfg.attack, result.perf.at(s)));
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// attack-opt

struct AttackOptions {
  CommonOptions common;
  std::string scheme = "tas_intelligent";
  double grid_step = 0.01;
  std::string surface;
  std::string summary;
};

int run_attack_opt(const AttackOptions& o) {
  if (!(o.grid_step > 0.0) || o.grid_step > 0.5) throw UsageError("--grid-step must lie in (0, 0.5]");
  const auto cfg = o.common.resolve();
  const auto scheme = af::analytic::parse_scheme(o.scheme);
  if (!scheme) throw UsageError("unknown scheme " + o.scheme);

  const auto surface = af::adversary::best_response_surface(*scheme, cfg.detection, cfg.attack.alpha0,
                                                            cfg.network.n_sensors, o.grid_step, o.common.threads);
  for (double v : surface.p_e)
    if (std::isnan(v) && *scheme != Scheme::tas) throw NumericalDegeneracy("NaN on the attack surface");
  const auto best = af::adversary::argmax(surface);

  if (!o.surface.empty()) {
    Output out(o.surface);
    auto& os = out.stream();
    os << af::csv::version_line("attack-surface") << '\n';
    af::csv::write_row(os, {"scheme", "alpha0", "p1", "p2", "p_e", "dpe_dp2_sign"});
    for (std::size_t r = 0; r < surface.p1.size(); ++r) {
      for (std::size_t c = 0; c < surface.p2.size(); ++c) {
        if (!surface.defined(r, c)) continue;
        std::string sign;
        if (c + 1 < surface.p2.size() && surface.defined(r, c + 1)) {
          const double d = surface.at(r, c + 1) - surface.at(r, c);
          sign = d > 1e-15 ? "1" : (d < -1e-15 ? "-1" : "0");
        }
        af::csv::write_row(os, {std::string(af::analytic::to_string(*scheme)), af::csv::number(surface.alpha0),
                                af::csv::number(surface.p1[r]), af::csv::number(surface.p2[c]),
                                af::csv::number(surface.at(r, c)), sign});
      }
    }
  }

  nlohmann::ordered_json j;
  j["scheme"] = af::analytic::to_string(*scheme);
  j["alpha0"] = cfg.attack.alpha0;
  j["n_sensors"] = cfg.network.n_sensors;
  j["grid_step"] = o.grid_step;
  j["p1_star"] = best.p1;
  j["p2_star"] = best.p2;
  j["p_e_star"] = best.p_e;
  Output out(o.summary);
  out.stream() << j.dump(2) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// cluster-sim

struct ClusterOptions {
  CommonOptions common;
  std::uint64_t trials = 1000;
  std::string out;
  std::string report;
};

int run_cluster_sim(const ClusterOptions& o) {
  const auto cfg = o.common.resolve();
  af::net::OverheadOptions opts;
  opts.n_trials = o.trials;
  opts.threads = o.common.threads;
  const auto ledger = af::net::measure_overhead(cfg.network, cfg.detection, cfg.attack, opts);
  const auto expected = af::analytic::expected_transmitted_bits(cfg.detection, cfg.attack, cfg.network.n_sensors);

  {
    Output out(o.out);
    auto& os = out.stream();
    os << af::csv::version_line("overhead") << '\n';
    af::csv::write_row(os, {"scope", "trials", "mean_payload_bits", "standard_error", "mean_group_bits",
                            "group_standard_error", "expected_payload_bits", "expected_group_bits", "tas_bits",
                            "header_bits"});
    const double trials = static_cast<double>(ledger.trials);
    for (std::size_t c = 0; c < ledger.cluster_payload_bits.size(); ++c) {
      af::csv::write_row(os, {"cluster_" + std::to_string(c), std::to_string(ledger.trials),
                              af::csv::number(static_cast<double>(ledger.cluster_payload_bits[c]) / trials), "", "", "",
                              "", "", "", ""});
    }
    af::csv::write_row(os, {"total", std::to_string(ledger.trials), af::csv::number(ledger.ras_bits.mean()),
                            af::csv::number(ledger.ras_bits.standard_error()),
                            af::csv::number(ledger.ras_group_bits.mean()),
                            af::csv::number(ledger.ras_group_bits.standard_error()),
                            af::csv::number(expected.ras_sensor_bits), af::csv::number(expected.ras_group_bits),
                            std::to_string(ledger.tas_bits()), std::to_string(ledger.header_bits_per_trial)});
  }

  nlohmann::ordered_json j;
  j["trials"] = ledger.trials;
  j["clusters"] = ledger.n_clusters;
  j["single_vs_multi_mismatches"] = ledger.single_vs_multi_mismatches;
  j["fc_vs_sim_mismatches"] = ledger.fc_vs_sim_mismatches;
  j["decode_failures"] = ledger.decode_failures;
  j["identical"] = ledger.single_vs_multi_mismatches == 0 && ledger.fc_vs_sim_mismatches == 0 &&
                   ledger.decode_failures == 0;
  j["max_payload_bits"] = ledger.max_ras_bits;
  j["tas_bits"] = ledger.tas_bits();
  Output out(o.report);
  out.stream() << j.dump(2) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// hexdump

struct HexdumpOptions {
  std::string input;
  bool example = false;
  std::string write;
};

int run_hexdump(const HexdumpOptions& o) {
  std::vector<std::uint8_t> bytes;
  if (o.example) {
    bytes = af::net::encode(af::net::example_report());
  } else {
    if (o.input.empty()) throw UsageError("give a report file or --example");
    std::ifstream in(o.input, std::ios::binary);
    if (!in) throw UsageError("cannot open " + o.input);
    bytes.assign(std::istreambuf_iterator<char>(in), {});
  }
  if (!o.write.empty()) {
    std::ofstream f(o.write, std::ios::binary);
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw UsageError("cannot write " + o.write);
  }
  std::cout << af::net::hexdump(bytes);
  try {
    std::cout << af::net::describe(af::net::decode(bytes));
  } catch (const af::net::DecodeError& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// oracle-dump

struct OracleOptions {
  CommonOptions common;
  std::string out;
};

int run_oracle_dump(const OracleOptions& o) {
  const auto cfg = o.common.resolve();
  Output out(o.out);
  out.stream() << af::csv::version_line("joint-outcome") << '\n';
  af::oracle::write_csv(out.stream(), af::oracle::enumerate_group(cfg.detection, cfg.attack));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Audit-bit distributed detection under Byzantine attacks"};
  app.require_subcommand(1);

  AnalyzeOptions analyze;
  auto* a = app.add_subcommand("analyze", "Closed-form performance, optionally swept over one parameter");
  analyze.common.attach(a);
  a->add_option("--scheme", analyze.schemes, "Scheme(s) or 'all'")->check(CLI::IsMember(kSchemeChoices));
  a->add_option("--sweep", analyze.sweep, "Swept parameter")->check(CLI::IsMember({"p1", "p2", "alpha0"}));
  a->add_option("--from", analyze.from, "Sweep start");
  a->add_option("--to", analyze.to, "Sweep end (inclusive)");
  a->add_option("--step", analyze.step, "Sweep step");
  a->add_option("--out", analyze.out, "CSV output (default stdout)");

  SimulateOptions simulate;
  auto* s = app.add_subcommand("simulate", "Monte Carlo error rates next to the closed form");
  simulate.common.attach(s);
  s->add_option("--scheme", simulate.schemes, "Scheme(s) or 'all'")->check(CLI::IsMember(kSchemeChoices));
  s->add_option("--trials", simulate.trials, "Number of trials")->check(CLI::PositiveNumber);
  s->add_option("--out", simulate.out, "CSV output (default stdout)");
  s->add_flag("--append", simulate.append, "Append rows to an existing CSV");

  AttackOptions attack;
  auto* t = app.add_subcommand("attack-opt", "Grid search for the attacker's best (p1, p2)");
  attack.common.attach(t);
  t->add_option("--scheme", attack.scheme, "Scheme")->check(CLI::IsMember({"direct", "tas", "tas_intelligent", "eas", "ras"}));
  t->add_option("--grid-step", attack.grid_step, "Grid step in (0, 0.5]");
  t->add_option("--surface", attack.surface, "CSV surface output");
  t->add_option("--summary", attack.summary, "JSON summary output (default stdout)");

  ClusterOptions cluster;
  auto* c = app.add_subcommand("cluster-sim", "Cluster protocol replay: overhead ledger and decision equivalence");
  cluster.common.attach(c);
  c->add_option("--clusters", cluster.common.clusters, "Number of clusters T");
  c->add_option("--trials", cluster.trials, "Number of trials")->check(CLI::PositiveNumber);
  c->add_option("--out", cluster.out, "Overhead CSV output (default stdout)");
  c->add_option("--report", cluster.report, "Equivalence JSON output (default stdout)");

  HexdumpOptions hex;
  auto* h = app.add_subcommand("hexdump", "Inspect an encoded cluster report");
  h->add_option("file", hex.input, "Binary report file");
  h->add_flag("--example", hex.example, "Use the built-in 12-sensor example report");
  h->add_option("--write", hex.write, "Also write the bytes to this file");

  OracleOptions oracle;
  auto* d = app.add_subcommand("oracle-dump", "Exhaustive joint outcome table of one group");
  oracle.common.attach(d);
  d->add_option("--out", oracle.out, "CSV output (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (a->parsed()) return run_analyze(analyze);
    if (s->parsed()) return run_simulate(simulate);
    if (t->parsed()) return run_attack_opt(attack);
    if (c->parsed()) return run_cluster_sim(cluster);
    if (h->parsed()) return run_hexdump(hex);
    if (d->parsed()) return run_oracle_dump(oracle);
  } catch (const af::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalDegeneracy& e) {
    std::cerr << "numerical degeneracy: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitConfig;
}
