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

// Cluster reports: MMSD aggregation, the wire codec, FC-side fusion and
// payload accounting.
//
// Wire layout of one report (multi-byte integers big-endian):
//
//   cluster_id : u16
//   3 x packet, tags 00, 01, 10 in that order:
//     tag      : u8   set tag in the two low bits, upper six bits zero
//     count    : u16  number of decision bits
//     payload  : ceil(count / 8) bytes, first decision in the MSB, zero padded
//
// Tag 00 carries the direct decisions of both sensors of every matched SS_low
// group, so its count is even and consecutive bit pairs are equal. Tags 01 and
// 10 carry S_low_high and S_high_low sensors. Within a packet, bits follow
// ascending sensor index.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "auditfuse/analytic.hpp"
#include "auditfuse/model.hpp"
#include "auditfuse/parallel.hpp"
#include "auditfuse/simcore.hpp"

namespace auditfuse::net {

enum class SetTag : std::uint8_t { matched_low = 0b00, low_high = 0b01, high_low = 0b10 };

inline constexpr SetTag kTags[] = {SetTag::matched_low, SetTag::low_high, SetTag::high_low};

inline constexpr std::size_t kReportHeaderBytes = 2;
inline constexpr std::size_t kPacketHeaderBytes = 3;

struct Packet {
  SetTag tag = SetTag::matched_low;
  std::vector<std::uint8_t> bits;  // one 0/1 entry per decision

  [[nodiscard]] std::size_t count() const { return bits.size(); }
  friend bool operator==(const Packet&, const Packet&) = default;
};

struct ClusterReport {
  std::uint16_t cluster_id = 0;
  std::array<Packet, 3> packets{Packet{SetTag::matched_low, {}}, Packet{SetTag::low_high, {}},
                                Packet{SetTag::high_low, {}}};

  [[nodiscard]] const Packet& packet(SetTag t) const { return packets[static_cast<std::size_t>(t)]; }
  [[nodiscard]] Packet& packet(SetTag t) { return packets[static_cast<std::size_t>(t)]; }

  /// Decision bits carried, headers excluded.
  [[nodiscard]] std::size_t payload_bits() const {
    return packets[0].count() + packets[1].count() + packets[2].count();
  }
  /// Same with one bit per group vote.
  [[nodiscard]] std::size_t group_payload_bits() const {
    return packets[0].count() / 2 + packets[1].count() + packets[2].count();
  }
  friend bool operator==(const ClusterReport&, const ClusterReport&) = default;
};

/// A group and the network-wide indices of its two sensors.
struct IndexedGroup {
  std::uint32_t index_i = 0;
  std::uint32_t index_j = 0;
  GroupTranscript transcript;
};

// ---------------------------------------------------------------------------
// MMSD.

/// Partitions a cluster and emits its report. SS_high pairs and mismatched
/// SS_low pairs are dropped.
inline ClusterReport mmsd_aggregate(std::uint16_t cluster_id, std::span<const IndexedGroup> groups) {
  struct Entry {
    std::uint32_t index;
    std::uint8_t bit;
  };
  std::array<std::vector<Entry>, 3> sets;
  for (const auto& g : groups) {
    const auto& t = g.transcript;
    const auto di = t.d_i();
    const auto dj = t.d_j();
    if (di && dj) {
      if (!t.matched()) continue;
      sets[0].push_back({g.index_i, t.i.u});
      sets[0].push_back({g.index_j, t.j.u});
    } else if (di) {
      sets[1].push_back({g.index_i, t.i.u});
      sets[2].push_back({g.index_j, t.j.u});
    } else if (dj) {
      sets[1].push_back({g.index_j, t.j.u});
      sets[2].push_back({g.index_i, t.i.u});
    }
  }
  ClusterReport report;
  report.cluster_id = cluster_id;
  for (std::size_t k = 0; k < 3; ++k) {
    auto& entries = sets[k];
    std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.index < b.index; });
    auto& bits = report.packets[k].bits;
    bits.reserve(entries.size());
    for (const auto& e : entries) bits.push_back(e.bit);
  }
  return report;
}

/// Groups of `trial` split into `n_clusters` contiguous clusters; group g holds
/// sensors 2g and 2g + 1.
inline std::vector<std::vector<IndexedGroup>> partition(const sim::TrialRecord& trial, std::uint32_t n_clusters) {
  const std::size_t g_total = trial.groups.size();
  if (n_clusters == 0 || g_total % n_clusters != 0)
    throw std::invalid_argument("number of groups must be divisible by n_clusters");
  const std::size_t per = g_total / n_clusters;
  std::vector<std::vector<IndexedGroup>> out(n_clusters);
  for (std::size_t g = 0; g < g_total; ++g) {
    out[g / per].push_back({static_cast<std::uint32_t>(2 * g), static_cast<std::uint32_t>(2 * g + 1), trial.groups[g]});
  }
  return out;
}

inline std::vector<ClusterReport> aggregate_trial(const sim::TrialRecord& trial, std::uint32_t n_clusters) {
  if (n_clusters > 0x10000u) throw std::invalid_argument("cluster_id is 16 bits");
  std::vector<ClusterReport> reports;
  const auto clusters = partition(trial, n_clusters);
  reports.reserve(clusters.size());
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    reports.push_back(mmsd_aggregate(static_cast<std::uint16_t>(c), clusters[c]));
  }
  return reports;
}

/// Twelve-sensor illustration: sensors 1-4 in SS_low with matching pairs,
/// 5-8 in S_high_low and 9-12 in S_low_high. Groups are (1,2), (3,4) and
/// (k, k+4) for k = 5..8; decisions u_1..u_12 = 1100 1011 0110.
inline ClusterReport example_report(std::uint16_t cluster_id = 7) {
  static constexpr std::uint8_t u[13] = {0, 1, 1, 0, 0, 1, 0, 1, 1, 0, 1, 1, 0};
  auto sensor = [](std::uint8_t bit, std::uint8_t relayed) {
    SensorRecord s;
    s.v = s.u = s.w = bit;
    s.z = relayed;
    return s;
  };
  std::vector<IndexedGroup> groups;
  groups.push_back({1, 2, {sensor(u[1], u[2]), sensor(u[2], u[1])}});
  groups.push_back({3, 4, {sensor(u[3], u[4]), sensor(u[4], u[3])}});
  for (std::uint32_t k = 5; k <= 8; ++k) {
    // k relays its partner's bit wrongly (d_k = 0), the partner relays k's correctly.
    groups.push_back({k, k + 4, {sensor(u[k], static_cast<std::uint8_t>(1 - u[k + 4])), sensor(u[k + 4], u[k])}});
  }
  return mmsd_aggregate(cluster_id, groups);
}

// ---------------------------------------------------------------------------
// Codec.

class DecodeError : public std::runtime_error {
 public:
  DecodeError(std::optional<std::uint16_t> cluster_id, std::optional<std::size_t> packet_index,
               const std::string& what)
      : std::runtime_error(render(cluster_id, packet_index, what)), cluster_id_(cluster_id), packet_index_(packet_index) {}

  [[nodiscard]] std::optional<std::uint16_t> cluster_id() const { return cluster_id_; }
  [[nodiscard]] std::optional<std::size_t> packet_index() const { return packet_index_; }

 private:
  static std::string render(std::optional<std::uint16_t> c, std::optional<std::size_t> p, const std::string& what) {
    std::string s = "decode error";
    if (c) s += " in cluster " + std::to_string(*c);
    if (p) s += ", packet " + std::to_string(*p);
    return s + ": " + what;
  }

  std::optional<std::uint16_t> cluster_id_;
  std::optional<std::size_t> packet_index_;
};

inline std::vector<std::uint8_t> encode(const ClusterReport& report) {
  std::vector<std::uint8_t> out;
  out.push_back(static_cast<std::uint8_t>(report.cluster_id >> 8));
  out.push_back(static_cast<std::uint8_t>(report.cluster_id & 0xff));
  for (SetTag tag : kTags) {
    const auto& p = report.packet(tag);
    if (p.tag != tag) throw std::invalid_argument("packet stored under the wrong tag");
    if (p.count() > 0xffff) throw std::invalid_argument("packet count exceeds 16 bits");
    out.push_back(static_cast<std::uint8_t>(tag));
    out.push_back(static_cast<std::uint8_t>(p.count() >> 8));
    out.push_back(static_cast<std::uint8_t>(p.count() & 0xff));
    const std::size_t start = out.size();
    out.resize(start + (p.count() + 7) / 8, 0);
    for (std::size_t k = 0; k < p.count(); ++k) {
      if (p.bits[k] > 1) throw std::invalid_argument("decision bits must be 0 or 1");
      if (p.bits[k]) out[start + k / 8] |= static_cast<std::uint8_t>(0x80u >> (k % 8));
    }
  }
  return out;
}

inline ClusterReport decode(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kReportHeaderBytes) throw DecodeError(std::nullopt, std::nullopt, "truncated report header");
  ClusterReport report;
  report.cluster_id = static_cast<std::uint16_t>((bytes[0] << 8) | bytes[1]);
  const auto id = report.cluster_id;
  std::size_t pos = kReportHeaderBytes;
  for (std::size_t index = 0; index < 3; ++index) {
    if (bytes.size() - pos < kPacketHeaderBytes) throw DecodeError(id, index, "truncated packet header");
    const std::uint8_t tag_byte = bytes[pos];
    if (tag_byte & 0xfc) throw DecodeError(id, index, "reserved tag bits set");
    if (tag_byte == 0b11) throw DecodeError(id, index, "invalid set tag 11");
    if (tag_byte != index) throw DecodeError(id, index, "set tags out of order");
    const std::size_t count = static_cast<std::size_t>((bytes[pos + 1] << 8) | bytes[pos + 2]);
    pos += kPacketHeaderBytes;
    const std::size_t n_bytes = (count + 7) / 8;
    if (bytes.size() - pos < n_bytes) throw DecodeError(id, index, "payload shorter than count");
    Packet p;
    p.tag = static_cast<SetTag>(tag_byte);
    p.bits.resize(count);
    for (std::size_t k = 0; k < count; ++k) p.bits[k] = (bytes[pos + k / 8] >> (7 - k % 8)) & 1u;
    if (count % 8 != 0) {
      const std::uint8_t pad_mask = static_cast<std::uint8_t>(0xffu >> (count % 8));
      if (bytes[pos + n_bytes - 1] & pad_mask) throw DecodeError(id, index, "nonzero padding bits");
    }
    if (p.tag == SetTag::matched_low) {
      if (count % 2 != 0) throw DecodeError(id, index, "group-vote packet has an odd count");
      for (std::size_t k = 0; k < count; k += 2)
        if (p.bits[k] != p.bits[k + 1]) throw DecodeError(id, index, "group-vote pair bits differ");
    }
    pos += n_bytes;
    report.packet(p.tag) = std::move(p);
  }
  if (pos != bytes.size()) throw DecodeError(id, std::nullopt, "trailing bytes after last packet");
  return report;
}

/// Offset-prefixed hex lines, 16 bytes per line.
inline std::string hexdump(std::span<const std::uint8_t> bytes) {
  std::string out;
  char buf[24];
  for (std::size_t k = 0; k < bytes.size(); ++k) {
    if (k % 16 == 0) {
      if (k) out += '\n';
      std::snprintf(buf, sizeof buf, "%08zx ", k);
      out += buf;
    }
    std::snprintf(buf, sizeof buf, " %02x", bytes[k]);
    out += buf;
  }
  if (!bytes.empty()) out += '\n';
  return out;
}

inline std::string describe(const ClusterReport& report) {
  std::string out = "cluster " + std::to_string(report.cluster_id) + '\n';
  for (const auto& p : report.packets) {
    out += "  r=";
    out += (static_cast<unsigned>(p.tag) & 2u) ? '1' : '0';
    out += (static_cast<unsigned>(p.tag) & 1u) ? '1' : '0';
    out += " count=" + std::to_string(p.count()) + " bits=";
    for (auto b : p.bits) out += b ? '1' : '0';
    out += '\n';
  }
  return out;
}

/// FIFO of encoded reports between MMSDs and the FC.
class InProcessChannel {
 public:
  void send(std::vector<std::uint8_t> frame) {
    std::lock_guard lock(mutex_);
    frames_.push_back(std::move(frame));
  }

  std::optional<std::vector<std::uint8_t>> receive() {
    std::lock_guard lock(mutex_);
    if (frames_.empty()) return std::nullopt;
    auto f = std::move(frames_.front());
    frames_.pop_front();
    return f;
  }

  [[nodiscard]] std::size_t pending() const {
    std::lock_guard lock(mutex_);
    return frames_.size();
  }

 private:
  mutable std::mutex mutex_;
  std::deque<std::vector<std::uint8_t>> frames_;
};

// ---------------------------------------------------------------------------
// FC.

/// RAS component tally rebuilt from decoded reports.
inline sim::ComponentTally tally_reports(std::span<const ClusterReport> reports) {
  sim::ComponentTally t;
  for (const auto& r : reports) {
    const auto& votes = r.packet(SetTag::matched_low).bits;
    for (std::size_t k = 0; k < votes.size(); k += 2) {
      t.units[0] += 1;
      t.ones[0] += votes[k];
    }
    for (auto b : r.packet(SetTag::low_high).bits) {
      t.units[1] += 1;
      t.ones[1] += b;
    }
    for (auto b : r.packet(SetTag::high_low).bits) {
      t.units[2] += 1;
      t.ones[2] += b;
    }
  }
  return t;
}

inline sim::FusionOutcome fc_fuse(std::span<const ClusterReport> reports, const analytic::SchemePerformance& perf,
                                  ThresholdMode mode) {
  if (perf.scheme != analytic::Scheme::ras) throw std::invalid_argument("cluster reports carry RAS sets");
  return sim::fuse_tally(tally_reports(reports), perf, mode);
}

/// Decodes every frame, then fuses. DecodeError propagates with the offending
/// cluster and packet.
inline sim::FusionOutcome fc_decode_and_fuse(std::span<const std::vector<std::uint8_t>> frames,
                                             const analytic::SchemePerformance& perf, ThresholdMode mode) {
  std::vector<ClusterReport> reports;
  reports.reserve(frames.size());
  for (const auto& f : frames) reports.push_back(decode(f));
  return fc_fuse(reports, perf, mode);
}

// ---------------------------------------------------------------------------
// Overhead.

struct OverheadLedger {
  std::uint32_t n_sensors = 0;
  std::uint32_t n_clusters = 1;
  std::vector<std::uint64_t> cluster_payload_bits;  // summed over trials
  sim::CountMoments ras_bits;                       // per-trial payload bits
  sim::CountMoments ras_group_bits;                 // per-trial, one bit per group vote
  std::uint64_t max_ras_bits = 0;
  std::uint64_t header_bits_per_trial = 0;
  // Decision equivalence across partitions.
  std::uint64_t trials = 0;
  std::uint64_t single_vs_multi_mismatches = 0;  // 1 cluster vs n_clusters
  std::uint64_t fc_vs_sim_mismatches = 0;        // n_clusters vs direct RAS fusion
  std::uint64_t decode_failures = 0;

  [[nodiscard]] std::uint64_t tas_bits() const { return 2ull * n_sensors; }
};

struct OverheadOptions {
  std::uint64_t n_trials = 1000;
  unsigned threads = 0;
};

/// Replays trials through MMSD aggregation, the codec and FC fusion, and
/// tallies payload bits.
inline OverheadLedger measure_overhead(const NetworkConfig& config, const DetectionParams& det,
                                       const AttackParams& atk, const OverheadOptions& options) {
  if (options.n_trials < 1) throw std::invalid_argument("n_trials must be at least 1");
  const auto perf = analytic::scheme_performance(analytic::Scheme::ras, det, atk, config.n_sensors);

  constexpr std::uint64_t kBlock = 256;
  const std::uint64_t n_blocks = (options.n_trials + kBlock - 1) / kBlock;
  std::vector<OverheadLedger> parts(n_blocks);

  parallel_for(
      n_blocks,
      [&](std::size_t b) {
        auto& led = parts[b];
        led.cluster_payload_bits.assign(config.n_clusters, 0);
        const std::uint64_t end = std::min<std::uint64_t>(options.n_trials, (b + 1) * kBlock);
        for (std::uint64_t t = b * kBlock; t < end; ++t) {
          const auto trial = sim::run_trial(sim::trial_seed(config.seed, t), config, det, atk);
          const auto multi = aggregate_trial(trial, config.n_clusters);
          const auto single = aggregate_trial(trial, 1);

          std::vector<std::vector<std::uint8_t>> frames;
          frames.reserve(multi.size());
          std::uint64_t bits = 0, group_bits = 0;
          for (std::size_t c = 0; c < multi.size(); ++c) {
            frames.push_back(encode(multi[c]));
            led.cluster_payload_bits[c] += multi[c].payload_bits();
            bits += multi[c].payload_bits();
            group_bits += multi[c].group_payload_bits();
          }
          led.ras_bits.add(bits);
          led.ras_group_bits.add(group_bits);
          led.max_ras_bits = std::max(led.max_ras_bits, bits);

          std::optional<sim::FusionOutcome> fc;
          try {
            fc = fc_decode_and_fuse(frames, perf, config.threshold_mode);
          } catch (const DecodeError&) {
            led.decode_failures += 1;
          }
          const auto one = fc_fuse(single, perf, config.threshold_mode);
          const auto direct = sim::fuse(trial, perf, config.threshold_mode);
          led.trials += 1;
          if (!fc || fc->decision != one.decision || fc->statistic != one.statistic) led.single_vs_multi_mismatches += 1;
          if (!fc || fc->decision != direct.decision || fc->statistic != direct.statistic) led.fc_vs_sim_mismatches += 1;
        }
      },
      options.threads);

  OverheadLedger out;
  out.n_sensors = config.n_sensors;
  out.n_clusters = config.n_clusters;
  out.cluster_payload_bits.assign(config.n_clusters, 0);
  out.header_bits_per_trial =
      8ull * config.n_clusters * (kReportHeaderBytes + 3 * kPacketHeaderBytes);
  for (const auto& p : parts) {
    for (std::size_t c = 0; c < config.n_clusters; ++c) out.cluster_payload_bits[c] += p.cluster_payload_bits[c];
    out.ras_bits += p.ras_bits;
    out.ras_group_bits += p.ras_group_bits;
    out.max_ras_bits = std::max(out.max_ras_bits, p.max_ras_bits);
    out.trials += p.trials;
    out.single_vs_multi_mismatches += p.single_vs_multi_mismatches;
    out.fc_vs_sim_mismatches += p.fc_vs_sim_mismatches;
    out.decode_failures += p.decode_failures;
  }
  return out;
}

}  // namespace auditfuse::net
