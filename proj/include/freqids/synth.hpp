#pragma once

// Seeded synthetic traces with per-packet ground truth: benign traffic with
// independent Gaussian lengths and inter-arrival times, SYN floods, low-rate
// burst DoS, constant-rate scans, and evasion mixes that inject benign-looking
// packets into an attack flow.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include "freqids/error.hpp"
#include "freqids/flow.hpp"

namespace freqids {

enum class TrafficKind { BenignGP, SynFlood, LowRateBurst, ConstantScan };

inline constexpr double kMinFrameLength = 40.0;
inline constexpr double kMaxFrameLength = 1514.0;

struct TrafficProfile {
  TrafficKind kind = TrafficKind::BenignGP;
  double rate_pps = 100.0;  // in-burst rate for LowRateBurst
  double length_mean = 600.0;
  double length_std = 300.0;    // BenignGP only
  double ipt_std_ratio = 0.5;   // BenignGP inter-arrival std / mean
  std::uint8_t proto_code = 6;
  double duration_s = 1.0;
  double burst_interval_s = 0.5;  // LowRateBurst
  std::size_t burst_len = 50;     // LowRateBurst
  std::int64_t start_us = 0;
  std::string source = "10.0.0.1";
  std::string dest = "10.1.0.1";
  std::uint16_t source_port = 40000;
  std::uint16_t dest_port = 443;

  Label label() const { return kind == TrafficKind::BenignGP ? Label::Benign : Label::Malicious; }

  void validate() const {
    if (!(rate_pps > 0.0)) throw InvalidProfile("rate_pps must be positive");
    if (!(duration_s > 0.0)) throw InvalidProfile("duration_s must be positive");
    if (length_std < 0.0 || ipt_std_ratio < 0.0) throw InvalidProfile("standard deviations must be non-negative");
    if (length_mean < 0.0 || length_mean > 65535.0) throw InvalidProfile("length_mean out of range");
    if (kind == TrafficKind::LowRateBurst && (!(burst_interval_s > 0.0) || burst_len == 0)) {
      throw InvalidProfile("burst interval and length must be positive");
    }
  }
};

namespace detail {

inline PacketRecord make_packet(const TrafficProfile& p, std::int64_t ts, double length, std::uint16_t sport,
                                std::uint16_t dport) {
  PacketRecord r;
  r.timestamp_us = ts;
  r.length_bytes = static_cast<std::uint32_t>(std::llround(std::clamp(length, 0.0, 65535.0)));
  r.proto_code = p.proto_code;
  r.flow_key = FlowKey::five_tuple(p.source, p.dest, sport, dport, p.proto_code);
  return r;
}

struct GaussianTraffic {
  const TrafficProfile& profile;
  std::normal_distribution<double> length;
  std::normal_distribution<double> gap;

  explicit GaussianTraffic(const TrafficProfile& p)
      : profile(p), length(p.length_mean, p.length_std), gap(1e6 / p.rate_pps, p.ipt_std_ratio * 1e6 / p.rate_pps) {}

  double next_length(std::mt19937_64& rng) { return std::clamp(std::round(length(rng)), kMinFrameLength, kMaxFrameLength); }
  std::int64_t next_gap(std::mt19937_64& rng) { return std::max<std::int64_t>(1, std::llround(gap(rng))); }
};

}  // namespace detail

inline std::vector<LabeledPacket> generate(const TrafficProfile& p, std::uint64_t seed) {
  p.validate();
  std::mt19937_64 rng(seed);
  std::vector<LabeledPacket> out;
  const Label label = p.label();
  const std::int64_t end = p.start_us + std::llround(p.duration_s * 1e6);
  const double spacing = 1e6 / p.rate_pps;

  switch (p.kind) {
    case TrafficKind::BenignGP: {
      detail::GaussianTraffic g(p);
      for (std::int64_t ts = p.start_us; ts < end; ts += g.next_gap(rng)) {
        out.push_back({detail::make_packet(p, ts, g.next_length(rng), p.source_port, p.dest_port), label});
      }
      break;
    }
    case TrafficKind::SynFlood: {
      const auto count = static_cast<std::size_t>(std::llround(p.rate_pps * p.duration_s));
      for (std::size_t i = 0; i < count; ++i) {
        const std::int64_t ts = p.start_us + std::llround(static_cast<double>(i) * spacing);
        const auto sport = static_cast<std::uint16_t>(1024 + (p.source_port + i) % 64511);
        out.push_back({detail::make_packet(p, ts, p.length_mean, sport, p.dest_port), label});
      }
      break;
    }
    case TrafficKind::LowRateBurst: {
      const auto bursts = static_cast<std::size_t>(std::floor(p.duration_s / p.burst_interval_s + 1e-9));
      for (std::size_t b = 0; b < bursts; ++b) {
        const std::int64_t burst_start = p.start_us + std::llround(static_cast<double>(b) * p.burst_interval_s * 1e6);
        for (std::size_t i = 0; i < p.burst_len; ++i) {
          const std::int64_t ts = burst_start + std::llround(static_cast<double>(i) * spacing);
          out.push_back({detail::make_packet(p, ts, p.length_mean, p.source_port, p.dest_port), label});
        }
      }
      break;
    }
    case TrafficKind::ConstantScan: {
      const auto count = static_cast<std::size_t>(std::llround(p.rate_pps * p.duration_s));
      for (std::size_t i = 0; i < count; ++i) {
        const std::int64_t ts = p.start_us + std::llround(static_cast<double>(i) * spacing);
        const auto dport = static_cast<std::uint16_t>(1 + (p.dest_port + i) % 65535);
        out.push_back({detail::make_packet(p, ts, p.length_mean, p.source_port, dport), label});
      }
      break;
    }
  }
  return out;
}

/// Malicious:benign packet-count ratio of an evasion mix, e.g. 1:4.
struct MixSpec {
  TrafficProfile malicious;
  TrafficProfile benign;
  std::size_t ratio_malicious = 1;
  std::size_t ratio_benign = 1;
};

/// Stable merge by timestamp; ties keep `a` before `b`.
inline std::vector<LabeledPacket> merge_by_time(const std::vector<LabeledPacket>& a, const std::vector<LabeledPacket>& b) {
  std::vector<LabeledPacket> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out),
             [](const LabeledPacket& x, const LabeledPacket& y) { return x.record.timestamp_us < y.record.timestamp_us; });
  return out;
}

/// Attack traffic with benign-looking packets injected under the attack's own
/// flow key. The benign packets follow the benign profile's length and
/// inter-arrival distributions from the attack's first timestamp until the
/// requested count is reached.
inline std::vector<LabeledPacket> mix(const MixSpec& spec, std::uint64_t seed) {
  if (spec.ratio_malicious == 0 || spec.ratio_benign == 0) {
    throw InvalidProfile("mix ratio components must be positive");
  }
  spec.benign.validate();
  auto attack = generate(spec.malicious, seed);
  if (attack.empty()) throw InvalidProfile("malicious profile produced no packets");
  const std::size_t noise_count = attack.size() * spec.ratio_benign / spec.ratio_malicious;

  TrafficProfile noise_profile = spec.benign;
  noise_profile.kind = TrafficKind::BenignGP;
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  detail::GaussianTraffic g(noise_profile);
  const FlowKey& key = attack.front().record.flow_key;
  std::vector<LabeledPacket> noise;
  noise.reserve(noise_count);
  std::int64_t ts = attack.front().record.timestamp_us;
  for (std::size_t i = 0; i < noise_count; ++i) {
    PacketRecord r;
    r.timestamp_us = ts;
    r.length_bytes = static_cast<std::uint32_t>(g.next_length(rng));
    r.proto_code = noise_profile.proto_code;
    r.flow_key = FlowKey::five_tuple(key.source, key.dest.value_or(spec.malicious.dest),
                                     spec.benign.source_port, spec.benign.dest_port, noise_profile.proto_code);
    noise.push_back({std::move(r), Label::Benign});
    ts += g.next_gap(rng);
  }
  return merge_by_time(attack, noise);
}

}  // namespace freqids
