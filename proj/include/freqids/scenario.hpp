#pragma once

// Labeled multi-flow datasets: a population of benign flows with per-flow
// randomized parameters plus attack flows, each from its own source address,
// optionally mixed with benign-looking noise at a fixed packet ratio.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "freqids/synth.hpp"

namespace freqids {

struct ScenarioSpec {
  std::size_t benign_flows = 60;
  std::size_t attack_flows = 0;
  TrafficKind attack = TrafficKind::SynFlood;
  double burst_interval_s = 0.5;  // LowRateBurst attacks
  std::size_t ratio_malicious = 1;
  std::size_t ratio_benign = 0;  // 0 = no noise injection
  std::uint64_t seed = 1;
};

inline std::string scenario_address(int block, std::size_t index) {
  return std::to_string(block) + "." + std::to_string(16 + index / 65536 % 200) + "." +
         std::to_string(index / 256 % 256) + "." + std::to_string(index % 256);
}

/// Benign flow parameters drawn per flow so that no single rate, length or
/// duration characterizes benign traffic.
inline TrafficProfile random_benign_profile(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  TrafficProfile p;
  p.kind = TrafficKind::BenignGP;
  p.rate_pps = 20.0 * std::pow(10.0, u(rng));  // 20..200 pps
  p.length_mean = 200.0 + 1000.0 * u(rng);
  p.length_std = 50.0 + 350.0 * u(rng);
  p.ipt_std_ratio = 0.3 + 0.7 * u(rng);
  p.proto_code = u(rng) < 0.8 ? 6 : 17;
  p.duration_s = 10.0 * std::pow(90.0, u(rng));  // 10..900 s
  p.dest_port = p.proto_code == 6 ? 443 : 53;
  return p;
}

inline TrafficProfile random_attack_profile(TrafficKind kind, double burst_interval_s, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  TrafficProfile p;
  p.kind = kind;
  switch (kind) {
    case TrafficKind::SynFlood:
      p.rate_pps = 500.0 + 1500.0 * u(rng);
      p.length_mean = 60.0;
      p.proto_code = 6;
      p.duration_s = 20.0 + 40.0 * u(rng);
      p.dest_port = 80;
      break;
    case TrafficKind::LowRateBurst:
      p.rate_pps = 1000.0 + 4000.0 * u(rng);
      p.length_mean = 1000.0 + 400.0 * u(rng);
      p.proto_code = 17;
      p.burst_interval_s = burst_interval_s;
      p.burst_len = 50;
      p.duration_s = 60.0 + 60.0 * u(rng);
      p.dest_port = 5001;
      break;
    case TrafficKind::ConstantScan:
      p.rate_pps = 100.0 + 900.0 * u(rng);
      p.length_mean = 54.0;
      p.proto_code = 6;
      p.duration_s = 5.0 + 5.0 * u(rng);
      p.dest_port = 1;
      break;
    case TrafficKind::BenignGP:
      return random_benign_profile(rng);
  }
  return p;
}

/// Flows start at staggered offsets and are merged into one time-ordered trace.
inline std::vector<LabeledPacket> build_scenario(const ScenarioSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> offset_s(0.0, 60.0);
  std::vector<LabeledPacket> trace;
  std::uint64_t flow_seed = spec.seed * 1000003ULL;

  for (std::size_t i = 0; i < spec.benign_flows; ++i) {
    TrafficProfile p = random_benign_profile(rng);
    p.source = scenario_address(10, i);
    p.start_us = std::llround(offset_s(rng) * 1e6);
    auto flow = generate(p, ++flow_seed);
    trace.insert(trace.end(), flow.begin(), flow.end());
  }
  for (std::size_t i = 0; i < spec.attack_flows; ++i) {
    TrafficProfile p = random_attack_profile(spec.attack, spec.burst_interval_s, rng);
    TrafficProfile noise = random_benign_profile(rng);
    p.source = scenario_address(172, i);
    p.start_us = std::llround(offset_s(rng) * 1e6);
    auto flow = spec.ratio_benign == 0 ? generate(p, ++flow_seed)
                                       : mix(MixSpec{p, noise, spec.ratio_malicious, spec.ratio_benign}, ++flow_seed);
    trace.insert(trace.end(), flow.begin(), flow.end());
  }
  // Each flow is already time-ordered; a stable sort keeps that order on ties.
  std::stable_sort(trace.begin(), trace.end(), [](const LabeledPacket& a, const LabeledPacket& b) {
    return a.record.timestamp_us < b.record.timestamp_us;
  });
  return trace;
}

}  // namespace freqids
