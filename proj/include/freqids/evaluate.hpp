#pragma once

// Per-flow training and scoring for the spectral detector and the
// flow-statistics baseline, shared by the command-line tool and the tests.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "freqids/cluster_detect.hpp"
#include "freqids/encoding_select.hpp"
#include "freqids/flow.hpp"
#include "freqids/flow_stats.hpp"
#include "freqids/metrics.hpp"
#include "freqids/spectral.hpp"

namespace freqids {

struct LabeledFlow {
  FlowKey key;
  std::vector<PacketRecord> packets;  // timestamp order
  Label label = Label::Benign;        // Malicious if any packet is
};

/// Group a labeled trace into flows, in flow-key order.
inline std::vector<LabeledFlow> labeled_flows(std::span<const LabeledPacket> trace, KeyMode mode = KeyMode::SourceIP) {
  std::map<FlowKey, LabeledFlow> by_key;
  for (const auto& lp : trace) {
    FlowKey key = project(lp.record.flow_key, mode);
    auto& f = by_key[key];
    f.key = key;
    f.packets.push_back(lp.record);
    if (lp.label == Label::Malicious) f.label = Label::Malicious;
  }
  std::vector<LabeledFlow> out;
  out.reserve(by_key.size());
  for (auto& [key, f] : by_key) {
    std::stable_sort(f.packets.begin(), f.packets.end(),
                     [](const PacketRecord& a, const PacketRecord& b) { return a.timestamp_us < b.timestamp_us; });
    out.push_back(std::move(f));
  }
  return out;
}

/// Clustering samples from every flow long enough to fill one frame.
inline std::vector<Sample> spectral_samples(std::span<const LabeledFlow> flows, const EncodingVector& w,
                                            const HyperParams& hp) {
  std::vector<Sample> out;
  for (const auto& f : flows) {
    if (f.packets.size() < hp.frame_length) continue;
    const auto r = extract(to_feature_rows(f.packets), w, hp);
    for (auto& s : window_samples(r, hp.window_length)) out.push_back(std::move(s));
  }
  return out;
}

inline ClusterModel train_spectral(std::span<const LabeledFlow> benign, const EncodingVector& w, const HyperParams& hp,
                                   std::uint64_t seed) {
  hp.validate();
  const auto samples = spectral_samples(benign, w, hp);
  return train(samples, hp, w, seed);
}

/// Per-flow maximum window loss; flows shorter than one frame score 0.
inline double spectral_flow_score(const ClusterModel& model, std::span<const PacketRecord> flow) {
  if (flow.size() < model.hp.frame_length) return 0.0;
  const auto r = extract(to_feature_rows(flow), model.encoding, model.hp);
  return detect(model, r, 1.0).max_loss();
}

struct FlowStatsModel {
  ClusterModel cluster;
  MinMaxScaler scaler;
};

inline std::vector<FlowStatVector> flow_stat_vectors(std::span<const LabeledFlow> flows) {
  std::vector<FlowStatVector> out;
  out.reserve(flows.size());
  for (const auto& f : flows) out.push_back(flow_stats(f.packets));
  return out;
}

inline FlowStatsModel train_flow_stats(std::span<const LabeledFlow> benign, const HyperParams& hp, std::uint64_t seed) {
  const auto stats = flow_stat_vectors(benign);
  auto norm = normalize_stats(stats);
  FlowStatsModel m;
  m.cluster = train(norm.vectors, hp, EncodingVector{}, seed);
  m.scaler = std::move(norm.scaler);
  return m;
}

inline double flow_stats_score(const FlowStatsModel& model, std::span<const PacketRecord> flow) {
  return score(model.cluster, model.scaler.transform(flow_stats(flow)));
}

template <typename ScoreFn>
LabeledScores score_flows(std::span<const LabeledFlow> flows, ScoreFn&& fn) {
  LabeledScores out;
  for (const auto& f : flows) out.add(fn(f.packets), f.label);
  return out;
}

/// Selection problem over the first `fraction` of the trace's packets, with
/// feature rows of each flow computed within that prefix.
inline SelectionProblem selection_problem(std::span<const PacketRecord> trace, const HyperParams& hp,
                                          ConstraintMode mode, double fraction = 0.2, KeyMode key_mode = KeyMode::SourceIP,
                                          std::uint64_t seed = 0) {
  const auto take = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(trace.size())));
  if (take == 0) throw Error("empty training trace");
  auto table = group_flows(trace.first(std::min(take, trace.size())), key_mode);
  FeatureMatrix all(0, kPacketFeatureCount);
  for (const auto& seg : table.flush()) {
    const auto rows = to_feature_rows(seg.packets);
    for (std::size_t i = 0; i < rows.rows(); ++i) all.append_row(rows.row(i));
  }
  SelectionProblem p;
  p.normalized = normalize_features(all);
  p.weight_min = hp.weight_min;
  p.weight_max = hp.weight_max;
  p.budget = hp.encoded_bound;
  p.mode = mode;
  p.seed = seed;
  return p;
}

/// `count` log-spaced values from lo to hi inclusive.
inline std::vector<double> phi_sweep(double lo = 0.1, double hi = 100.0, std::size_t count = 64) {
  return log_grid(lo, hi, count);
}

}  // namespace freqids
