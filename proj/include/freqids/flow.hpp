#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "freqids/error.hpp"
#include "freqids/matrix.hpp"

namespace freqids {

enum class KeyMode { SourceIP, FiveTuple };

/// Flow identity. In SourceIP mode only `source` is set; the optional fields
/// are present exactly when mode == FiveTuple.
struct FlowKey {
  KeyMode mode = KeyMode::SourceIP;
  std::string source;
  std::optional<std::string> dest;
  std::optional<std::uint16_t> source_port;
  std::optional<std::uint16_t> dest_port;
  std::optional<std::uint8_t> proto;

  static FlowKey source_only(std::string addr) { return FlowKey{KeyMode::SourceIP, std::move(addr), {}, {}, {}, {}}; }

  static FlowKey five_tuple(std::string src, std::string dst, std::uint16_t sport, std::uint16_t dport,
                            std::uint8_t proto) {
    return FlowKey{KeyMode::FiveTuple, std::move(src), std::move(dst), sport, dport, proto};
  }

  auto operator<=>(const FlowKey&) const = default;
  bool operator==(const FlowKey&) const = default;
};

/// Reduce a packet's full key to the grouping granularity. Keys that carry
/// no five-tuple detail (CSV traces) are left as they are.
inline FlowKey project(const FlowKey& key, KeyMode mode) {
  if (mode == KeyMode::SourceIP || key.mode == KeyMode::SourceIP) {
    return FlowKey::source_only(key.source);
  }
  return key;
}

inline std::string to_string(const FlowKey& key) {
  if (key.mode == KeyMode::SourceIP) return key.source;
  std::string out = key.source;
  if (key.source_port) out += ":" + std::to_string(*key.source_port);
  out += ">";
  out += key.dest.value_or("");
  if (key.dest_port) out += ":" + std::to_string(*key.dest_port);
  if (key.proto) out += "/" + std::to_string(*key.proto);
  return out;
}

struct PacketRecord {
  std::int64_t timestamp_us = 0;
  std::uint32_t length_bytes = 0;  // original wire length, <= 65535
  std::uint8_t proto_code = 0;     // IP protocol number, 0 for non-IP frames
  FlowKey flow_key;

  bool operator==(const PacketRecord&) const = default;
};

enum class Label { Benign, Malicious };

struct LabeledPacket {
  PacketRecord record;
  Label label = Label::Benign;

  bool operator==(const LabeledPacket&) const = default;
};

/// Completed flow segment handed downstream; immutable once emitted.
struct FlowSegment {
  FlowKey key;
  std::vector<PacketRecord> packets;
};

/// Per-flow packet buffers with a bound on the total number of buffered
/// packets. When the bound is exceeded the flow first seen earliest is
/// evicted as a completed segment.
class FlowTable {
 public:
  explicit FlowTable(KeyMode mode = KeyMode::SourceIP,
                     std::size_t watermark = std::numeric_limits<std::size_t>::max())
      : mode_(mode), watermark_(watermark) {}

  KeyMode mode() const noexcept { return mode_; }
  std::size_t watermark() const noexcept { return watermark_; }
  std::size_t total_packets() const noexcept { return total_; }
  std::size_t flow_count() const noexcept { return flows_.size(); }

  void insert(const PacketRecord& rec) {
    FlowKey key = project(rec.flow_key, mode_);
    auto it = flows_.find(key);
    if (it == flows_.end()) {
      it = flows_.emplace(key, Entry{{}, next_seq_}).first;
      age_.emplace(next_seq_++, key);
    }
    auto& packets = it->second.packets;
    // Keep timestamps non-decreasing; equal timestamps keep arrival order.
    auto pos = std::upper_bound(packets.begin(), packets.end(), rec.timestamp_us,
                                [](std::int64_t ts, const PacketRecord& p) { return ts < p.timestamp_us; });
    packets.insert(pos, rec);
    ++total_;
    while (total_ > watermark_ && !age_.empty()) {
      evict_oldest();
    }
  }

  /// Segments evicted by the watermark since the last call.
  std::vector<FlowSegment> drain_evicted() { return std::exchange(evicted_, {}); }

  /// Remove and return every buffered flow, in flow-key order.
  std::vector<FlowSegment> flush() {
    std::vector<FlowSegment> out;
    out.reserve(flows_.size());
    for (auto& [key, entry] : flows_) {
      out.push_back(FlowSegment{key, std::move(entry.packets)});
    }
    flows_.clear();
    age_.clear();
    total_ = 0;
    return out;
  }

  const std::vector<PacketRecord>* find(const FlowKey& key) const {
    auto it = flows_.find(key);
    return it == flows_.end() ? nullptr : &it->second.packets;
  }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (const auto& [key, entry] : flows_) fn(key, entry.packets);
  }

 private:
  struct Entry {
    std::vector<PacketRecord> packets;
    std::uint64_t seq;
  };

  void evict_oldest() {
    auto oldest = age_.begin();
    auto it = flows_.find(oldest->second);
    total_ -= it->second.packets.size();
    evicted_.push_back(FlowSegment{it->first, std::move(it->second.packets)});
    flows_.erase(it);
    age_.erase(oldest);
  }

  KeyMode mode_;
  std::size_t watermark_;
  std::size_t total_ = 0;
  std::uint64_t next_seq_ = 0;
  std::map<FlowKey, Entry> flows_;
  std::map<std::uint64_t, FlowKey> age_;
  std::vector<FlowSegment> evicted_;
};

inline FlowTable group_flows(std::span<const PacketRecord> records, KeyMode mode = KeyMode::SourceIP) {
  FlowTable table(mode);
  for (const auto& r : records) table.insert(r);
  return table;
}

inline constexpr std::size_t kPacketFeatureCount = 3;

/// Per-packet feature rows [proto_code, inter_arrival_us, length_bytes];
/// the first packet's inter-arrival is 0.
inline FeatureMatrix to_feature_rows(std::span<const PacketRecord> flow) {
  if (flow.empty()) throw EmptyFlow();
  FeatureMatrix s(flow.size(), kPacketFeatureCount);
  std::int64_t prev = flow.front().timestamp_us;
  for (std::size_t i = 0; i < flow.size(); ++i) {
    const auto& p = flow[i];
    s(i, 0) = static_cast<double>(p.proto_code);
    s(i, 1) = static_cast<double>(p.timestamp_us - prev);
    s(i, 2) = static_cast<double>(p.length_bytes);
    prev = p.timestamp_us;
  }
  return s;
}

inline std::int64_t flow_duration_us(std::span<const PacketRecord> flow) {
  if (flow.empty()) return 0;
  return flow.back().timestamp_us - flow.front().timestamp_us;
}

inline std::uint64_t flow_byte_count(std::span<const PacketRecord> flow) {
  std::uint64_t total = 0;
  for (const auto& p : flow) total += p.length_bytes;
  return total;
}

inline std::vector<PacketRecord> strip_labels(std::span<const LabeledPacket> trace) {
  std::vector<PacketRecord> out;
  out.reserve(trace.size());
  for (const auto& lp : trace) out.push_back(lp.record);
  return out;
}

}  // namespace freqids
