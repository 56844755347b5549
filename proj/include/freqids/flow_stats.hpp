#pragma once

// Flow-level statistics baseline: 17 aggregate statistics per flow, min-max
// scaled with training extrema and clustered with the same k-means detector.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "freqids/cluster_detect.hpp"
#include "freqids/error.hpp"
#include "freqids/flow.hpp"
#include "freqids/matrix.hpp"

namespace freqids {

inline constexpr std::size_t kFlowStatCount = 17;

/// Per feature column (proto, inter-arrival, length): max, min, variance,
/// mean, range; then duration_us and byte count.
using FlowStatVector = std::array<double, kFlowStatCount>;

inline FlowStatVector flow_stats(const FeatureMatrix& s, double duration_us, double byte_count) {
  if (s.empty()) throw EmptyFlow();
  if (s.cols() != kPacketFeatureCount) throw DimensionMismatch("feature columns", kPacketFeatureCount, s.cols());
  FlowStatVector out{};
  const double n = static_cast<double>(s.rows());
  for (std::size_t c = 0; c < kPacketFeatureCount; ++c) {
    double lo = s(0, c), hi = s(0, c), sum = 0.0;
    for (std::size_t r = 0; r < s.rows(); ++r) {
      lo = std::min(lo, s(r, c));
      hi = std::max(hi, s(r, c));
      sum += s(r, c);
    }
    const double mean = sum / n;
    double var = 0.0;
    for (std::size_t r = 0; r < s.rows(); ++r) var += (s(r, c) - mean) * (s(r, c) - mean);
    var /= n;
    out[c * 5 + 0] = hi;
    out[c * 5 + 1] = lo;
    out[c * 5 + 2] = var;
    out[c * 5 + 3] = std::clamp(mean, lo, hi);
    out[c * 5 + 4] = hi - lo;
  }
  out[15] = duration_us;
  out[16] = byte_count;
  return out;
}

inline FlowStatVector flow_stats(std::span<const PacketRecord> flow) {
  return flow_stats(to_feature_rows(flow), static_cast<double>(flow_duration_us(flow)),
                    static_cast<double>(flow_byte_count(flow)));
}

/// Column-wise min-max scaler fitted on training vectors; values outside the
/// training range clamp to [0, 1] and constant columns map to 0.
class MinMaxScaler {
 public:
  MinMaxScaler() = default;
  MinMaxScaler(std::vector<double> lo, std::vector<double> hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (lo_.size() != hi_.size()) throw DimensionMismatch("scaler extrema", lo_.size(), hi_.size());
  }

  template <typename Vec>
  static MinMaxScaler fit(std::span<const Vec> rows) {
    if (rows.empty()) throw Error("scaler: need at least one training vector");
    const std::size_t dim = rows.front().size();
    std::vector<double> lo(rows.front().begin(), rows.front().end());
    std::vector<double> hi = lo;
    for (const auto& r : rows) {
      if (r.size() != dim) throw DimensionMismatch("scaler input", dim, r.size());
      for (std::size_t j = 0; j < dim; ++j) {
        lo[j] = std::min(lo[j], r[j]);
        hi[j] = std::max(hi[j], r[j]);
      }
    }
    return MinMaxScaler(std::move(lo), std::move(hi));
  }

  std::size_t dimension() const { return lo_.size(); }
  const std::vector<double>& lo() const { return lo_; }
  const std::vector<double>& hi() const { return hi_; }

  template <typename Vec>
  Sample transform(const Vec& x) const {
    if (x.size() != lo_.size()) throw DimensionMismatch("scaler input", lo_.size(), x.size());
    Sample out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double range = hi_[j] - lo_[j];
      out[j] = range > 0.0 ? std::clamp((x[j] - lo_[j]) / range, 0.0, 1.0) : 0.0;
    }
    return out;
  }

 private:
  std::vector<double> lo_, hi_;
};

struct NormalizedStats {
  std::vector<Sample> vectors;
  MinMaxScaler scaler;
};

inline NormalizedStats normalize_stats(std::span<const FlowStatVector> training) {
  NormalizedStats out;
  out.scaler = MinMaxScaler::fit(training);
  out.vectors.reserve(training.size());
  for (const auto& v : training) out.vectors.push_back(out.scaler.transform(v));
  return out;
}

}  // namespace freqids
