#pragma once

// Three-stage streaming detector: ingest (flow grouping) -> spectral
// extraction -> scoring, one thread per stage joined by bounded queues.
// Results are returned in flow-key order whatever the thread interleaving.

#include <algorithm>
#include <condition_variable>
#include <cstddef>
#include <deque>
#include <exception>
#include <mutex>
#include <optional>
#include <span>
#include <thread>
#include <utility>
#include <vector>

#include "freqids/cluster_detect.hpp"
#include "freqids/flow.hpp"
#include "freqids/spectral.hpp"

namespace freqids {

/// Blocking FIFO with a fixed capacity. push() waits while full, pop() waits
/// while empty; after close() pop() drains what is left, then returns nullopt.
template <typename T>
class BoundedQueue {
 public:
  explicit BoundedQueue(std::size_t capacity) : capacity_(std::max<std::size_t>(capacity, 1)) {}

  BoundedQueue(const BoundedQueue&) = delete;
  BoundedQueue& operator=(const BoundedQueue&) = delete;

  /// Returns false if the queue was closed before the item could be queued.
  bool push(T item) {
    std::unique_lock lock(mu_);
    not_full_.wait(lock, [&] { return items_.size() < capacity_ || closed_; });
    if (closed_) return false;
    items_.push_back(std::move(item));
    not_empty_.notify_one();
    return true;
  }

  std::optional<T> pop() {
    std::unique_lock lock(mu_);
    not_empty_.wait(lock, [&] { return !items_.empty() || closed_; });
    if (items_.empty()) return std::nullopt;
    T item = std::move(items_.front());
    items_.pop_front();
    not_full_.notify_one();
    return item;
  }

  void close() {
    std::lock_guard lock(mu_);
    closed_ = true;
    not_empty_.notify_all();
    not_full_.notify_all();
  }

  std::size_t capacity() const noexcept { return capacity_; }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return items_.size();
  }

 private:
  const std::size_t capacity_;
  mutable std::mutex mu_;
  std::condition_variable not_empty_, not_full_;
  std::deque<T> items_;
  bool closed_ = false;
};

struct PipelineOptions {
  KeyMode key_mode = KeyMode::SourceIP;
  std::size_t watermark = 1u << 22;  // buffered packets before the oldest flow is cut
  std::size_t queue_capacity = 64;
};

struct SegmentVerdict {
  std::size_t segment = 0;  // position of this segment within its flow
  std::size_t packets = 0;
  DetectionResult detection;
};

inline std::vector<SegmentVerdict> run_pipeline(std::span<const PacketRecord> records, const ClusterModel& model,
                                                double phi, const PipelineOptions& opts = {}) {
  struct Extracted {
    FlowSegment segment;
    FrequencyFeatureMatrix r;
  };
  BoundedQueue<FlowSegment> segments(opts.queue_capacity);
  BoundedQueue<Extracted> features(opts.queue_capacity);
  std::vector<SegmentVerdict> results;

  std::mutex error_mu;
  std::exception_ptr error;
  auto fail = [&](std::exception_ptr e) {
    std::lock_guard lock(error_mu);
    if (!error) error = e;
    segments.close();
    features.close();
  };

  std::thread ingest([&] {
    try {
      FlowTable table(opts.key_mode, opts.watermark);
      for (const auto& rec : records) {
        table.insert(rec);
        for (auto& seg : table.drain_evicted()) {
          if (!segments.push(std::move(seg))) return;
        }
      }
      for (auto& seg : table.flush()) {
        if (!segments.push(std::move(seg))) return;
      }
      segments.close();
    } catch (...) {
      fail(std::current_exception());
    }
  });

  std::thread extractor([&] {
    try {
      while (auto seg = segments.pop()) {
        auto r = extract(to_feature_rows(seg->packets), model.encoding, model.hp);
        if (!features.push(Extracted{std::move(*seg), std::move(r)})) return;
      }
      features.close();
    } catch (...) {
      fail(std::current_exception());
    }
  });

  std::thread scorer([&] {
    try {
      while (auto item = features.pop()) {
        SegmentVerdict v;
        v.packets = item->segment.packets.size();
        v.detection = detect(model, item->r, phi, std::move(item->segment.key));
        results.push_back(std::move(v));
      }
    } catch (...) {
      fail(std::current_exception());
    }
  });

  ingest.join();
  extractor.join();
  scorer.join();
  if (error) std::rethrow_exception(error);

  // Segments of one flow arrive in emission order; a stable sort by key keeps it.
  std::stable_sort(results.begin(), results.end(), [](const SegmentVerdict& a, const SegmentVerdict& b) {
    return a.detection.flow_key < b.detection.flow_key;
  });
  for (std::size_t i = 0; i < results.size(); ++i) {
    results[i].segment = (i > 0 && results[i - 1].detection.flow_key == results[i].detection.flow_key)
                             ? results[i - 1].segment + 1
                             : 0;
  }
  return results;
}

}  // namespace freqids
