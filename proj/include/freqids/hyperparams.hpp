#pragma once

#include <cstddef>
#include <vector>

#include "freqids/error.hpp"

namespace freqids {

/// Detector configuration. Defaults are the recommended values; phi has no
/// recommended value and is supplied per detection run.
struct HyperParams {
  std::size_t frame_length = 50;     // W_seg
  std::size_t window_length = 100;   // W_win, frames averaged per clustering sample
  double log_scale = 10.0;           // C
  std::size_t clusters = 10;         // K_C
  double weight_min = 10.0;          // W_min
  double weight_max = 1000.0;        // W_max
  double encoded_bound = 1e5;        // B

  std::size_t bins() const noexcept { return frame_length / 2 + 1; }

  void validate() const {
    if (frame_length == 0 || window_length == 0 || clusters == 0) {
      throw Error("hyperparameters: frame_length, window_length and clusters must be positive");
    }
    if (!(log_scale > 0.0) || !(weight_min > 0.0) || !(encoded_bound > 0.0)) {
      throw Error("hyperparameters: log_scale, weight_min and encoded_bound must be positive");
    }
    if (!(weight_min < weight_max)) {
      throw Error("hyperparameters: weight_min must be below weight_max");
    }
  }

  friend bool operator==(const HyperParams&, const HyperParams&) = default;
};

/// Weight vector w combining the M per-packet features of a packet.
struct EncodingVector {
  std::vector<double> weights;

  std::size_t size() const noexcept { return weights.size(); }

  bool within(double lo, double hi) const {
    for (double w : weights) {
      if (w < lo || w > hi) return false;
    }
    return true;
  }

  friend bool operator==(const EncodingVector&, const EncodingVector&) = default;
};

}  // namespace freqids
