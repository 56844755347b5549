#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "freqids/error.hpp"
#include "freqids/flow.hpp"
#include "freqids/hyperparams.hpp"
#include "freqids/matrix.hpp"

namespace freqids {

using Sample = std::vector<double>;

/// Average each run of `window` consecutive columns of R into one sample.
/// When R has fewer than `window` columns, all columns form a single sample.
inline std::vector<Sample> window_samples(const FrequencyFeatureMatrix& r, std::size_t window) {
  if (r.empty()) throw Error("window_samples: empty feature matrix");
  if (window == 0) throw Error("window_samples: window must be positive");
  std::size_t count = r.frames() / window;
  std::size_t width = window;
  if (count == 0) {
    count = 1;
    width = r.frames();
  }
  std::vector<Sample> out(count, Sample(r.bins(), 0.0));
  for (std::size_t s = 0; s < count; ++s) {
    for (std::size_t i = s * width; i < (s + 1) * width; ++i) {
      const auto col = r.column(i);
      for (std::size_t k = 0; k < col.size(); ++k) out[s][k] += col[k];
    }
    for (double& x : out[s]) x /= static_cast<double>(width);
  }
  return out;
}

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

inline double nearest_distance(std::span<const Sample> centers, std::span<const double> x) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : centers) best = std::min(best, squared_distance(c, x));
  return std::sqrt(best);
}

struct KMeansOptions {
  std::size_t max_iterations = 300;
  double tolerance = 1e-6;  // stop when no center moves farther than this
};

struct KMeansResult {
  std::vector<Sample> centers;
  std::vector<double> inertia_history;  // sum of squared nearest-center distances after each assignment
  std::size_t iterations = 0;
};

/// Lloyd's algorithm with k-means++ seeding. An emptied cluster is moved onto
/// the point farthest from its current center.
inline KMeansResult kmeans(std::span<const Sample> samples, std::size_t k, std::uint64_t seed,
                           const KMeansOptions& opts = {}) {
  if (k == 0) throw Error("kmeans: k must be positive");
  if (samples.size() < k) throw InsufficientSamples(samples.size(), k);
  const std::size_t n = samples.size();
  const std::size_t dim = samples.front().size();
  for (const auto& s : samples) {
    if (s.size() != dim) throw DimensionMismatch("sample dimension", dim, s.size());
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  KMeansResult res;
  std::vector<bool> chosen(n, false);
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());

  std::size_t first = static_cast<std::size_t>(unit(rng) * static_cast<double>(n));
  first = std::min(first, n - 1);
  res.centers.push_back(samples[first]);
  chosen[first] = true;
  while (res.centers.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(samples[i], res.centers.back()));
      total += d2[i];
    }
    std::size_t pick = n;
    if (total > 0.0) {
      double target = unit(rng) * total;
      for (std::size_t i = 0; i < n; ++i) {
        if (d2[i] <= 0.0) continue;
        pick = i;
        target -= d2[i];
        if (target < 0.0) break;
      }
    } else {
      // Remaining points coincide with existing centers.
      std::vector<std::size_t> free;
      for (std::size_t i = 0; i < n; ++i) {
        if (!chosen[i]) free.push_back(i);
      }
      pick = free[std::min(free.size() - 1, static_cast<std::size_t>(unit(rng) * static_cast<double>(free.size())))];
    }
    chosen[pick] = true;
    res.centers.push_back(samples[pick]);
  }

  std::vector<std::size_t> assign(n, 0);
  std::vector<double> dist(n, 0.0);
  for (std::size_t iter = 0; iter < opts.max_iterations; ++iter) {
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double d = squared_distance(samples[i], res.centers[c]);
        if (d < best) {
          best = d;
          assign[i] = c;
        }
      }
      dist[i] = best;
      inertia += best;
    }
    res.inertia_history.push_back(inertia);
    res.iterations = iter + 1;

    std::vector<Sample> next(k, Sample(dim, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      ++counts[assign[i]];
      for (std::size_t j = 0; j < dim; ++j) next[assign[i]][j] += samples[i][j];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        const auto far = static_cast<std::size_t>(std::max_element(dist.begin(), dist.end()) - dist.begin());
        next[c] = samples[far];
        dist[far] = 0.0;
        continue;
      }
      for (double& x : next[c]) x /= static_cast<double>(counts[c]);
    }
    double shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) shift = std::max(shift, std::sqrt(squared_distance(next[c], res.centers[c])));
    res.centers = std::move(next);
    if (shift < opts.tolerance) break;
  }
  return res;
}

struct ClusterModel {
  std::vector<Sample> centers;
  double train_loss = 0.0;
  HyperParams hp;
  EncodingVector encoding;
  std::uint64_t seed = 0;

  std::size_t dimension() const { return centers.empty() ? 0 : centers.front().size(); }
};

/// Mean nearest-center L2 distance of the training samples.
inline double mean_nearest_distance(std::span<const Sample> centers, std::span<const Sample> samples) {
  if (samples.empty()) return 0.0;
  double total = 0.0;
  for (const auto& s : samples) total += nearest_distance(centers, s);
  return total / static_cast<double>(samples.size());
}

inline ClusterModel train(std::span<const Sample> samples, const HyperParams& hp, const EncodingVector& encoding,
                          std::uint64_t seed) {
  auto km = kmeans(samples, hp.clusters, seed);
  ClusterModel model;
  model.train_loss = mean_nearest_distance(km.centers, samples);
  model.centers = std::move(km.centers);
  model.hp = hp;
  model.encoding = encoding;
  model.seed = seed;
  return model;
}

inline double score(const ClusterModel& model, std::span<const double> sample) {
  if (sample.size() != model.dimension()) throw DimensionMismatch("sample dimension", model.dimension(), sample.size());
  return nearest_distance(model.centers, sample);
}

inline constexpr double kZeroLossFloor = 1e-12;
inline constexpr double kZeroLossEpsilon = 1e-9;

/// phi * train_loss, with a floor of phi * 1e-9 for degenerate training sets.
inline double detection_threshold(const ClusterModel& model, double phi) {
  const double base = model.train_loss < kZeroLossFloor ? kZeroLossEpsilon : model.train_loss;
  return phi * base;
}

enum class Verdict { Benign, Malicious };

struct DetectionResult {
  FlowKey flow_key;
  std::vector<double> scores;
  Verdict verdict = Verdict::Benign;
  double threshold_used = 0.0;
  bool no_spectral_evidence = false;  // fewer packets than one frame

  double max_loss() const { return scores.empty() ? 0.0 : *std::max_element(scores.begin(), scores.end()); }
};

inline DetectionResult detect(const ClusterModel& model, const FrequencyFeatureMatrix& r, double phi,
                              FlowKey key = {}) {
  if (!(phi > 0.0)) throw Error("detect: phi must be positive");
  DetectionResult out;
  out.flow_key = std::move(key);
  out.threshold_used = detection_threshold(model, phi);
  if (r.frames() == 0) {
    out.no_spectral_evidence = true;
    return out;
  }
  if (r.bins() != model.dimension()) throw DimensionMismatch("spectral bins", model.dimension(), r.bins());
  for (const auto& s : window_samples(r, model.hp.window_length)) {
    const double loss = score(model, s);
    out.scores.push_back(loss);
    if (loss >= out.threshold_used) out.verdict = Verdict::Malicious;
  }
  return out;
}

}  // namespace freqids
