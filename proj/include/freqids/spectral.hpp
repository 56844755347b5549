#pragma once

// Frequency-domain feature extraction: per-packet features are encoded to one
// real per packet, cut into non-overlapping frames, transformed with a DFT,
// reduced to the squared modulus of the first floor(W/2)+1 bins, and
// log-scaled.

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "freqids/error.hpp"
#include "freqids/fft.hpp"
#include "freqids/hyperparams.hpp"
#include "freqids/matrix.hpp"

namespace freqids {

/// v_i = sum_k s_ik * w_k
inline std::vector<double> encode(const FeatureMatrix& s, const EncodingVector& w) {
  if (s.cols() != w.size()) throw DimensionMismatch("encoding vector length", s.cols(), w.size());
  std::vector<double> v(s.rows(), 0.0);
  for (std::size_t i = 0; i < s.rows(); ++i) {
    const auto row = s.row(i);
    double acc = 0.0;
    for (std::size_t k = 0; k < row.size(); ++k) acc += row[k] * w.weights[k];
    v[i] = acc;
  }
  return v;
}

inline std::size_t frame_count(std::size_t n, std::size_t frame_length) {
  return frame_length == 0 ? 0 : n / frame_length;
}

/// Non-overlapping frames of `frame_length` values viewing into `v`. The
/// trailing remainder shorter than a frame is dropped.
inline std::vector<std::span<const double>> frame(std::span<const double> v, std::size_t frame_length) {
  std::vector<std::span<const double>> frames;
  const std::size_t count = frame_count(v.size(), frame_length);
  frames.reserve(count);
  for (std::size_t i = 0; i < count; ++i) frames.push_back(v.subspan(i * frame_length, frame_length));
  return frames;
}

inline std::vector<std::complex<double>> dft_frame(std::span<const double> f) {
  std::vector<std::complex<double>> out(f.size());
  fft_plan(f.size()).execute(f, std::span<std::complex<double>>(out));
  return out;
}

/// Squared modulus a^2 + b^2 of the first floor(W/2)+1 components.
inline std::vector<double> modulus_half(std::span<const std::complex<double>> spectrum) {
  const std::size_t kf = spectrum.size() / 2 + 1;
  std::vector<double> p(kf);
  for (std::size_t k = 0; k < kf && k < spectrum.size(); ++k) p[k] = std::norm(spectrum[k]);
  return p;
}

inline std::vector<double> log_transform(std::span<const double> power, double log_scale) {
  std::vector<double> r(power.size());
  for (std::size_t k = 0; k < power.size(); ++k) r[k] = std::log1p(power[k]) / log_scale;
  return r;
}

/// Full extraction S -> R with shape (floor(W_seg/2)+1) x floor(N/W_seg).
inline FrequencyFeatureMatrix extract(const FeatureMatrix& s, const EncodingVector& w, const HyperParams& hp) {
  const auto v = encode(s, w);
  const std::size_t len = hp.frame_length;
  const std::size_t frames = frame_count(v.size(), len);
  FrequencyFeatureMatrix r(hp.bins(), frames, len, hp.log_scale);
  const FftPlan& plan = fft_plan(len);
  std::vector<std::complex<double>> spectrum(len);
  for (std::size_t i = 0; i < frames; ++i) {
    plan.execute(std::span<const double>(v.data() + i * len, len), std::span<std::complex<double>>(spectrum));
    auto col = r.column(i);
    for (std::size_t k = 0; k < col.size(); ++k) col[k] = std::log1p(std::norm(spectrum[k])) / hp.log_scale;
  }
  return r;
}

/// size(R) / size(S) = K_f * N_f / (M * N)
inline double compression_ratio(const HyperParams& hp, std::size_t n, std::size_t m) {
  if (n == 0 || m == 0) throw Error("compression_ratio: empty feature matrix");
  const double kf = static_cast<double>(hp.bins());
  const double nf = static_cast<double>(frame_count(n, hp.frame_length));
  return kf * nf / (static_cast<double>(m) * static_cast<double>(n));
}

}  // namespace freqids
