#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <unordered_map>
#include <vector>

namespace freqids {

/// Mixed-radix decimation-in-time FFT for any length. Prime radices are
/// evaluated directly, so lengths with large prime factors cost O(n*p).
/// A plan is immutable after construction; execute() is const and
/// reentrant given distinct output buffers.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n) : n_(n), twiddles_(n) {
    for (std::size_t k = 0; k < n; ++k) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
      twiddles_[k] = {std::cos(angle), std::sin(angle)};
    }
    std::size_t rest = n;
    for (std::size_t p : {4u, 2u, 3u, 5u}) {
      while (rest % p == 0 && rest > 1) {
        factors_.push_back(p);
        rest /= p;
      }
    }
    for (std::size_t p = 7; p * p <= rest; p += 2) {
      while (rest % p == 0) {
        factors_.push_back(p);
        rest /= p;
      }
    }
    if (rest > 1) factors_.push_back(rest);
  }

  std::size_t size() const noexcept { return n_; }

  /// out[k] = sum_n in[n] * exp(-2*pi*i*n*k/N); out must hold size() values.
  template <typename T>
  void execute(std::span<const T> in, std::span<std::complex<double>> out) const {
    if (n_ == 0) return;
    transform(in.data(), 1, out.data(), n_, 0);
  }

 private:
  template <typename T>
  void transform(const T* in, std::size_t stride, std::complex<double>* out, std::size_t n,
                 std::size_t level) const {
    if (n == 1) {
      out[0] = std::complex<double>(in[0]);
      return;
    }
    const std::size_t p = factors_[level];
    const std::size_t m = n / p;
    for (std::size_t q = 0; q < p; ++q) {
      transform(in + q * stride, stride * p, out + q * m, m, level + 1);
    }
    // Twiddle step of this stage is N/n in the full-length table.
    const std::size_t step = n_ / n;
    std::complex<double> scratch_small[8];
    std::vector<std::complex<double>> scratch_large;
    std::complex<double>* scratch = scratch_small;
    if (p > 8) {
      scratch_large.resize(p);
      scratch = scratch_large.data();
    }
    for (std::size_t k = 0; k < m; ++k) {
      for (std::size_t q = 0; q < p; ++q) {
        scratch[q] = out[q * m + k] * twiddles_[(q * k * step) % n_];
      }
      for (std::size_t s = 0; s < p; ++s) {
        std::complex<double> acc = scratch[0];
        // exp(-2*pi*i*q*s*m/n) == twiddles_[q*s*m*step mod N]
        const std::size_t base = (s * m * step) % n_;
        std::size_t idx = base;
        for (std::size_t q = 1; q < p; ++q) {
          acc += scratch[q] * twiddles_[idx];
          idx += base;
          if (idx >= n_) idx -= n_;
        }
        out[k + s * m] = acc;
      }
    }
  }

  std::size_t n_;
  std::vector<std::complex<double>> twiddles_;
  std::vector<std::size_t> factors_;
};

/// Per-thread cache of plans keyed by length.
inline const FftPlan& fft_plan(std::size_t n) {
  thread_local std::unordered_map<std::size_t, FftPlan> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, FftPlan(n)).first;
  return it->second;
}

}  // namespace freqids
