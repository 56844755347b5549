#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "freqids/error.hpp"

namespace freqids {

/// Row-major N x M matrix of per-packet features; row i holds packet i.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  FeatureMatrix(std::initializer_list<std::initializer_list<double>> rows) {
    for (const auto& r : rows) {
      append_row(std::span<const double>(r.begin(), r.size()));
    }
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<const double> data() const noexcept { return data_; }

  void append_row(std::span<const double> values) {
    if (rows_ == 0 && cols_ == 0) {
      cols_ = values.size();
    } else if (values.size() != cols_) {
      throw DimensionMismatch("row width", cols_, values.size());
    }
    data_.insert(data_.end(), values.begin(), values.end());
    ++rows_;
  }

  void reserve_rows(std::size_t n) { data_.reserve(n * cols_); }

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// K_f x N_f matrix R; column i is the spectrum of frame i. Stored
/// column-major so each frame's spectrum is contiguous.
class FrequencyFeatureMatrix {
 public:
  FrequencyFeatureMatrix() = default;
  FrequencyFeatureMatrix(std::size_t bins, std::size_t frames, std::size_t frame_length, double log_scale)
      : bins_(bins), frames_(frames), frame_length_(frame_length), log_scale_(log_scale),
        data_(bins * frames) {}

  std::size_t bins() const noexcept { return bins_; }      // K_f
  std::size_t frames() const noexcept { return frames_; }  // N_f
  std::size_t frame_length() const noexcept { return frame_length_; }
  double log_scale() const noexcept { return log_scale_; }
  bool empty() const noexcept { return frames_ == 0 || bins_ == 0; }

  double& at(std::size_t bin, std::size_t frame) { return data_[frame * bins_ + bin]; }
  double at(std::size_t bin, std::size_t frame) const { return data_[frame * bins_ + bin]; }

  std::span<double> column(std::size_t frame) { return {data_.data() + frame * bins_, bins_}; }
  std::span<const double> column(std::size_t frame) const { return {data_.data() + frame * bins_, bins_}; }

  std::span<const double> data() const noexcept { return data_; }

  friend bool operator==(const FrequencyFeatureMatrix&, const FrequencyFeatureMatrix&) = default;

 private:
  std::size_t bins_ = 0;
  std::size_t frames_ = 0;
  std::size_t frame_length_ = 0;
  double log_scale_ = 1.0;
  std::vector<double> data_;
};

}  // namespace freqids
