#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "freqids/colormap.hpp"
#include "freqids/error.hpp"
#include "freqids/matrix.hpp"

namespace freqids {

struct RgbImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<Rgb> pixels;  // row-major

  const Rgb& at(std::size_t row, std::size_t col) const { return pixels[row * width + col]; }
};

/// Colormap index of every entry after min-max normalisation over the whole
/// matrix. A constant matrix maps to index 0.
inline std::size_t colormap_index(double value, double lo, double hi) {
  if (!(hi > lo)) return 0;
  const double t = std::clamp((value - lo) / (hi - lo), 0.0, 1.0);
  return static_cast<std::size_t>(t * 255.0 + 0.5);
}

/// One pixel per entry: width = frames, height = bins, top row = bin 0.
inline RgbImage render_spectrogram(const FrequencyFeatureMatrix& r) {
  if (r.empty()) throw Error("spectrogram: empty feature matrix");
  const auto data = r.data();
  const auto [lo_it, hi_it] = std::minmax_element(data.begin(), data.end());
  const double lo = *lo_it, hi = *hi_it;
  RgbImage img{r.frames(), r.bins(), {}};
  img.pixels.reserve(img.width * img.height);
  for (std::size_t k = 0; k < r.bins(); ++k) {
    for (std::size_t i = 0; i < r.frames(); ++i) {
      img.pixels.push_back(kViridis[colormap_index(r.at(k, i), lo, hi)]);
    }
  }
  return img;
}

inline void write_ppm(std::ostream& out, const RgbImage& img) {
  out << "P6\n" << img.width << ' ' << img.height << "\n255\n";
  for (const auto& px : img.pixels) {
    const char rgb[3] = {static_cast<char>(px.r), static_cast<char>(px.g), static_cast<char>(px.b)};
    out.write(rgb, 3);
  }
}

inline void spectrogram_export(const FrequencyFeatureMatrix& r, const std::string& path) {
  auto img = render_spectrogram(r);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  write_ppm(out, img);
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace freqids
