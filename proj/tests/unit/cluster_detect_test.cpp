#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "freqids/cluster_detect.hpp"

using namespace freqids;

namespace {

FrequencyFeatureMatrix matrix_with_columns(std::size_t bins, std::size_t frames, auto value) {
  FrequencyFeatureMatrix r(bins, frames, 50, 10.0);
  for (std::size_t i = 0; i < frames; ++i) {
    for (std::size_t k = 0; k < bins; ++k) r.at(k, i) = value(k, i);
  }
  return r;
}

ClusterModel model_with(std::vector<Sample> centers, double train_loss) {
  ClusterModel m;
  m.centers = std::move(centers);
  m.train_loss = train_loss;
  m.hp.window_length = 1;
  return m;
}

std::vector<Sample> random_samples(std::size_t n, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<Sample> out(n, Sample(dim));
  for (std::size_t i = 0; i < n; ++i) {
    for (double& v : out[i]) v = z(rng) + 5.0 * static_cast<double>(i % 4);
  }
  return out;
}

}  // namespace

TEST(WindowSamples, FewerFramesThanWindowAveragesAll) {
  const auto r = matrix_with_columns(3, 50, [](std::size_t k, std::size_t i) { return double(k + i); });
  const auto s = window_samples(r, 100);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_DOUBLE_EQ(s[0][0], 24.5);
  EXPECT_DOUBLE_EQ(s[0][2], 26.5);
}

TEST(WindowSamples, WholeWindowsOnly) {
  const auto r = matrix_with_columns(2, 250, [](std::size_t, std::size_t i) { return double(i); });
  const auto s = window_samples(r, 100);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_DOUBLE_EQ(s[0][0], 49.5);
  EXPECT_DOUBLE_EQ(s[1][0], 149.5);
}

TEST(WindowSamples, IdenticalColumnsGiveThatColumn) {
  const auto r = matrix_with_columns(4, 200, [](std::size_t k, std::size_t) { return 0.25 * double(k); });
  for (const auto& s : window_samples(r, 100)) EXPECT_EQ(s, (Sample{0.0, 0.25, 0.5, 0.75}));
}

TEST(KMeans, FourPointOptimum) {
  HyperParams hp;
  hp.clusters = 2;
  const std::vector<Sample> pts{{0, 0}, {0, 1}, {10, 10}, {10, 11}};
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    auto m = train(pts, hp, EncodingVector{}, seed);
    std::sort(m.centers.begin(), m.centers.end());
    EXPECT_EQ(m.centers, (std::vector<Sample>{{0, 0.5}, {10, 10.5}}));
    EXPECT_DOUBLE_EQ(m.train_loss, 0.5);
  }
}

TEST(KMeans, IdenticalSamplesGiveZeroLoss) {
  HyperParams hp;
  hp.clusters = 1;
  const std::vector<Sample> pts(5, Sample{1, 2, 3});
  const auto m = train(pts, hp, EncodingVector{}, 1);
  EXPECT_EQ(m.centers, std::vector<Sample>{(Sample{1, 2, 3})});
  EXPECT_EQ(m.train_loss, 0.0);
}

TEST(KMeans, OneCenterPerSample) {
  HyperParams hp;
  hp.clusters = 6;
  const auto pts = random_samples(6, 3, 8);
  const auto m = train(pts, hp, EncodingVector{}, 2);
  EXPECT_EQ(m.centers.size(), 6u);
  EXPECT_NEAR(m.train_loss, 0.0, 1e-12);
}

TEST(KMeans, SeededRetrainingIsBitIdentical) {
  HyperParams hp;
  const auto pts = random_samples(300, 26, 9);
  const auto a = train(pts, hp, EncodingVector{{1, 2, 3}}, 77);
  const auto b = train(pts, hp, EncodingVector{{1, 2, 3}}, 77);
  EXPECT_EQ(a.centers, b.centers);
  EXPECT_EQ(a.train_loss, b.train_loss);
  EXPECT_EQ(a.centers.size(), 10u);
  EXPECT_EQ(a.dimension(), 26u);
}

TEST(KMeans, TrainLossIsMeanNearestDistance) {
  HyperParams hp;
  hp.clusters = 4;
  const auto pts = random_samples(120, 5, 10);
  const auto m = train(pts, hp, EncodingVector{}, 3);
  double total = 0.0;
  for (const auto& p : pts) {
    double best = 1e300;
    for (const auto& c : m.centers) {
      double d = 0.0;
      for (std::size_t j = 0; j < p.size(); ++j) d += (p[j] - c[j]) * (p[j] - c[j]);
      best = std::min(best, std::sqrt(d));
    }
    total += best;
  }
  EXPECT_NEAR(m.train_loss, total / 120.0, 1e-9);
}

TEST(KMeans, InertiaNeverIncreases) {
  const auto pts = random_samples(200, 4, 12);
  const auto res = kmeans(pts, 5, 6);
  for (std::size_t i = 1; i < res.inertia_history.size(); ++i) {
    EXPECT_LE(res.inertia_history[i], res.inertia_history[i - 1] + 1e-9);
  }
}

TEST(KMeans, TooFewSamplesThrows) {
  HyperParams hp;
  EXPECT_THROW(train(random_samples(3, 2, 1), hp, EncodingVector{}, 1), InsufficientSamples);
}

TEST(Score, NearestCenterDistance) {
  const auto m = model_with({{0, 0}, {10, 0}}, 1.0);
  EXPECT_EQ(score(m, Sample{4, 0}), 4.0);
  EXPECT_EQ(score(m, Sample{10, 0}), 0.0);
  EXPECT_THROW(score(m, Sample{1, 2, 3}), DimensionMismatch);
}

TEST(Detect, ThresholdIsInclusive) {
  const auto m = model_with({{0.0}}, 0.5);
  const auto below = matrix_with_columns(1, 2, [](std::size_t, std::size_t i) { return i == 0 ? 0.3 : 0.9; });
  EXPECT_EQ(detect(m, below, 2.0).verdict, Verdict::Benign);
  const auto at = matrix_with_columns(1, 1, [](std::size_t, std::size_t) { return 1.0; });
  const auto r = detect(m, at, 2.0);
  EXPECT_EQ(r.verdict, Verdict::Malicious);
  EXPECT_EQ(r.threshold_used, 1.0);
  EXPECT_EQ(r.max_loss(), 1.0);
}

TEST(Detect, ZeroTrainLossUsesFloor) {
  const auto m = model_with({{0.0}}, 0.0);
  EXPECT_DOUBLE_EQ(detection_threshold(m, 3.0), 3e-9);
  const auto exact = matrix_with_columns(1, 1, [](std::size_t, std::size_t) { return 0.0; });
  EXPECT_EQ(detect(m, exact, 1.0).verdict, Verdict::Benign);
}

TEST(Detect, NoFramesMeansNoEvidence) {
  const auto m = model_with({{0.0, 0.0}}, 0.5);
  const FrequencyFeatureMatrix empty(2, 0, 50, 10.0);
  const auto r = detect(m, empty, 1.0);
  EXPECT_TRUE(r.no_spectral_evidence);
  EXPECT_EQ(r.verdict, Verdict::Benign);
  EXPECT_TRUE(r.scores.empty());
}

TEST(Detect, RejectsNonPositivePhiAndWrongBins) {
  const auto m = model_with({{0.0, 0.0}}, 0.5);
  const auto r = matrix_with_columns(3, 1, [](std::size_t, std::size_t) { return 0.0; });
  EXPECT_THROW(detect(m, r, 0.0), Error);
  EXPECT_THROW(detect(m, r, 1.0), DimensionMismatch);
}
