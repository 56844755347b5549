#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "freqids/flow_stats.hpp"

using namespace freqids;

TEST(FlowStats, SinglePacket) {
  const auto v = flow_stats(FeatureMatrix{{6, 0, 60}}, 0.0, 60.0);
  for (std::size_t c = 0; c < 3; ++c) {
    EXPECT_EQ(v[c * 5 + 0], v[c * 5 + 1]);
    EXPECT_EQ(v[c * 5 + 0], v[c * 5 + 3]);
    EXPECT_EQ(v[c * 5 + 2], 0.0);
    EXPECT_EQ(v[c * 5 + 4], 0.0);
  }
  EXPECT_EQ(v[15], 0.0);
  EXPECT_EQ(v[16], 60.0);
}

TEST(FlowStats, TwoLengths) {
  const auto v = flow_stats(FeatureMatrix{{6, 0, 10}, {6, 5, 20}}, 5.0, 30.0);
  EXPECT_EQ(v[10], 20.0);  // max
  EXPECT_EQ(v[11], 10.0);  // min
  EXPECT_EQ(v[12], 25.0);  // variance
  EXPECT_EQ(v[13], 15.0);  // mean
  EXPECT_EQ(v[14], 10.0);  // range
}

TEST(FlowStats, MatchesTwoPassOracle) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1000.0);
  FeatureMatrix s(137, 3);
  for (std::size_t r = 0; r < s.rows(); ++r) {
    for (std::size_t c = 0; c < 3; ++c) s(r, c) = u(rng);
  }
  const auto v = flow_stats(s, 1.0, 2.0);
  for (std::size_t c = 0; c < 3; ++c) {
    double mean = 0.0, lo = 1e300, hi = -1e300;
    for (std::size_t r = 0; r < s.rows(); ++r) mean += s(r, c), lo = std::min(lo, s(r, c)), hi = std::max(hi, s(r, c));
    mean /= 137.0;
    double var = 0.0;
    for (std::size_t r = 0; r < s.rows(); ++r) var += (s(r, c) - mean) * (s(r, c) - mean) / 137.0;
    EXPECT_EQ(v[c * 5 + 0], hi);
    EXPECT_EQ(v[c * 5 + 1], lo);
    EXPECT_NEAR(v[c * 5 + 2], var, 1e-9 * var);
    EXPECT_NEAR(v[c * 5 + 3], mean, 1e-9);
    EXPECT_LE(v[c * 5 + 1], v[c * 5 + 3]);
    EXPECT_LE(v[c * 5 + 3], v[c * 5 + 0]);
  }
}

TEST(FlowStats, FromPacketsAddsDurationAndBytes) {
  const std::vector<PacketRecord> flow{{100, 60, 6, FlowKey::source_only("a")}, {400, 1500, 6, FlowKey::source_only("a")}};
  const auto v = flow_stats(flow);
  EXPECT_EQ(v[15], 300.0);
  EXPECT_EQ(v[16], 1560.0);
  EXPECT_EQ(v[5], 300.0);  // max inter-arrival
}

TEST(MinMaxScaler, ScalesAndClamps) {
  const std::vector<std::vector<double>> train{{0, 7}, {10, 7}};
  const auto s = MinMaxScaler::fit(std::span<const std::vector<double>>(train));
  EXPECT_EQ(s.transform(std::vector<double>{5, 7}), (Sample{0.5, 0.0}));
  EXPECT_EQ(s.transform(std::vector<double>{20, 100}), (Sample{1.0, 0.0}));
  EXPECT_EQ(s.transform(std::vector<double>{-3, 7}), (Sample{0.0, 0.0}));
  EXPECT_THROW(s.transform(std::vector<double>{1}), DimensionMismatch);
}

TEST(NormalizeStats, TrainingVectorsLandInUnitCube) {
  std::vector<FlowStatVector> train(20);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (auto& v : train) {
    for (double& x : v) x = u(rng);
  }
  const auto n = normalize_stats(train);
  ASSERT_EQ(n.vectors.size(), 20u);
  for (const auto& v : n.vectors) {
    for (double x : v) {
      EXPECT_GE(x, 0.0);
      EXPECT_LE(x, 1.0);
    }
  }
}
