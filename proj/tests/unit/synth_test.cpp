#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "freqids/scenario.hpp"
#include "freqids/synth.hpp"

using namespace freqids;

namespace {

bool time_ordered(const std::vector<LabeledPacket>& t) {
  return std::is_sorted(t.begin(), t.end(), [](const LabeledPacket& a, const LabeledPacket& b) {
    return a.record.timestamp_us < b.record.timestamp_us;
  });
}

}  // namespace

TEST(Generate, SynFloodCountAndSpacing) {
  TrafficProfile p;
  p.kind = TrafficKind::SynFlood;
  p.rate_pps = 1000;
  p.length_mean = 60;
  const auto t = generate(p, 1);
  ASSERT_EQ(t.size(), 1000u);
  for (std::size_t i = 1; i < t.size(); ++i) {
    EXPECT_EQ(t[i].record.timestamp_us - t[i - 1].record.timestamp_us, 1000);
    EXPECT_EQ(t[i].record.length_bytes, 60u);
    EXPECT_EQ(t[i].label, Label::Malicious);
  }
}

TEST(Generate, LowRateBurstCount) {
  TrafficProfile p;
  p.kind = TrafficKind::LowRateBurst;
  p.burst_interval_s = 0.5;
  p.burst_len = 50;
  p.duration_s = 2.0;
  p.rate_pps = 2000;
  const auto t = generate(p, 1);
  EXPECT_EQ(t.size(), 200u);
  EXPECT_EQ(t[50].record.timestamp_us - t[0].record.timestamp_us, 500000);
}

TEST(Generate, ScanWalksPorts) {
  TrafficProfile p;
  p.kind = TrafficKind::ConstantScan;
  p.rate_pps = 100;
  p.dest_port = 1;
  const auto t = generate(p, 1);
  ASSERT_EQ(t.size(), 100u);
  EXPECT_NE(t[0].record.flow_key.dest_port, t[1].record.flow_key.dest_port);
}

TEST(Generate, DeterministicPerSeed) {
  TrafficProfile p;
  p.duration_s = 5;
  EXPECT_EQ(generate(p, 9), generate(p, 9));
  EXPECT_NE(generate(p, 9), generate(p, 10));
}

TEST(Generate, BenignMomentsMatchProfile) {
  TrafficProfile p;
  p.rate_pps = 1000;
  p.duration_s = 50;
  p.length_mean = 700;
  p.length_std = 100;  // far from the frame-size clamps
  p.ipt_std_ratio = 0.2;
  const auto t = generate(p, 3);
  double m = 0.0, m2 = 0.0, gap = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    m += t[i].record.length_bytes;
    m2 += double(t[i].record.length_bytes) * t[i].record.length_bytes;
    if (i > 0) gap += double(t[i].record.timestamp_us - t[i - 1].record.timestamp_us);
  }
  const double n = double(t.size());
  m /= n;
  const double var = m2 / n - m * m;
  EXPECT_NEAR(m, 700.0, 0.05 * 700.0);
  EXPECT_NEAR(var, 100.0 * 100.0, 0.05 * 100.0 * 100.0);
  EXPECT_NEAR(gap / (n - 1.0), 1000.0, 50.0);
  EXPECT_TRUE(std::all_of(t.begin(), t.end(), [](const auto& lp) { return lp.label == Label::Benign; }));
}

TEST(Generate, RejectsInvalidProfiles) {
  TrafficProfile p;
  p.rate_pps = 0;
  EXPECT_THROW(generate(p, 1), InvalidProfile);
  p.rate_pps = 10;
  p.duration_s = -1;
  EXPECT_THROW(generate(p, 1), InvalidProfile);
}

TEST(Mix, OneToOneDoublesCount) {
  TrafficProfile attack;
  attack.kind = TrafficKind::SynFlood;
  attack.rate_pps = 100;
  TrafficProfile benign;
  const auto t = mix(MixSpec{attack, benign, 1, 1}, 4);
  EXPECT_EQ(t.size(), 200u);
  EXPECT_EQ(std::count_if(t.begin(), t.end(), [](const auto& lp) { return lp.label == Label::Benign; }), 100);
  EXPECT_TRUE(time_ordered(t));
  for (const auto& lp : t) EXPECT_EQ(lp.record.flow_key.source, attack.source);
}

TEST(Mix, RatioScalesNoise) {
  TrafficProfile attack;
  attack.kind = TrafficKind::SynFlood;
  attack.rate_pps = 100;
  EXPECT_EQ(mix(MixSpec{attack, TrafficProfile{}, 1, 8}, 1).size(), 900u);
  EXPECT_EQ(mix(MixSpec{attack, TrafficProfile{}, 2, 1}, 1).size(), 150u);
}

TEST(Mix, ZeroRatioThrows) {
  TrafficProfile attack;
  attack.kind = TrafficKind::SynFlood;
  EXPECT_THROW(mix(MixSpec{attack, TrafficProfile{}, 1, 0}, 1), InvalidProfile);
  EXPECT_THROW(mix(MixSpec{attack, TrafficProfile{}, 0, 1}, 1), InvalidProfile);
}

TEST(Scenario, FlowCountsLabelsAndOrder) {
  ScenarioSpec spec;
  spec.benign_flows = 5;
  spec.attack_flows = 2;
  spec.attack = TrafficKind::ConstantScan;
  const auto t = build_scenario(spec);
  EXPECT_TRUE(time_ordered(t));
  std::set<std::string> benign, attack;
  for (const auto& lp : t) (lp.label == Label::Benign ? benign : attack).insert(lp.record.flow_key.source);
  EXPECT_EQ(benign.size(), 5u);
  EXPECT_EQ(attack.size(), 2u);
  EXPECT_EQ(build_scenario(spec), t);
}
