#include <gtest/gtest.h>

#include <thread>

#include "freqids/evaluate.hpp"
#include "freqids/model_io.hpp"
#include "freqids/pipeline.hpp"
#include "freqids/scenario.hpp"

using namespace freqids;

namespace {

const std::vector<LabeledPacket>& small_trace() {
  static const auto t = [] {
    ScenarioSpec spec;
    spec.benign_flows = 12;
    spec.attack_flows = 2;
    spec.seed = 5;
    return build_scenario(spec);
  }();
  return t;
}

ClusterModel small_model() {
  HyperParams hp;
  hp.clusters = 3;
  const auto flows = labeled_flows(small_trace());
  std::vector<LabeledFlow> benign;
  for (const auto& f : flows) {
    if (f.label == Label::Benign) benign.push_back(f);
  }
  return train_spectral(benign, EncodingVector{{10, 50, 200}}, hp, 1);
}

}  // namespace

TEST(BoundedQueue, FifoAndClose) {
  BoundedQueue<int> q(2);
  EXPECT_TRUE(q.push(1));
  EXPECT_TRUE(q.push(2));
  EXPECT_EQ(q.size(), 2u);
  EXPECT_EQ(q.pop(), 1);
  q.close();
  EXPECT_FALSE(q.push(3));
  EXPECT_EQ(q.pop(), 2);
  EXPECT_EQ(q.pop(), std::nullopt);
}

TEST(BoundedQueue, ProducerBlocksUntilConsumed) {
  BoundedQueue<int> q(1);
  std::thread producer([&] {
    for (int i = 0; i < 100; ++i) q.push(i);
    q.close();
  });
  int expected = 0;
  while (auto v = q.pop()) {
    EXPECT_EQ(*v, expected++);
    EXPECT_LE(q.size(), 1u);
  }
  producer.join();
  EXPECT_EQ(expected, 100);
}

TEST(Pipeline, MatchesDirectScoringAndIsDeterministic) {
  const auto model = small_model();
  const auto records = strip_labels(small_trace());
  const auto a = run_pipeline(records, model, 2.0, PipelineOptions{KeyMode::SourceIP, 1u << 22, 2});
  const auto b = run_pipeline(records, model, 2.0, PipelineOptions{KeyMode::SourceIP, 1u << 22, 64});
  const auto flows = labeled_flows(small_trace());
  ASSERT_EQ(a.size(), flows.size());
  ASSERT_EQ(b.size(), flows.size());
  for (std::size_t i = 0; i < flows.size(); ++i) {
    EXPECT_EQ(a[i].detection.flow_key, flows[i].key);
    EXPECT_EQ(a[i].detection.scores, b[i].detection.scores);
    EXPECT_EQ(a[i].segment, 0u);
    EXPECT_DOUBLE_EQ(a[i].detection.max_loss(), spectral_flow_score(model, flows[i].packets));
  }
}

TEST(Pipeline, WatermarkSplitsFlowsIntoSegments) {
  const auto model = small_model();
  const auto records = strip_labels(small_trace());
  const auto out = run_pipeline(records, model, 2.0, PipelineOptions{KeyMode::SourceIP, 5000, 4});
  std::size_t packets = 0, later_segments = 0;
  for (const auto& v : out) {
    packets += v.packets;
    later_segments += v.segment > 0;
  }
  EXPECT_EQ(packets, records.size());
  EXPECT_GT(later_segments, 0u);
}

TEST(Pipeline, ModelErrorsPropagate) {
  auto model = small_model();
  model.centers = {Sample(3, 0.0)};  // wrong dimension
  const auto records = strip_labels(small_trace());
  EXPECT_THROW(run_pipeline(records, model, 2.0), DimensionMismatch);
}

TEST(ModelJson, SpectralRoundTrip) {
  StoredModel m{small_model(), std::nullopt};
  const auto back = model_from_json(Json::parse(to_json(m).dump()));
  EXPECT_FALSE(back.is_flow_stats());
  EXPECT_EQ(back.cluster.centers, m.cluster.centers);
  EXPECT_EQ(back.cluster.train_loss, m.cluster.train_loss);
  EXPECT_EQ(back.cluster.hp, m.cluster.hp);
  EXPECT_EQ(back.cluster.encoding, m.cluster.encoding);
  EXPECT_EQ(back.cluster.seed, m.cluster.seed);
  EXPECT_EQ(to_json(back).dump(), to_json(m).dump());
}

TEST(ModelJson, FlowStatsRoundTripAndErrors) {
  StoredModel m;
  m.cluster.centers = {{0.1, 0.2}, {0.3, 0.4}};
  m.cluster.train_loss = 0.25;
  m.scaler = MinMaxScaler({0, 1}, {2, 3});
  auto j = to_json(m);
  const auto back = model_from_json(j);
  ASSERT_TRUE(back.is_flow_stats());
  EXPECT_EQ(back.scaler->lo(), m.scaler->lo());
  EXPECT_EQ(back.scaler->hi(), m.scaler->hi());

  auto wrong_version = j;
  wrong_version["format_version"] = 99;
  EXPECT_THROW(model_from_json(wrong_version), Error);
  auto ragged = j;
  ragged["centers"][1] = Json::array({1.0});
  EXPECT_THROW(model_from_json(ragged), DimensionMismatch);
  auto kind = j;
  kind["kind"] = "other";
  EXPECT_THROW(model_from_json(kind), Error);
}

TEST(HyperParamsJson, PartialOverride) {
  HyperParams hp;
  merge_json(Json{{"frame_length", 30}, {"clusters", 4}}, hp);
  EXPECT_EQ(hp.frame_length, 30u);
  EXPECT_EQ(hp.clusters, 4u);
  EXPECT_EQ(hp.window_length, 100u);
  HyperParams back;
  merge_json(to_json(hp), back);
  EXPECT_EQ(back, hp);
}

TEST(Evaluate, SeparatesFloodFromBenign) {
  const auto model = small_model();
  ScenarioSpec spec;
  spec.benign_flows = 12;
  spec.attack_flows = 3;
  spec.seed = 6;
  const auto flows = labeled_flows(build_scenario(spec));
  const auto scores = score_flows(flows, [&](std::span<const PacketRecord> p) { return spectral_flow_score(model, p); });
  EXPECT_EQ(scores.positives(), 3u);
  EXPECT_GT(auc(scores), 0.9);
}

TEST(Evaluate, SelectionProblemRejectsEmptyTrace) {
  EXPECT_THROW(selection_problem(std::vector<PacketRecord>{}, HyperParams{}, ConstraintMode::hard()), Error);
}
