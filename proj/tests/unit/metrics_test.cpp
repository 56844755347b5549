#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>
#include <vector>

#include "freqids/metrics.hpp"

using namespace freqids;

namespace {

LabeledScores make(std::vector<double> benign, std::vector<double> malicious) {
  LabeledScores ls;
  for (double s : benign) ls.add(s, Label::Benign);
  for (double s : malicious) ls.add(s, Label::Malicious);
  return ls;
}

}  // namespace

TEST(Confusion, Examples) {
  const auto ls = make({0, 0}, {1, 1});
  const auto r = confusion_at(ls, 0.5);
  EXPECT_EQ(r.tpr, 1.0);
  EXPECT_EQ(r.fpr, 0.0);
  const auto all = confusion_at(ls, -1.0);
  EXPECT_EQ(all.tpr, 1.0);
  EXPECT_EQ(all.fpr, 1.0);
  const auto none = confusion_at(ls, 2.0);
  EXPECT_EQ(none.tpr, 0.0);
  EXPECT_EQ(none.fpr, 0.0);
}

TEST(Auc, Examples) {
  EXPECT_EQ(auc(make({0.1, 0.2}, {0.8, 0.9})), 1.0);
  EXPECT_EQ(auc(make({0.5}, {0.5})), 0.5);
  EXPECT_EQ(auc(make({0.1, 0.6}, {0.4, 0.9})), 0.75);
}

TEST(Auc, SingleClassThrows) {
  EXPECT_THROW(auc(make({0.1, 0.2}, {})), SingleClass);
  EXPECT_THROW(eer(make({}, {0.3})), SingleClass);
  EXPECT_THROW(roc_curve(make({}, {0.3})), SingleClass);
}

TEST(Auc, MismatchedLengthsThrow) {
  LabeledScores ls = make({0.1}, {0.2});
  ls.labels.pop_back();
  EXPECT_THROW(auc(ls), DimensionMismatch);
}

TEST(Auc, ShuffledLabelsNearHalf) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> z(0.0, 1.0);
  LabeledScores ls;
  for (int i = 0; i < 4000; ++i) ls.add(z(rng), i % 2 ? Label::Malicious : Label::Benign);
  std::shuffle(ls.labels.begin(), ls.labels.end(), rng);
  EXPECT_NEAR(auc(ls), 0.5, 0.05);
}

TEST(Auc, EqualsTrapezoidArea) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> v(0, 5);
  for (int t = 0; t < 50; ++t) {
    LabeledScores ls = make({double(v(rng))}, {double(v(rng))});
    for (int i = 0; i < 30; ++i) ls.add(v(rng), rng() % 2 ? Label::Malicious : Label::Benign);
    EXPECT_NEAR(trapezoid_area(roc_curve(ls)), auc(ls), 1e-12);
  }
}

TEST(Eer, Examples) {
  EXPECT_EQ(eer(make({0.1, 0.2}, {0.8, 0.9})), 0.0);
  EXPECT_EQ(eer(make({0.5, 0.5}, {0.5, 0.5})), 0.5);
  // ROC (0,0) (0,.5) (.5,.5) (.5,1) (1,1): FPR = 1 - TPR at FPR 0.5.
  EXPECT_NEAR(eer(make({0.1, 0.6}, {0.4, 0.9})), 0.5, 1e-12);
}

TEST(Eer, InterpolatesBetweenRocPoints) {
  // ROC (0,0) (0,1/3) (1/2,2/3) (1,2/3) (1,1); the gap FPR - (1 - TPR) goes
  // from -2/3 to 1/6 on the second segment, crossing at 4/5 of it.
  EXPECT_NEAR(eer(make({0.2, 0.5}, {0.1, 0.5, 0.9})), 0.4, 1e-12);
  // ROC (0,0) (1/3,1) ...: crossing at t where t/3 = 1 - t -> FPR 1/4.
  EXPECT_NEAR(eer(make({0.5, 0.1, 0.1}, {0.5})), 0.25, 1e-12);
}

TEST(RocCurve, PointsAndEndpoints) {
  const auto roc = roc_curve(make({0.1}, {0.9}));
  ASSERT_EQ(roc.size(), 3u);
  EXPECT_EQ(roc.front().fpr, 0.0);
  EXPECT_EQ(roc.back().tpr, 1.0);
  const auto flat = roc_curve(make({0.4, 0.4}, {0.4}));
  ASSERT_EQ(flat.size(), 2u);
  EXPECT_EQ(flat[1].fpr, 1.0);
  EXPECT_EQ(flat[1].tpr, 1.0);
}

TEST(RocCurve, CsvHasHeaderAndRows) {
  std::ostringstream out;
  write_roc_csv(out, roc_curve(make({0.1}, {0.9})));
  const std::string s = out.str();
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 4);
}
