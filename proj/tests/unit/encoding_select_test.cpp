#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "freqids/encoding_select.hpp"

using namespace freqids;

namespace {

// Independent evaluation of the objective: sum over rows of
// w_M n_M - w_1 n_1 - sum_{1<i<M} (2 w_i n_i - w_{i-1} n_{i-1} - w_{i+1} n_{i+1}).
double direct_objective(const std::vector<double>& w, const FeatureMatrix& n) {
  const std::size_t m = w.size();
  double total = 0.0;
  for (std::size_t r = 0; r < n.rows(); ++r) {
    auto t = [&](std::size_t i) { return w[i] * n(r, i); };
    double row = t(m - 1) - t(0);
    for (std::size_t i = 1; i + 1 < m; ++i) row -= 2.0 * t(i) - t(i - 1) - t(i + 1);
    total += row;
  }
  return total;
}

bool row_ok(const std::vector<double>& w, const FeatureMatrix& n, std::size_t r, double budget) {
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) sum += w[i] * n(r, i);
  if (sum > budget) return false;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    if (w[i] * n(r, i) > w[i + 1] * n(r, i + 1)) return false;
  }
  for (std::size_t i = 1; i + 1 < w.size(); ++i) {
    if (2.0 * w[i] * n(r, i) > w[i - 1] * n(r, i - 1) + w[i + 1] * n(r, i + 1)) return false;
  }
  return true;
}

FeatureMatrix random_normalized(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  FeatureMatrix n(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) n(r, c) = u(rng);
  }
  return n;
}

}  // namespace

TEST(NormalizeFeatures, Examples) {
  const auto n = normalize_features(FeatureMatrix{{0, 7}, {5, 7}, {10, 7}});
  EXPECT_EQ(n, (FeatureMatrix{{0, 0}, {0.5, 0}, {1, 0}}));
  EXPECT_EQ(normalize_features(FeatureMatrix{{3}}), (FeatureMatrix{{0}}));
}

TEST(NormalizeFeatures, ColumnsSpanUnitInterval) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> z(100.0, 30.0);
  FeatureMatrix s(200, 3);
  for (std::size_t r = 0; r < 200; ++r) {
    for (std::size_t c = 0; c < 3; ++c) s(r, c) = z(rng);
  }
  const auto n = normalize_features(s);
  for (std::size_t c = 0; c < 3; ++c) {
    double lo = 1.0, hi = 0.0;
    for (std::size_t r = 0; r < 200; ++r) lo = std::min(lo, n(r, c)), hi = std::max(hi, n(r, c));
    EXPECT_EQ(lo, 0.0);
    EXPECT_EQ(hi, 1.0);
  }
}

TEST(Objective, TwoFeatureExample) {
  EXPECT_DOUBLE_EQ(objective(EncodingVector{{10, 100}}, FeatureMatrix{{0.5, 1.0}}), 95.0);
}

TEST(Objective, SingleFeatureIsZero) {
  EXPECT_EQ(objective(EncodingVector{{37}}, FeatureMatrix{{0.2}, {0.9}}), 0.0);
}

TEST(Objective, MatchesDirectEvaluation) {
  for (std::size_t m : {2, 3, 4, 5}) {
    const auto n = random_normalized(5, m, 10 + m);
    std::vector<double> w(m);
    for (std::size_t i = 0; i < m; ++i) w[i] = 10.0 + 37.0 * static_cast<double>(i * i);
    EXPECT_NEAR(objective(EncodingVector{w}, n), direct_objective(w, n), 1e-9) << "M=" << m;
  }
}

TEST(CheckConstraints, Examples) {
  EXPECT_EQ(check_constraints(EncodingVector{{10, 20, 30}}, FeatureMatrix{{0, 0, 0}}, 10, 1000, 1e5), 0.0);
  EXPECT_GT(check_constraints(EncodingVector{{2000, 20}}, FeatureMatrix{{0, 0}}, 10, 1000, 1e5), 0.0);
  EXPECT_GT(check_constraints(EncodingVector{{10, 20}}, FeatureMatrix{{1.0, 0.0}}, 10, 1000, 1e5), 0.0);
}

TEST(CheckConstraints, FractionCountsEveryConstraint) {
  const auto n = random_normalized(40, 4, 21);
  const std::vector<double> w{10, 30, 60, 100};
  std::size_t bad = 0;
  for (std::size_t r = 0; r < n.rows(); ++r) {
    double sum = 0.0;
    for (std::size_t i = 0; i < 4; ++i) sum += w[i] * n(r, i);
    bad += sum > 150.0;
    for (std::size_t i = 0; i < 3; ++i) bad += w[i] * n(r, i) > w[i + 1] * n(r, i + 1);
    for (std::size_t i = 1; i < 3; ++i) bad += 2 * w[i] * n(r, i) > w[i - 1] * n(r, i - 1) + w[i + 1] * n(r, i + 1);
  }
  const double total = 4.0 + 40.0 * (1 + 3 + 2);
  EXPECT_NEAR(check_constraints(EncodingVector{w}, n, 10, 1000, 150.0), static_cast<double>(bad) / total, 1e-12);
}

TEST(LogGrid, EndpointsAndSpacing) {
  const auto g = log_grid(10, 1000, 3);
  ASSERT_EQ(g.size(), 3u);
  EXPECT_EQ(g[0], 10.0);
  EXPECT_NEAR(g[1], 100.0, 1e-9);
  EXPECT_EQ(g[2], 1000.0);
}

TEST(SelectEncoding, SingleFeatureReturnsMinimumWeight) {
  SelectionProblem p;
  p.normalized = FeatureMatrix{{0.3}, {1.0}, {0.0}};
  const auto r = select_encoding(p, 50);
  EXPECT_TRUE(r.feasible);
  EXPECT_EQ(r.w.weights, std::vector<double>{10.0});
  EXPECT_EQ(r.objective_value, 0.0);
}

TEST(SelectEncoding, AllZeroFeaturesReturnsMinimumWeights) {
  SelectionProblem p;
  p.normalized = FeatureMatrix(5, 3);
  const auto r = select_encoding(p, 500);
  EXPECT_TRUE(r.feasible);
  EXPECT_EQ(r.w.weights, (std::vector<double>{10, 10, 10}));
}

// With a budget equal to the grid size the search is exhaustive, so the
// result must equal the best feasible grid point found by brute force.
TEST(SelectEncoding, MatchesExhaustiveGridOracle) {
  FeatureMatrix n(30, 2);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.1, 0.5);
  for (std::size_t r = 0; r < 30; ++r) n(r, 0) = u(rng), n(r, 1) = n(r, 0) + u(rng);
  SelectionProblem p;
  p.normalized = n;
  p.budget = 300.0;
  const auto grid = log_grid(p.weight_min, p.weight_max, p.grid_points);
  double best = -1e300;
  std::vector<double> best_w;
  for (double a : grid) {
    for (double b : grid) {
      const std::vector<double> w{a, b};
      bool ok = true;
      for (std::size_t r = 0; r < n.rows() && ok; ++r) ok = row_ok(w, n, r, p.budget);
      if (ok && direct_objective(w, n) > best) best = direct_objective(w, n), best_w = w;
    }
  }
  const auto r = select_encoding(p, grid.size() * grid.size());
  EXPECT_TRUE(r.feasible);
  EXPECT_EQ(r.w.weights, best_w);
  EXPECT_NEAR(r.objective_value, best, 1e-9);
  EXPECT_EQ(r.w.weights[0], 10.0);
  EXPECT_EQ(r.violated_constraint_fraction, 0.0);
}

TEST(SelectEncoding, LargerBudgetNeverWorse) {
  const auto n = random_normalized(100, 3, 9);
  SelectionProblem p;
  for (std::size_t r = 0; r < n.rows(); ++r) {
    std::vector<double> row{n(r, 0) * 0.2, n(r, 1) * 0.5 + 0.2, n(r, 2) * 0.3 + 0.7};
    p.normalized.append_row(row);
  }
  p.budget = 2000.0;
  double prev = -1e300;
  for (std::size_t budget : {100, 1000, 8000, 12000}) {
    const auto r = select_encoding(p, budget);
    ASSERT_TRUE(r.feasible);
    EXPECT_GE(r.objective_value, prev);
    EXPECT_TRUE(r.w.within(p.weight_min, p.weight_max));
    EXPECT_EQ(r.evaluations, budget);
    prev = r.objective_value;
  }
}

TEST(SelectEncoding, ForcedInfeasibilityIsReported) {
  SelectionProblem p;
  p.normalized = FeatureMatrix{{1.0, 0.0}};
  const auto r = select_encoding(p, 400);
  EXPECT_FALSE(r.feasible);
  EXPECT_GT(r.violated_constraint_fraction, 0.0);
}

TEST(SelectEncoding, QuantileModeToleratesOutliers) {
  FeatureMatrix n;
  for (int r = 0; r < 99; ++r) n.append_row(std::vector<double>{0.1, 0.5});
  n.append_row(std::vector<double>{1.0, 0.0});  // violates the order constraint for every w
  SelectionProblem p;
  p.normalized = n;
  EXPECT_FALSE(select_encoding(p, 400).feasible);
  p.mode = ConstraintMode::at_least(0.95);
  const auto r = select_encoding(p, 400);
  EXPECT_TRUE(r.feasible);
  EXPECT_GT(r.violated_constraint_fraction, 0.0);
}

TEST(SelectEncoding, SameSeedSameResult) {
  const auto n = random_normalized(50, 3, 2);
  SelectionProblem p;
  p.normalized = n;
  p.seed = 4;
  const auto a = select_encoding(p, 9000);
  const auto b = select_encoding(p, 9000);
  EXPECT_EQ(a.w, b.w);
  EXPECT_EQ(a.objective_value, b.objective_value);
}

TEST(SelectEncoding, RejectsBadArguments) {
  SelectionProblem p;
  p.normalized = FeatureMatrix{{0.1, 0.2}};
  EXPECT_THROW(select_encoding(p, 0), Error);
  p.weight_min = 100;
  p.weight_max = 10;
  EXPECT_THROW(select_encoding(p, 10), Error);
}
