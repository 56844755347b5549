#pragma once

// Encoding-vector selection. The per-packet feature columns are min-max
// normalised and a weight vector w is chosen inside [W_min, W_max]^M that
// satisfies the budget, ordering and convexity constraints row by row while
// maximising a linear separation objective. The solver is a deterministic
// log-spaced grid followed by seeded multiplicative refinement around the
// incumbent; candidate i depends only on the seed and candidates before it,
// so a larger evaluation budget always explores a superset.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "freqids/error.hpp"
#include "freqids/hyperparams.hpp"
#include "freqids/matrix.hpp"

namespace freqids {

struct ConstraintMode {
  enum class Kind { Hard, Quantile };
  Kind kind = Kind::Hard;
  double quantile = 0.95;  // minimum fraction of rows that must satisfy every row constraint

  static ConstraintMode hard() { return {Kind::Hard, 1.0}; }
  static ConstraintMode at_least(double q) { return {Kind::Quantile, q}; }
};

struct SelectionProblem {
  FeatureMatrix normalized;  // n_ik in [0, 1]
  double weight_min = 10.0;
  double weight_max = 1000.0;
  double budget = 1e5;  // B
  ConstraintMode mode = ConstraintMode::hard();
  std::size_t grid_points = 20;  // per dimension
  std::uint64_t seed = 0;
};

struct SelectionResult {
  EncodingVector w;
  double objective_value = 0.0;
  bool feasible = false;
  // Share of (row, constraint) pairs plus box constraints that are violated.
  // In Quantile mode a feasible result may still violate up to (1 - q) of rows.
  double violated_constraint_fraction = 0.0;
  std::size_t evaluations = 0;
};

/// Column-wise (x - min) / (max - min); constant columns become zero.
inline FeatureMatrix normalize_features(const FeatureMatrix& s) {
  FeatureMatrix n(s.rows(), s.cols());
  for (std::size_t c = 0; c < s.cols(); ++c) {
    double lo = 0.0, hi = 0.0;
    for (std::size_t r = 0; r < s.rows(); ++r) {
      const double x = s(r, c);
      if (r == 0 || x < lo) lo = x;
      if (r == 0 || x > hi) hi = x;
    }
    const double range = hi - lo;
    for (std::size_t r = 0; r < s.rows(); ++r) n(r, c) = range > 0.0 ? (s(r, c) - lo) / range : 0.0;
  }
  return n;
}

namespace detail {

inline std::vector<double> column_sums(const FeatureMatrix& n) {
  std::vector<double> sums(n.cols(), 0.0);
  for (std::size_t r = 0; r < n.rows(); ++r) {
    for (std::size_t c = 0; c < n.cols(); ++c) sums[c] += n(r, c);
  }
  return sums;
}

// The objective is linear in w, so it is evaluated from column sums.
inline double objective_from_sums(std::span<const double> w, std::span<const double> sums) {
  const std::size_t m = w.size();
  if (m == 0) return 0.0;
  double value = w[m - 1] * sums[m - 1] - w[0] * sums[0];
  for (std::size_t i = 1; i + 1 < m; ++i) {
    value -= 2.0 * w[i] * sums[i] - w[i - 1] * sums[i - 1] - w[i + 1] * sums[i + 1];
  }
  return value;
}

struct ConstraintCount {
  std::size_t violated = 0;
  std::size_t total = 0;
  std::size_t rows_satisfied = 0;
  bool box_ok = true;

  double fraction() const { return total == 0 ? 0.0 : static_cast<double>(violated) / static_cast<double>(total); }
};

template <std::size_t M>
void count_rows_fixed(std::span<const double> w, const FeatureMatrix& n, double budget, ConstraintCount& c) {
  double wf[M];
  for (std::size_t i = 0; i < M; ++i) wf[i] = w[i];
  const double* row = n.data().data();
  std::size_t violated = 0, satisfied = 0;
  for (std::size_t r = 0; r < n.rows(); ++r, row += M) {
    double term[M];
    double sum = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
      term[i] = wf[i] * row[i];
      sum += term[i];
    }
    std::size_t bad = sum > budget;
    for (std::size_t i = 0; i + 1 < M; ++i) bad += term[i] > term[i + 1];
    for (std::size_t i = 1; i + 1 < M; ++i) bad += 2.0 * term[i] > term[i - 1] + term[i + 1];
    violated += bad;
    satisfied += bad == 0;
  }
  c.violated += violated;
  c.rows_satisfied = satisfied;
}

inline void count_rows_generic(std::span<const double> w, const FeatureMatrix& n, double budget, ConstraintCount& c) {
  const std::size_t m = w.size();
  std::vector<double> term(m);
  for (std::size_t r = 0; r < n.rows(); ++r) {
    std::size_t bad = 0;
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      term[i] = w[i] * n(r, i);
      sum += term[i];
    }
    if (sum > budget) ++bad;
    for (std::size_t i = 0; i + 1 < m; ++i) {
      if (term[i] > term[i + 1]) ++bad;
    }
    for (std::size_t i = 1; i + 1 < m; ++i) {
      if (2.0 * term[i] > term[i - 1] + term[i + 1]) ++bad;
    }
    c.violated += bad;
    if (bad == 0) ++c.rows_satisfied;
  }
}

inline ConstraintCount count_violations(std::span<const double> w, const FeatureMatrix& n, double lo, double hi,
                                        double budget) {
  const std::size_t m = w.size();
  ConstraintCount c;
  for (double wi : w) {
    if (wi < lo || wi > hi) {
      ++c.violated;
      c.box_ok = false;
    }
  }
  const std::size_t per_row = 1 + (m > 0 ? m - 1 : 0) + (m > 1 ? m - 2 : 0);
  c.total = m + n.rows() * per_row;
  if (n.rows() > 0 && n.cols() != m) throw DimensionMismatch("encoding vector length", n.cols(), m);
  switch (m) {
    case 1: count_rows_fixed<1>(w, n, budget, c); break;
    case 2: count_rows_fixed<2>(w, n, budget, c); break;
    case 3: count_rows_fixed<3>(w, n, budget, c); break;
    case 4: count_rows_fixed<4>(w, n, budget, c); break;
    default: count_rows_generic(w, n, budget, c); break;
  }
  return c;
}

}  // namespace detail

inline double objective(const EncodingVector& w, const FeatureMatrix& n) {
  if (n.cols() != w.size()) throw DimensionMismatch("encoding vector length", n.cols(), w.size());
  const auto sums = detail::column_sums(n);
  return detail::objective_from_sums(w.weights, sums);
}

inline double check_constraints(const EncodingVector& w, const FeatureMatrix& n, double weight_min,
                                double weight_max, double budget) {
  if (n.cols() != w.size() && n.rows() > 0) throw DimensionMismatch("encoding vector length", n.cols(), w.size());
  return detail::count_violations(w.weights, n, weight_min, weight_max, budget).fraction();
}

inline std::vector<double> log_grid(double lo, double hi, std::size_t points) {
  std::vector<double> g(points);
  if (points == 1) {
    g[0] = lo;
    return g;
  }
  const double step = std::log(hi / lo) / static_cast<double>(points - 1);
  for (std::size_t j = 0; j < points; ++j) g[j] = lo * std::exp(step * static_cast<double>(j));
  g.front() = lo;
  g.back() = hi;
  return g;
}

inline SelectionResult select_encoding(const SelectionProblem& problem, std::size_t search_budget) {
  if (search_budget == 0) throw Error("select_encoding: search budget must be at least 1");
  if (problem.grid_points == 0) throw Error("select_encoding: grid must have at least one point");
  if (!(problem.weight_min > 0.0 && problem.weight_min < problem.weight_max)) {
    throw Error("select_encoding: need 0 < W_min < W_max");
  }
  const FeatureMatrix& n = problem.normalized;
  const std::size_t m = n.cols();
  if (m == 0) throw Error("select_encoding: no feature columns");
  const auto sums = detail::column_sums(n);
  const auto grid = log_grid(problem.weight_min, problem.weight_max, problem.grid_points);
  const double rows = static_cast<double>(n.rows());

  struct Candidate {
    std::vector<double> w;
    double objective = 0.0;
    double violated = 1.0;
    bool feasible = false;
  };

  auto evaluate = [&](std::vector<double> w) {
    Candidate c;
    c.objective = detail::objective_from_sums(w, sums);
    auto cnt = detail::count_violations(w, n, problem.weight_min, problem.weight_max, problem.budget);
    c.violated = cnt.fraction();
    if (problem.mode.kind == ConstraintMode::Kind::Hard) {
      c.feasible = cnt.violated == 0;
    } else {
      const double satisfied = rows == 0.0 ? 1.0 : static_cast<double>(cnt.rows_satisfied) / rows;
      c.feasible = cnt.box_ok && satisfied >= problem.mode.quantile;
    }
    c.w = std::move(w);
    return c;
  };

  // Feasible beats infeasible; then higher objective (feasible) or fewer
  // violations (infeasible); final tie-break is the lexicographically smaller w.
  auto better = [](const Candidate& a, const Candidate& b) {
    if (a.feasible != b.feasible) return a.feasible;
    if (!a.feasible && a.violated != b.violated) return a.violated < b.violated;
    if (a.objective != b.objective) return a.objective > b.objective;
    return std::lexicographical_compare(a.w.begin(), a.w.end(), b.w.begin(), b.w.end());
  };

  Candidate best;
  bool have_best = false;
  std::size_t used = 0;
  auto consider = [&](std::vector<double> w) {
    auto c = evaluate(std::move(w));
    ++used;
    if (!have_best || better(c, best)) {
      best = std::move(c);
      have_best = true;
    }
  };

  std::vector<std::size_t> idx(m, 0);
  bool grid_done = false;
  while (used < search_budget && !grid_done) {
    std::vector<double> w(m);
    for (std::size_t i = 0; i < m; ++i) w[i] = grid[idx[i]];
    consider(std::move(w));
    std::size_t d = m;
    while (d > 0) {
      --d;
      if (++idx[d] < grid.size()) break;
      idx[d] = 0;
      if (d == 0) grid_done = true;
    }
  }

  std::mt19937_64 rng(problem.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double grid_step = grid.size() > 1 ? std::log(problem.weight_max / problem.weight_min) /
                                                 static_cast<double>(grid.size() - 1)
                                           : std::log(problem.weight_max / problem.weight_min);
  for (std::size_t r = 0; used < search_budget; ++r) {
    // Step sizes cycle from one grid cell down to 1/128 of one; the schedule
    // must not depend on the budget.
    const double scale = grid_step * std::ldexp(1.0, -static_cast<int>(r % 8));
    std::vector<double> w = best.w;
    for (double& wi : w) {
      wi = std::clamp(wi * std::exp(scale * gauss(rng)), problem.weight_min, problem.weight_max);
    }
    consider(std::move(w));
  }

  SelectionResult out;
  out.w.weights = best.w;
  out.objective_value = best.objective;
  out.feasible = best.feasible;
  out.violated_constraint_fraction = best.violated;
  out.evaluations = used;
  return out;
}

}  // namespace freqids
