#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <ostream>
#include <utility>
#include <vector>

#include "freqids/error.hpp"
#include "freqids/flow.hpp"

namespace freqids {

/// Parallel scores and labels; a higher score means "more malicious".
struct LabeledScores {
  std::vector<double> scores;
  std::vector<Label> labels;

  void add(double score, Label label) {
    scores.push_back(score);
    labels.push_back(label);
  }

  std::size_t positives() const {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), Label::Malicious));
  }
  std::size_t negatives() const { return labels.size() - positives(); }
};

struct Rates {
  double tpr = 0.0;
  double fpr = 0.0;
};

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

namespace detail {

inline void check_parallel(const LabeledScores& ls) {
  if (ls.scores.size() != ls.labels.size()) throw DimensionMismatch("labels", ls.scores.size(), ls.labels.size());
}

inline void require_both_classes(const LabeledScores& ls) {
  check_parallel(ls);
  if (ls.positives() == 0 || ls.negatives() == 0) throw SingleClass();
}

}  // namespace detail

/// A sample is flagged when score >= threshold.
inline Rates confusion_at(const LabeledScores& ls, double threshold) {
  detail::check_parallel(ls);
  std::size_t tp = 0, fn = 0, fp = 0, tn = 0;
  for (std::size_t i = 0; i < ls.scores.size(); ++i) {
    const bool flagged = ls.scores[i] >= threshold;
    if (ls.labels[i] == Label::Malicious) {
      flagged ? ++tp : ++fn;
    } else {
      flagged ? ++fp : ++tn;
    }
  }
  if (tp + fn == 0) throw NoPositives();
  if (fp + tn == 0) throw NoNegatives();
  return {static_cast<double>(tp) / static_cast<double>(tp + fn), static_cast<double>(fp) / static_cast<double>(fp + tn)};
}

/// Operating points at every distinct threshold, from (0,0) to (1,1).
inline std::vector<RocPoint> roc_curve(const LabeledScores& ls) {
  detail::require_both_classes(ls);
  std::vector<std::size_t> order(ls.scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ls.scores[a] > ls.scores[b]; });
  const double pos = static_cast<double>(ls.positives());
  const double neg = static_cast<double>(ls.negatives());
  std::vector<RocPoint> roc{{0.0, 0.0}};
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double s = ls.scores[order[i]];
    while (i < order.size() && ls.scores[order[i]] == s) {
      ls.labels[order[i]] == Label::Malicious ? ++tp : ++fp;
      ++i;
    }
    roc.push_back({static_cast<double>(fp) / neg, static_cast<double>(tp) / pos});
  }
  return roc;
}

/// Mann-Whitney AUC: P(malicious > benign) + 0.5 * P(tie).
inline double auc(const LabeledScores& ls) {
  detail::require_both_classes(ls);
  std::vector<std::size_t> order(ls.scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ls.scores[a] < ls.scores[b]; });
  // Sum of benign counts strictly below each malicious score, ties halved.
  double wins = 0.0;
  std::size_t benign_below = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    std::size_t benign_here = 0, malicious_here = 0;
    while (j < order.size() && ls.scores[order[j]] == ls.scores[order[i]]) {
      ls.labels[order[j]] == Label::Malicious ? ++malicious_here : ++benign_here;
      ++j;
    }
    wins += static_cast<double>(malicious_here) *
            (static_cast<double>(benign_below) + 0.5 * static_cast<double>(benign_here));
    benign_below += benign_here;
    i = j;
  }
  return wins / (static_cast<double>(ls.positives()) * static_cast<double>(ls.negatives()));
}

/// Equal error rate: where FPR equals FNR = 1 - TPR, interpolated linearly
/// between the bracketing ROC points.
inline double eer(const LabeledScores& ls) {
  const auto roc = roc_curve(ls);
  auto gap = [](const RocPoint& p) { return p.fpr - (1.0 - p.tpr); };
  for (std::size_t j = 1; j < roc.size(); ++j) {
    const double g1 = gap(roc[j]);
    if (g1 < 0.0) continue;
    const double g0 = gap(roc[j - 1]);
    if (g1 == 0.0 || g1 == g0) return roc[j].fpr;
    const double t = -g0 / (g1 - g0);
    return roc[j - 1].fpr + t * (roc[j].fpr - roc[j - 1].fpr);
  }
  return roc.back().fpr;
}

inline double trapezoid_area(const std::vector<RocPoint>& roc) {
  double area = 0.0;
  for (std::size_t j = 1; j < roc.size(); ++j) {
    area += (roc[j].fpr - roc[j - 1].fpr) * (roc[j].tpr + roc[j - 1].tpr) * 0.5;
  }
  return area;
}

inline void write_roc_csv(std::ostream& out, const std::vector<RocPoint>& roc) {
  out << "fpr,tpr\n";
  for (const auto& p : roc) out << p.fpr << ',' << p.tpr << '\n';
}

}  // namespace freqids
