#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "forge/errors.hpp"
#include "forge/rng.hpp"

namespace forge {

struct ClassMetrics {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  std::size_t support = 0;
};

struct TaskResult {
  ClassMetrics cls[2];
  double accuracy = 0;
  double auc = 0;
  std::size_t folds = 0;
};

// One archive solution's downstream evaluation, or the error that stopped it.
struct PoolEvalRow {
  std::uint64_t id = 0;
  bool ok = false;
  TaskResult result;
  std::string error;
};

struct ConfusionCounts {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

  void add(int truth, int pred) {
    if (truth == 1)
      pred == 1 ? ++tp : ++fn;
    else
      pred == 1 ? ++fp : ++tn;
  }
};

// Precision/recall/F1 of class `positive` from counts oriented to class 1.
inline ClassMetrics class_metrics(const ConfusionCounts& c, int positive) {
  const double tp = positive == 1 ? static_cast<double>(c.tp) : static_cast<double>(c.tn);
  const double fp = positive == 1 ? static_cast<double>(c.fp) : static_cast<double>(c.fn);
  const double fn = positive == 1 ? static_cast<double>(c.fn) : static_cast<double>(c.fp);
  ClassMetrics m;
  m.support = positive == 1 ? c.tp + c.fn : c.tn + c.fp;
  m.precision = tp + fp > 0 ? tp / (tp + fp) : 0.0;
  m.recall = tp + fn > 0 ? tp / (tp + fn) : 0.0;
  m.f1 = m.precision + m.recall > 0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
  return m;
}

// Rank AUC of scores for class 1 with average ranks on ties; equals the
// Mann-Whitney U statistic normalized by n1*n0.
inline double rank_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size()) throw ValidationError("auc: size mismatch");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  std::vector<double> rank(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
    i = j + 1;
  }
  double rank_sum_pos = 0;
  std::size_t n1 = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (labels[k] == 1) {
      rank_sum_pos += rank[k];
      ++n1;
    }
  }
  const std::size_t n0 = n - n1;
  if (n1 == 0 || n0 == 0) throw ValidationError("auc: needs both classes");
  const double u = rank_sum_pos - static_cast<double>(n1) * (static_cast<double>(n1) + 1.0) / 2.0;
  return u / (static_cast<double>(n1) * static_cast<double>(n0));
}

// Threshold over the given scores maximizing F1 of class 1 with rule
// pred = (score >= t). Candidates are the unique score values; ties in F1
// resolve to the smallest threshold.
inline double best_f1_threshold(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.empty()) throw ValidationError("threshold scan: empty scores");
  std::vector<double> uniq = scores;
  std::sort(uniq.begin(), uniq.end());
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
  double best_t = uniq.front();
  double best_f1 = -1;
  for (const double t : uniq) {
    ConfusionCounts c;
    for (std::size_t k = 0; k < scores.size(); ++k) c.add(labels[k], scores[k] >= t ? 1 : 0);
    const double f1 = class_metrics(c, 1).f1;
    if (f1 > best_f1) {
      best_f1 = f1;
      best_t = t;
    }
  }
  return best_t;
}

// Stratified k-fold assignment: per class, members are shuffled and dealt
// round-robin, so fold class counts differ by at most one.
template <class LabelVec>
inline std::vector<std::size_t> stratified_folds(const LabelVec& labels, std::size_t folds,
                                                 Rng& rng) {
  if (folds < 2) throw ValidationError("folds must be >= 2");
  std::vector<std::size_t> fold_of(labels.size(), 0);
  for (int cls = 0; cls <= 1; ++cls) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == cls) members.push_back(i);
    rng.shuffle(members);
    for (std::size_t j = 0; j < members.size(); ++j) fold_of[members[j]] = j % folds;
  }
  return fold_of;
}

}  // namespace forge
