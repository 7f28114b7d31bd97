#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "forge/archive.hpp"
#include "forge/augment.hpp"
#include "forge/errors.hpp"
#include "forge/eval.hpp"
#include "forge/graph.hpp"
#include "forge/linear.hpp"
#include "forge/metrics.hpp"
#include "forge/partition.hpp"
#include "forge/rng.hpp"

namespace forge {

// Per-node feature row for the anomaly classifier:
//   f1  community membership count (primary + auxiliary)
//   f2  f1 / neighbor count (0 for isolated nodes)
//   f3  1 - whole-graph local clustering coefficient
//   f4  degree / weighted degree (1 for isolated nodes)
//   f5  cliqueness of the main community (unweighted induced density)
//   f6  starkness of the main community (degree centralization)
struct AnomalyFeatureTable {
  std::vector<std::array<double, 6>> rows;
  std::size_t isolated_nodes = 0;  // f2 fallback applied
};

// Local clustering coefficient per node on the whole graph, unweighted.
inline std::vector<double> local_clustering(const Graph& g) {
  const std::uint32_t n = g.node_count();
  std::vector<double> cc(n, 0.0);
  std::vector<std::uint32_t> stamp(n, UINT32_MAX);
  for (std::uint32_t v = 0; v < n; ++v) {
    const auto deg = g.degree(v);
    if (deg < 2) continue;
    for (const auto& [u, w] : g.neighbors(v)) {
      (void)w;
      stamp[u] = v;
    }
    std::size_t wedges = 0;
    for (const auto& [u, w] : g.neighbors(v)) {
      (void)w;
      for (const auto& [t, w2] : g.neighbors(u)) {
        (void)w2;
        if (t != v && stamp[t] == v) ++wedges;
      }
    }
    const double d = static_cast<double>(deg);
    cc[v] = static_cast<double>(wedges) / (d * (d - 1.0));  // wedges counts each triangle twice
  }
  return cc;
}

inline AnomalyFeatureTable anomaly_features(const Graph& g, const Partition& p) {
  detail::check_partition(g, p);
  const auto aug = augment(g, p);
  const auto cc = local_clustering(g);
  const auto stats = community_stats(g, p);

  std::vector<double> cliqueness(p.k, 0.0);
  for (std::uint32_t c = 0; c < p.k; ++c) {
    const auto sz = static_cast<double>(stats[c].size);
    cliqueness[c] =
        stats[c].size >= 2
            ? 2.0 * static_cast<double>(stats[c].internal_edge_count) / (sz * (sz - 1.0))
            : 0.0;
  }

  AnomalyFeatureTable out;
  out.rows.resize(g.node_count());
  for (std::uint32_t v = 0; v < g.node_count(); ++v) {
    const auto deg = static_cast<double>(g.degree(v));
    const auto f1 = static_cast<double>(aug.membership_count(v));
    double f2 = 0;
    if (g.degree(v) > 0)
      f2 = f1 / deg;
    else
      ++out.isolated_nodes;
    const double f3 = 1.0 - cc[v];
    const double wdeg = g.weighted_degree(v);
    const double f4 = wdeg > 0 ? deg / wdeg : 1.0;
    const auto c = p.assign[v];
    out.rows[v] = {f1, f2, f3, f4, cliqueness[c], stats[c].centralization};
  }
  return out;
}

// Stratified k-fold evaluation of the thresholded linear regression.
// Per fold: standardize on train, OLS-fit the 0/1 label, pick the threshold
// maximizing anomaly-class F1 on train scores, classify test by score >= t.
// Per-class precision/recall/F1 are fold averages; supports and accuracy are
// pooled over test folds; AUC is the fold average of the rank AUC.
inline TaskResult train_eval_anomaly(const Graph& g, const Partition& p, const NodeLabels& labels,
                                     std::size_t folds = 5, std::uint64_t seed = 0,
                                     std::size_t* ridge_folds = nullptr) {
  if (labels.size() != g.node_count()) throw ValidationError("labels do not cover the graph");
  std::size_t n1 = 0;
  for (const auto l : labels) n1 += static_cast<std::size_t>(l == 1);
  if (n1 == 0 || n1 == labels.size())
    throw ValidationError("anomaly task needs both classes present");
  if (n1 < folds || labels.size() - n1 < folds)
    throw ValidationError("a fold would miss a class; use fewer folds (have " +
                          std::to_string(std::min(n1, labels.size() - n1)) +
                          " of the rarer class)");

  const auto table = anomaly_features(g, p);
  Rng fold_rng(Rng::derive(seed, 0x666f6c64ull));
  const auto fold_of = stratified_folds(labels, folds, fold_rng);

  TaskResult res;
  res.folds = folds;
  ConfusionCounts pooled;
  double prf_acc[2][3] = {{0, 0, 0}, {0, 0, 0}};
  double auc_acc = 0;
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<std::vector<double>> train_x;
    std::vector<double> train_y;
    std::vector<std::size_t> test_ids;
    for (std::size_t v = 0; v < labels.size(); ++v) {
      if (fold_of[v] == f) {
        test_ids.push_back(v);
      } else {
        train_x.emplace_back(table.rows[v].begin(), table.rows[v].end());
        train_y.push_back(static_cast<double>(labels[v]));
      }
    }
    const auto scaler = Standardizer::fit(train_x);
    for (auto& r : train_x) r = scaler.apply(r);
    const auto model = ols_fit(train_x, train_y);
    if (model.used_ridge_fallback && ridge_folds) ++*ridge_folds;

    std::vector<double> train_scores(train_x.size());
    std::vector<int> train_labels(train_x.size());
    for (std::size_t i = 0; i < train_x.size(); ++i) {
      train_scores[i] = model.score(train_x[i]);
      train_labels[i] = train_y[i] != 0.0 ? 1 : 0;
    }
    const double t = best_f1_threshold(train_scores, train_labels);

    ConfusionCounts fold_counts;
    std::vector<double> test_scores;
    std::vector<int> test_labels;
    for (const auto v : test_ids) {
      const std::vector<double> raw(table.rows[v].begin(), table.rows[v].end());
      const double s = model.score(scaler.apply(raw));
      const int pred = s >= t ? 1 : 0;
      fold_counts.add(labels[v], pred);
      pooled.add(labels[v], pred);
      test_scores.push_back(s);
      test_labels.push_back(labels[v]);
    }
    for (int cls = 0; cls <= 1; ++cls) {
      const auto m = class_metrics(fold_counts, cls);
      prf_acc[cls][0] += m.precision;
      prf_acc[cls][1] += m.recall;
      prf_acc[cls][2] += m.f1;
    }
    auc_acc += rank_auc(test_scores, test_labels);
  }
  const double fk = static_cast<double>(folds);
  for (int cls = 0; cls <= 1; ++cls) {
    res.cls[cls].precision = prf_acc[cls][0] / fk;
    res.cls[cls].recall = prf_acc[cls][1] / fk;
    res.cls[cls].f1 = prf_acc[cls][2] / fk;
    res.cls[cls].support = cls == 1 ? pooled.tp + pooled.fn : pooled.tn + pooled.fp;
  }
  const auto total = pooled.tp + pooled.fp + pooled.tn + pooled.fn;
  res.accuracy = static_cast<double>(pooled.tp + pooled.tn) / static_cast<double>(total);
  res.auc = auc_acc / fk;
  return res;
}

// Fixed fold seed across the pool so result differences come from the
// partitions alone; per-solution failures are recorded, the sweep continues.
inline std::vector<PoolEvalRow> evaluate_pool_anomaly(const ArchiveView& av, const Graph& g,
                                                      const NodeLabels& labels,
                                                      std::size_t folds = 5,
                                                      std::uint64_t seed = 0) {
  if (av.rows.empty()) throw ValidationError("empty archive");
  std::vector<PoolEvalRow> out;
  out.reserve(av.rows.size());
  for (std::size_t i = 0; i < av.rows.size(); ++i) {
    PoolEvalRow row;
    row.id = av.rows[i].id;
    try {
      row.result = train_eval_anomaly(g, av.load_partition(i), labels, folds, seed);
      row.ok = true;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace forge
