#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/errors.hpp"
#include "forge/rng.hpp"

namespace forge {

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  double value = 0;
};

struct RegressionTree {
  std::vector<TreeNode> nodes;

  double predict(const std::vector<double>& x) const {
    std::int32_t i = 0;
    while (nodes[i].feature >= 0)
      i = x[static_cast<std::size_t>(nodes[i].feature)] <= nodes[i].threshold ? nodes[i].left
                                                                              : nodes[i].right;
    return nodes[i].value;
  }

  bool is_stump() const { return nodes.size() == 1; }
};

struct GbrtParams {
  std::size_t n_trees = 200;
  std::size_t max_depth = 4;
  double learning_rate = 0.1;
  std::size_t min_samples_leaf = 5;
};

namespace detail {

struct SplitChoice {
  bool found = false;
  std::size_t feature = 0;
  double threshold = 0;
  double sse_after = 0;
};

// Best variance-reduction split over all features; candidate thresholds are
// midpoints between consecutive distinct values. First-found wins on exact
// SSE ties, so smaller feature index, then smaller threshold.
inline SplitChoice best_split(const std::vector<std::vector<double>>& x,
                              const std::vector<double>& resid,
                              const std::vector<std::size_t>& rows, std::size_t min_leaf) {
  SplitChoice best;
  const std::size_t n = rows.size();
  if (n < 2 * min_leaf) return best;
  const std::size_t d = x[rows[0]].size();
  double best_sse = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, double>> vals(n);  // (feature value, residual)
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < n; ++i) vals[i] = {x[rows[i]][j], resid[rows[i]]};
    std::sort(vals.begin(), vals.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    if (vals.front().first == vals.back().first) continue;
    double sum_left = 0, sq_left = 0, sum_all = 0, sq_all = 0;
    for (const auto& [v, r] : vals) {
      (void)v;
      sum_all += r;
      sq_all += r * r;
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      sum_left += vals[i].second;
      sq_left += vals[i].second * vals[i].second;
      if (vals[i].first == vals[i + 1].first) continue;  // split only between distinct values
      const std::size_t n_left = i + 1, n_right = n - n_left;
      if (n_left < min_leaf || n_right < min_leaf) continue;
      const double sum_right = sum_all - sum_left, sq_right = sq_all - sq_left;
      const double sse = (sq_left - sum_left * sum_left / static_cast<double>(n_left)) +
                         (sq_right - sum_right * sum_right / static_cast<double>(n_right));
      if (sse < best_sse) {
        best_sse = sse;
        best.found = true;
        best.feature = j;
        best.threshold = vals[i].first + (vals[i + 1].first - vals[i].first) / 2.0;
        best.sse_after = sse;
      }
    }
  }
  return best;
}

inline std::int32_t grow_node(RegressionTree& tree, const std::vector<std::vector<double>>& x,
                              const std::vector<double>& resid, std::vector<std::size_t> rows,
                              std::size_t depth, const GbrtParams& prm) {
  double mean = 0;
  for (const auto r : rows) mean += resid[r];
  mean /= static_cast<double>(rows.size());

  const auto idx = static_cast<std::int32_t>(tree.nodes.size());
  tree.nodes.push_back({});
  tree.nodes[idx].value = mean;
  if (depth >= prm.max_depth) return idx;

  const auto split = best_split(x, resid, rows, prm.min_samples_leaf);
  if (!split.found) return idx;
  double sse_before = 0;
  for (const auto r : rows) sse_before += (resid[r] - mean) * (resid[r] - mean);
  if (!(split.sse_after < sse_before)) return idx;

  std::vector<std::size_t> left_rows, right_rows;
  for (const auto r : rows)
    (x[r][split.feature] <= split.threshold ? left_rows : right_rows).push_back(r);
  if (left_rows.size() < prm.min_samples_leaf || right_rows.size() < prm.min_samples_leaf)
    return idx;  // threshold rounded onto a value boundary
  rows.clear();
  rows.shrink_to_fit();
  tree.nodes[idx].feature = static_cast<std::int32_t>(split.feature);
  tree.nodes[idx].threshold = split.threshold;
  const auto l = grow_node(tree, x, resid, std::move(left_rows), depth + 1, prm);
  tree.nodes[idx].left = l;
  const auto r = grow_node(tree, x, resid, std::move(right_rows), depth + 1, prm);
  tree.nodes[idx].right = r;
  return idx;
}

}  // namespace detail

inline RegressionTree fit_tree(const std::vector<std::vector<double>>& x,
                               const std::vector<double>& resid, const GbrtParams& prm) {
  RegressionTree tree;
  std::vector<std::size_t> rows(x.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  detail::grow_node(tree, x, resid, std::move(rows), 0, prm);
  return tree;
}

struct GbrtModel {
  GbrtParams params;
  double base_score = 0;
  std::vector<RegressionTree> trees;
  std::vector<std::string> feature_names;
  std::string target_name;

  double predict(const std::vector<double>& x) const {
    double s = base_score;
    for (const auto& t : trees) s += params.learning_rate * t.predict(x);
    return s;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["base_score"] = base_score;
    j["learning_rate"] = params.learning_rate;
    j["max_depth"] = params.max_depth;
    j["min_samples_leaf"] = params.min_samples_leaf;
    j["feature_names"] = feature_names;
    j["target_name"] = target_name;
    auto trees_j = nlohmann::json::array();
    for (const auto& t : trees) {
      auto nodes = nlohmann::json::array();
      for (const auto& nd : t.nodes)
        nodes.push_back({{"feature", nd.feature},
                         {"threshold", nd.threshold},
                         {"left", nd.left},
                         {"right", nd.right},
                         {"value", nd.value}});
      trees_j.push_back(std::move(nodes));
    }
    j["trees"] = std::move(trees_j);
    return j;
  }

  static GbrtModel from_json(const nlohmann::json& j) {
    GbrtModel m;
    m.base_score = j.at("base_score").get<double>();
    m.params.learning_rate = j.at("learning_rate").get<double>();
    m.params.max_depth = j.at("max_depth").get<std::size_t>();
    m.params.min_samples_leaf = j.at("min_samples_leaf").get<std::size_t>();
    m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    m.target_name = j.at("target_name").get<std::string>();
    for (const auto& tj : j.at("trees")) {
      RegressionTree t;
      for (const auto& nj : tj) {
        TreeNode nd;
        nd.feature = nj.at("feature").get<std::int32_t>();
        nd.threshold = nj.at("threshold").get<double>();
        nd.left = nj.at("left").get<std::int32_t>();
        nd.right = nj.at("right").get<std::int32_t>();
        nd.value = nj.at("value").get<double>();
        t.nodes.push_back(nd);
      }
      m.trees.push_back(std::move(t));
    }
    m.params.n_trees = m.trees.size();
    return m;
  }
};

// Least-squares gradient boosting: base score = target mean, then residual-
// fitting trees with shrinkage. Stops early once residuals are numerically
// zero or a round yields a zero-value stump (constant target keeps 0 trees).
// Rows are refit in a canonical sort order, so the model is bit-identical
// under any permutation of the training rows.
inline GbrtModel fit_gbrt(const std::vector<std::vector<double>>& x_in,
                          const std::vector<double>& y_in, const GbrtParams& prm = {}) {
  if (x_in.size() != y_in.size() || x_in.empty()) throw ValidationError("gbrt: bad training data");
  if (x_in.size() < 2 * prm.min_samples_leaf)
    throw ValidationError("gbrt: need at least " + std::to_string(2 * prm.min_samples_leaf) +
                          " rows");
  std::vector<std::size_t> ord(x_in.size());
  std::iota(ord.begin(), ord.end(), std::size_t{0});
  std::sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) {
    if (x_in[a] != x_in[b]) return x_in[a] < x_in[b];
    return y_in[a] < y_in[b];
  });
  std::vector<std::vector<double>> x;
  x.reserve(ord.size());
  std::vector<double> y;
  y.reserve(ord.size());
  for (const auto i : ord) {
    x.push_back(x_in[i]);
    y.push_back(y_in[i]);
  }

  GbrtModel m;
  m.params = prm;
  double mean = 0;
  for (const auto v : y) mean += v;
  m.base_score = mean / static_cast<double>(y.size());

  std::vector<double> pred(y.size(), m.base_score);
  std::vector<double> resid(y.size());
  for (std::size_t round = 0; round < prm.n_trees; ++round) {
    double max_abs = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      resid[i] = y[i] - pred[i];
      max_abs = std::max(max_abs, std::fabs(resid[i]));
    }
    if (max_abs <= 1e-12) break;
    auto tree = fit_tree(x, resid, prm);
    if (tree.is_stump() && std::fabs(tree.nodes[0].value) <= 1e-15) break;
    for (std::size_t i = 0; i < y.size(); ++i)
      pred[i] += prm.learning_rate * tree.predict(x[i]);
    m.trees.push_back(std::move(tree));
  }
  return m;
}

}  // namespace forge
