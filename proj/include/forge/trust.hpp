#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "forge/archive.hpp"
#include "forge/centrality.hpp"
#include "forge/errors.hpp"
#include "forge/eval.hpp"
#include "forge/graph.hpp"
#include "forge/linear.hpp"
#include "forge/partition.hpp"
#include "forge/rng.hpp"

namespace forge {

enum class CentralityChoice { betweenness, max_degree, max_trustor, max_trustee, max_closeness, random_node };

inline const char* to_string(CentralityChoice c) {
  switch (c) {
    case CentralityChoice::betweenness: return "betweenness";
    case CentralityChoice::max_degree: return "max_degree";
    case CentralityChoice::max_trustor: return "max_trustor";
    case CentralityChoice::max_trustee: return "max_trustee";
    case CentralityChoice::max_closeness: return "max_closeness";
    case CentralityChoice::random_node: return "random";
  }
  return "?";
}

inline CentralityChoice centrality_from_string(const std::string& s) {
  if (s == "betweenness") return CentralityChoice::betweenness;
  if (s == "max_degree") return CentralityChoice::max_degree;
  if (s == "max_trustor") return CentralityChoice::max_trustor;
  if (s == "max_trustee") return CentralityChoice::max_trustee;
  if (s == "max_closeness") return CentralityChoice::max_closeness;
  if (s == "random") return CentralityChoice::random_node;
  throw ValidationError("unknown centrality: '" + s + "'");
}

// Member maximizing the chosen centrality on the community's induced
// subgraph; ties go to the smallest node id. Trustor/trustee rank by out-/
// in-degree of the trust overlay restricted to members. `random` picks
// uniformly, seeded per community.
inline std::uint32_t community_center(const Graph& g, const Partition& p, std::uint32_t c,
                                      CentralityChoice choice, std::uint64_t seed) {
  const auto members = community_members(p, c);
  if (members.empty()) throw ValidationError("community_center: empty community");
  if (members.size() == 1) return members[0];

  if (choice == CentralityChoice::random_node) {
    Rng rng(Rng::derive(seed, 0x63656e7472ull, c));
    return members[rng.index(members.size())];
  }

  std::vector<double> score(members.size(), 0.0);
  if (choice == CentralityChoice::max_trustor || choice == CentralityChoice::max_trustee) {
    if (!g.has_trust())
      throw ValidationError("centrality '" + std::string(to_string(choice)) +
                            "' needs a trust overlay");
    std::vector<std::uint32_t> local(g.node_count(), UINT32_MAX);
    for (std::uint32_t i = 0; i < members.size(); ++i) local[members[i]] = i;
    for (const auto& [from, to] : g.trust_edges()) {
      if (local[from] == UINT32_MAX || local[to] == UINT32_MAX) continue;
      if (choice == CentralityChoice::max_trustor)
        score[local[from]] += 1.0;
      else
        score[local[to]] += 1.0;
    }
  } else {
    const auto sub = InducedSubgraph::build(g, members);
    if (choice == CentralityChoice::betweenness) {
      score = betweenness(sub);
    } else if (choice == CentralityChoice::max_closeness) {
      score = harmonic_closeness(sub);
    } else {
      for (std::uint32_t i = 0; i < members.size(); ++i)
        score[i] = static_cast<double>(sub.adj[i].size());
    }
  }
  std::uint32_t best = 0;
  for (std::uint32_t i = 1; i < members.size(); ++i)
    if (score[i] > score[best]) best = i;  // members ascend, so ties keep the smaller id
  return members[best];
}

struct PairFeatures {
  double sim_uv = 0;
  double sim_u_centerv = 0;
  double sim_v_centeru = 0;
  double same_community = 0;

  std::vector<double> as_row() const { return {sim_uv, sim_u_centerv, sim_v_centeru, same_community}; }
};

// Cosine similarity restricted to co-rated items; 0 when there are none or a
// restricted vector has zero norm.
inline double rating_cosine(const RatingsTable& ratings, std::uint32_t u, std::uint32_t v) {
  const auto& ru = ratings.by_user[u];
  const auto& rv = ratings.by_user[v];
  double dot = 0, nu = 0, nv = 0;
  std::size_t i = 0, j = 0;
  while (i < ru.size() && j < rv.size()) {
    if (ru[i].first < rv[j].first) {
      ++i;
    } else if (rv[j].first < ru[i].first) {
      ++j;
    } else {
      dot += ru[i].second * rv[j].second;
      nu += ru[i].second * ru[i].second;
      nv += rv[j].second * rv[j].second;
      ++i;
      ++j;
    }
  }
  if (nu <= 0 || nv <= 0) return 0.0;
  return dot / (std::sqrt(nu) * std::sqrt(nv));
}

struct PairFeatureResult {
  std::vector<PairFeatures> rows;
  std::size_t unrated_users = 0;  // pair endpoints with an empty rating vector
};

inline PairFeatureResult pair_features(const RatingsTable& ratings, const Partition& p,
                                       const std::vector<std::uint32_t>& centers,
                                       const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs) {
  PairFeatureResult out;
  out.rows.reserve(pairs.size());
  for (const auto& [u, v] : pairs) {
    PairFeatures f;
    f.sim_uv = rating_cosine(ratings, u, v);
    f.sim_u_centerv = rating_cosine(ratings, u, centers[p.assign[v]]);
    f.sim_v_centeru = rating_cosine(ratings, v, centers[p.assign[u]]);
    f.same_community = p.assign[u] == p.assign[v] ? 1.0 : 0.0;
    if (ratings.by_user[u].empty()) ++out.unrated_users;
    if (ratings.by_user[v].empty()) ++out.unrated_users;
    out.rows.push_back(f);
  }
  return out;
}

namespace detail {

// Directed non-edge pairs, disjoint from the trust overlay and each other.
// Falls back to full enumeration when the graph is too dense for rejection
// sampling to finish quickly.
inline std::vector<std::pair<std::uint32_t, std::uint32_t>> sample_negative_pairs(
    const Graph& g, const std::set<std::pair<std::uint32_t, std::uint32_t>>& forbidden,
    std::size_t want, Rng& rng) {
  const auto n = static_cast<std::uint64_t>(g.node_count());
  const std::uint64_t candidates = n * (n - 1) - static_cast<std::uint64_t>(forbidden.size());
  if (candidates < want)
    throw ValidationError("not enough non-trust pairs for negative sampling");
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  if (want * 2 > candidates) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> all;
    for (std::uint32_t u = 0; u < g.node_count(); ++u)
      for (std::uint32_t v = 0; v < g.node_count(); ++v)
        if (u != v && !forbidden.count({u, v})) all.push_back({u, v});
    rng.shuffle(all);
    out.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(want));
    return out;
  }
  while (out.size() < want) {
    const auto u = static_cast<std::uint32_t>(rng.index(g.node_count()));
    const auto v = static_cast<std::uint32_t>(rng.index(g.node_count()));
    if (u == v) continue;
    const std::pair<std::uint32_t, std::uint32_t> pr{u, v};
    if (forbidden.count(pr) || seen.count(pr)) continue;
    seen.insert(pr);
    out.push_back(pr);
  }
  return out;
}

}  // namespace detail

// Holdout evaluation of trust-edge prediction. Test positives are hidden
// from the trust overlay before centers are computed, negatives are sampled
// 1:1 and disjoint between train and test, and a logistic regression is fit
// on the four pair features (standardized on train).
inline TaskResult train_eval_trust(const Graph& g, const RatingsTable& ratings, const Partition& p,
                                   CentralityChoice choice, double holdout = 0.2,
                                   std::uint64_t seed = 0) {
  if (!g.has_trust() || g.trust_edges().size() < 10)
    throw ValidationError("trust task needs a trust overlay with at least 10 edges");
  if (holdout <= 0 || holdout >= 1) throw ValidationError("holdout must be in (0,1)");
  if (ratings.by_user.size() != g.node_count())
    throw ValidationError("ratings table does not cover the graph");
  detail::check_partition(g, p);

  auto edges = g.trust_edges();
  Rng split_rng(Rng::derive(seed, 0x73706c6974ull));
  split_rng.shuffle(edges);
  const auto n_test = std::max<std::size_t>(1, static_cast<std::size_t>(
                                                   static_cast<double>(edges.size()) * holdout));
  std::vector<std::pair<std::uint32_t, std::uint32_t>> test_pos(edges.begin(),
                                                                edges.begin() + n_test);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> train_pos(edges.begin() + n_test,
                                                                 edges.end());

  // centers see only the training-visible trust overlay
  Graph train_view = g;
  train_view.attach_trust(train_pos);
  std::vector<std::uint32_t> centers(p.k);
  for (std::uint32_t c = 0; c < p.k; ++c)
    centers[c] = community_center(train_view, p, c, choice, seed);

  std::set<std::pair<std::uint32_t, std::uint32_t>> forbidden(edges.begin(), edges.end());
  Rng neg_rng(Rng::derive(seed, 0x6e656761ull));
  const auto train_neg = detail::sample_negative_pairs(g, forbidden, train_pos.size(), neg_rng);
  for (const auto& pr : train_neg) forbidden.insert(pr);
  const auto test_neg = detail::sample_negative_pairs(g, forbidden, test_pos.size(), neg_rng);

  auto assemble = [&](const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pos,
                      const std::vector<std::pair<std::uint32_t, std::uint32_t>>& neg,
                      std::vector<std::vector<double>>& x, std::vector<int>& y) {
    auto pairs = pos;
    pairs.insert(pairs.end(), neg.begin(), neg.end());
    const auto feats = pair_features(ratings, p, centers, pairs);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      x.push_back(feats.rows[i].as_row());
      y.push_back(i < pos.size() ? 1 : 0);
    }
  };
  std::vector<std::vector<double>> train_x, test_x;
  std::vector<int> train_y, test_y;
  assemble(train_pos, train_neg, train_x, train_y);
  assemble(test_pos, test_neg, test_x, test_y);

  const auto scaler = Standardizer::fit(train_x);
  for (auto& r : train_x) r = scaler.apply(r);
  for (auto& r : test_x) r = scaler.apply(r);
  const auto model = logistic_fit(train_x, train_y);

  TaskResult res;
  res.folds = 1;
  ConfusionCounts counts;
  std::vector<double> scores(test_x.size());
  for (std::size_t i = 0; i < test_x.size(); ++i) {
    scores[i] = model.score(test_x[i]);
    counts.add(test_y[i], scores[i] >= 0 ? 1 : 0);
  }
  for (int cls = 0; cls <= 1; ++cls) res.cls[cls] = class_metrics(counts, cls);
  res.accuracy = static_cast<double>(counts.tp + counts.tn) /
                 static_cast<double>(counts.tp + counts.fp + counts.tn + counts.fn);
  res.auc = rank_auc(scores, test_y);
  return res;
}

// Shared holdout split (fixed seed) across the pool; failures recorded per
// solution without stopping the sweep.
inline std::vector<PoolEvalRow> evaluate_pool_trust(const ArchiveView& av, const Graph& g,
                                                    const RatingsTable& ratings,
                                                    CentralityChoice choice, double holdout = 0.2,
                                                    std::uint64_t seed = 0) {
  if (av.rows.empty()) throw ValidationError("empty archive");
  std::vector<PoolEvalRow> out;
  out.reserve(av.rows.size());
  for (std::size_t i = 0; i < av.rows.size(); ++i) {
    PoolEvalRow row;
    row.id = av.rows[i].id;
    try {
      row.result = train_eval_trust(g, ratings, av.load_partition(i), choice, holdout, seed);
      row.ok = true;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace forge
