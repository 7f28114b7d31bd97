#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "forge/errors.hpp"
#include "forge/graph.hpp"
#include "forge/partition.hpp"
#include "forge/rng.hpp"

namespace forge {

// All nodes in community 0 ("no community detection" baseline).
inline Partition single_community(const Graph& g) {
  Partition p;
  p.assign.assign(g.node_count(), 0);
  p.k = g.node_count() > 0 ? 1 : 0;
  return p;
}

namespace detail {

// Working graph for Louvain levels. Aggregated levels carry self-loop weight
// (total internal edge weight of the merged community).
struct LevelGraph {
  std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;
  std::vector<double> self_w;
  std::vector<double> wdeg;  // sum of incident weights + 2*self_w
  double m = 0;

  std::size_t size() const { return adj.size(); }
};

inline LevelGraph level_from(const Graph& g) {
  LevelGraph lg;
  lg.adj.resize(g.node_count());
  lg.self_w.assign(g.node_count(), 0.0);
  lg.wdeg.assign(g.node_count(), 0.0);
  for (std::uint32_t v = 0; v < g.node_count(); ++v) {
    lg.adj[v].assign(g.neighbors(v).begin(), g.neighbors(v).end());
    lg.wdeg[v] = g.weighted_degree(v);
  }
  lg.m = g.total_weight();
  return lg;
}

// One pass of local moving; returns number of moves. Ties (and no strict
// improvement) keep the current community.
inline std::size_t louvain_local_pass(const LevelGraph& lg, std::vector<std::uint32_t>& comm,
                                      std::vector<double>& tot, const std::vector<std::uint32_t>& order,
                                      double resolution) {
  std::size_t moves = 0;
  std::vector<double> w_to(lg.size(), 0.0);
  std::vector<std::uint32_t> touched;
  for (const auto v : order) {
    const auto old_c = comm[v];
    touched.clear();
    for (const auto& [u, w] : lg.adj[v]) {
      const auto cu = comm[u];
      if (w_to[cu] == 0.0) touched.push_back(cu);
      w_to[cu] += w;
    }
    if (w_to[old_c] == 0.0) touched.push_back(old_c);
    tot[old_c] -= lg.wdeg[v];
    std::sort(touched.begin(), touched.end());
    const double kv = lg.wdeg[v];
    auto gain = [&](std::uint32_t c) { return w_to[c] - resolution * kv * tot[c] / (2.0 * lg.m); };
    std::uint32_t best = old_c;
    double best_gain = gain(old_c);
    for (const auto c : touched) {
      if (c == old_c) continue;
      const double gc = gain(c);
      if (gc > best_gain) {
        best = c;
        best_gain = gc;
      }
    }
    tot[best] += lg.wdeg[v];
    if (best != old_c) {
      comm[v] = best;
      ++moves;
    }
    for (const auto c : touched) w_to[c] = 0.0;
  }
  return moves;
}

inline LevelGraph aggregate(const LevelGraph& lg, const std::vector<std::uint32_t>& comm,
                            std::uint32_t k) {
  LevelGraph out;
  out.adj.resize(k);
  out.self_w.assign(k, 0.0);
  out.wdeg.assign(k, 0.0);
  out.m = lg.m;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> buckets(k);
  for (std::uint32_t v = 0; v < lg.size(); ++v) {
    out.self_w[comm[v]] += lg.self_w[v];
    for (const auto& [u, w] : lg.adj[v]) {
      if (u < v) continue;  // each undirected edge once
      if (comm[v] == comm[u]) {
        out.self_w[comm[v]] += w;
      } else {
        buckets[comm[v]].emplace_back(comm[u], w);
        buckets[comm[u]].emplace_back(comm[v], w);
      }
    }
  }
  for (std::uint32_t c = 0; c < k; ++c) {
    auto& b = buckets[c];
    std::sort(b.begin(), b.end());
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (!out.adj[c].empty() && out.adj[c].back().first == b[i].first) {
        out.adj[c].back().second += b[i].second;
      } else {
        out.adj[c].push_back(b[i]);
      }
    }
    out.wdeg[c] = 2.0 * out.self_w[c];
    for (const auto& [u, w] : out.adj[c]) {
      (void)u;
      out.wdeg[c] += w;
    }
  }
  return out;
}

inline double level_modularity(const LevelGraph& lg, const std::vector<std::uint32_t>& comm,
                               std::uint32_t k) {
  std::vector<double> in_w(k, 0.0), tot(k, 0.0);
  for (std::uint32_t v = 0; v < lg.size(); ++v) {
    tot[comm[v]] += lg.wdeg[v];
    in_w[comm[v]] += lg.self_w[v];
    for (const auto& [u, w] : lg.adj[v])
      if (u > v && comm[u] == comm[v]) in_w[comm[v]] += w;
  }
  double q = 0;
  for (std::uint32_t c = 0; c < k; ++c) {
    const double frac = tot[c] / (2.0 * lg.m);
    q += in_w[c] / lg.m - frac * frac;
  }
  return q;
}

}  // namespace detail

// Two-phase Louvain: local moving to modularity convergence, then graph
// aggregation, repeated until a level produces no move. Node visit order is
// shuffled by the seed, so runs are deterministic per seed. The optional
// trace receives the global modularity after each level.
inline Partition louvain(const Graph& g, std::uint64_t seed, double resolution = 1.0,
                         std::vector<double>* trace = nullptr) {
  if (g.total_weight() <= 0) throw ValidationError("louvain requires a graph with at least one edge");
  Rng rng(Rng::derive(seed, 0x6c6f7576ull));
  auto lg = detail::level_from(g);
  // node_of_original[v]: meta-node of original node v in the current level
  std::vector<std::uint32_t> node_of(g.node_count());
  std::iota(node_of.begin(), node_of.end(), 0u);

  for (;;) {
    std::vector<std::uint32_t> comm(lg.size());
    std::iota(comm.begin(), comm.end(), 0u);
    std::vector<double> tot = lg.wdeg;
    std::vector<std::uint32_t> order(lg.size());
    std::iota(order.begin(), order.end(), 0u);
    rng.shuffle(order);

    std::size_t total_moves = 0;
    for (;;) {
      const auto moves = detail::louvain_local_pass(lg, comm, tot, order, resolution);
      total_moves += moves;
      if (moves == 0) break;
    }

    // dense relabel of level communities
    std::vector<std::uint32_t> relabel(lg.size(), UINT32_MAX);
    std::uint32_t k = 0;
    for (auto& c : comm) {
      if (relabel[c] == UINT32_MAX) relabel[c] = k++;
      c = relabel[c];
    }
    for (auto& nv : node_of) nv = comm[nv];
    if (trace) trace->push_back(detail::level_modularity(lg, comm, k));
    if (total_moves == 0 || k == lg.size()) break;
    lg = detail::aggregate(lg, comm, k);
  }

  Partition p;
  p.assign = node_of;
  for (auto c : p.assign) p.k = std::max(p.k, c + 1);
  return canonicalize(p);
}

// Asynchronous label propagation: in seed-shuffled order each node adopts the
// most frequent (weight-summed) label among its neighbors, ties broken
// uniformly at random. Stops when a round changes nothing or at max_rounds.
inline Partition label_propagation(const Graph& g, std::uint64_t seed, std::size_t max_rounds = 100) {
  Rng rng(Rng::derive(seed, 0x6c616270ull));
  const std::size_t n = g.node_count();
  Partition p;
  p.assign.resize(n);
  std::iota(p.assign.begin(), p.assign.end(), 0u);
  p.k = static_cast<std::uint32_t>(n);
  if (n == 0) return p;

  std::vector<double> weight_of(n, 0.0);
  std::vector<std::uint32_t> touched, best;
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);

  for (std::size_t round = 0; round < max_rounds; ++round) {
    rng.shuffle(order);
    bool changed = false;
    for (const auto v : order) {
      if (g.degree(v) == 0) continue;
      touched.clear();
      for (const auto& [u, w] : g.neighbors(v)) {
        const auto lu = p.assign[u];
        if (weight_of[lu] == 0.0) touched.push_back(lu);
        weight_of[lu] += w;
      }
      std::sort(touched.begin(), touched.end());
      double max_w = 0;
      for (const auto l : touched) max_w = std::max(max_w, weight_of[l]);
      best.clear();
      for (const auto l : touched)
        if (weight_of[l] == max_w) best.push_back(l);
      const auto chosen = best.size() == 1 ? best[0] : best[rng.index(best.size())];
      if (chosen != p.assign[v]) {
        p.assign[v] = chosen;
        changed = true;
      }
      for (const auto l : touched) weight_of[l] = 0.0;
    }
    if (!changed) break;
  }
  return canonicalize(p);
}

}  // namespace forge
