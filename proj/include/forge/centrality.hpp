#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "forge/errors.hpp"
#include "forge/graph.hpp"

namespace forge {

// Unweighted induced subgraph over `members` with local 0..m-1 ids.
struct InducedSubgraph {
  std::vector<std::uint32_t> members;           // local -> global
  std::vector<std::vector<std::uint32_t>> adj;  // local ids

  static InducedSubgraph build(const Graph& g, const std::vector<std::uint32_t>& members) {
    InducedSubgraph s;
    s.members = members;
    std::vector<std::uint32_t> local(g.node_count(), UINT32_MAX);
    for (std::uint32_t i = 0; i < members.size(); ++i) local[members[i]] = i;
    s.adj.resize(members.size());
    for (std::uint32_t i = 0; i < members.size(); ++i) {
      for (const auto& [u, w] : g.neighbors(members[i])) {
        (void)w;
        if (local[u] != UINT32_MAX) s.adj[i].push_back(local[u]);
      }
    }
    return s;
  }
};

// Exact Brandes betweenness on an unweighted graph; endpoint pairs counted
// once per unordered pair (the usual undirected halving).
inline std::vector<double> betweenness(const InducedSubgraph& s) {
  const std::size_t n = s.members.size();
  std::vector<double> bc(n, 0.0);
  std::vector<std::int64_t> dist(n);
  std::vector<double> sigma(n), delta(n);
  std::vector<std::vector<std::uint32_t>> preds(n);
  std::vector<std::uint32_t> stack_order;
  std::deque<std::uint32_t> queue;
  for (std::uint32_t src = 0; src < n; ++src) {
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    for (auto& p : preds) p.clear();
    stack_order.clear();
    queue.clear();
    dist[src] = 0;
    sigma[src] = 1;
    queue.push_back(src);
    while (!queue.empty()) {
      const auto v = queue.front();
      queue.pop_front();
      stack_order.push_back(v);
      for (const auto u : s.adj[v]) {
        if (dist[u] < 0) {
          dist[u] = dist[v] + 1;
          queue.push_back(u);
        }
        if (dist[u] == dist[v] + 1) {
          sigma[u] += sigma[v];
          preds[u].push_back(v);
        }
      }
    }
    for (auto it = stack_order.rbegin(); it != stack_order.rend(); ++it) {
      const auto w = *it;
      for (const auto v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != src) bc[w] += delta[w];
    }
  }
  for (auto& x : bc) x /= 2.0;
  return bc;
}

// Harmonic closeness: sum of 1/d(v,u) over reachable u != v, so disconnected
// induced subgraphs stay well-defined.
inline std::vector<double> harmonic_closeness(const InducedSubgraph& s) {
  const std::size_t n = s.members.size();
  std::vector<double> hc(n, 0.0);
  std::vector<std::int64_t> dist(n);
  std::deque<std::uint32_t> queue;
  for (std::uint32_t src = 0; src < n; ++src) {
    std::fill(dist.begin(), dist.end(), -1);
    queue.clear();
    dist[src] = 0;
    queue.push_back(src);
    double acc = 0;
    while (!queue.empty()) {
      const auto v = queue.front();
      queue.pop_front();
      if (v != src) acc += 1.0 / static_cast<double>(dist[v]);
      for (const auto u : s.adj[v])
        if (dist[u] < 0) {
          dist[u] = dist[v] + 1;
          queue.push_back(u);
        }
    }
    hc[src] = acc;
  }
  return hc;
}

}  // namespace forge
