#pragma once

// Synthetic anomaly benchmark: a planted-block graph where a random 10% of
// nodes have every incident edge re-pointed at a uniformly random node in a
// different block. Rewired nodes keep their degree but lose their block
// affinity, so community-aware features can separate them while the labels
// stay independent of node ids.

#include <cstdint>
#include <vector>

#include "forge/graph.hpp"
#include "forge/partition.hpp"
#include "forge/rng.hpp"

namespace synthetic {

struct AnomalyBenchmark {
  forge::Graph graph;
  forge::Partition truth;       // planted blocks
  forge::NodeLabels labels;     // 1 = rewired
};

inline AnomalyBenchmark make_anomaly_benchmark(std::uint64_t seed, std::size_t blocks = 4,
                                               std::size_t block_size = 50, double p_in = 0.3,
                                               double p_out = 0.01) {
  auto planted = forge::planted_partition(blocks, block_size, p_in, p_out, seed);
  const std::size_t n = planted.graph.node_count();

  AnomalyBenchmark b;
  b.truth = planted.ground_truth;
  b.labels.assign(n, 0);
  forge::Rng rng(forge::Rng::derive(seed, 0x616e6f6dull));
  for (const auto i : rng.sample_indices(n, n / 10)) b.labels[i] = 1;

  auto cross_block_target = [&](std::uint32_t from) {
    for (;;) {
      const auto t = static_cast<std::uint32_t>(rng.index(n));
      if (b.truth.assign[t] != b.truth.assign[from]) return t;
    }
  };

  std::vector<forge::Edge> edges;
  edges.reserve(planted.graph.edges().size());
  for (const auto& e : planted.graph.edges()) {
    forge::Edge out = e;
    if (b.labels[e.u]) out.v = cross_block_target(e.u);
    else if (b.labels[e.v]) out.u = cross_block_target(e.v);
    edges.push_back(out);
  }
  b.graph = forge::Graph::build(n, std::move(edges));
  return b;
}

}  // namespace synthetic
