#pragma once

#include <cstdint>
#include <vector>

#include "forge/graph.hpp"
#include "forge/partition.hpp"

namespace forge {

// Membership model for the anomaly task: on top of the primary partition, one
// auxiliary community per cross-community edge, holding exactly that edge's
// two endpoints. A node's membership count is 1 plus its incident cross edges.
struct AugmentedMembership {
  std::vector<std::uint32_t> primary;
  std::vector<std::vector<std::uint32_t>> auxiliary;  // per node: auxiliary community ids
  std::size_t aux_count = 0;

  std::size_t membership_count(std::uint32_t v) const { return 1 + auxiliary[v].size(); }
};

inline AugmentedMembership augment(const Graph& g, const Partition& p) {
  if (p.assign.size() != g.node_count()) throw ValidationError("augment: partition/graph size mismatch");
  AugmentedMembership m;
  m.primary = p.assign;
  m.auxiliary.resize(g.node_count());
  for (const auto& e : g.edges()) {
    if (p.assign[e.u] != p.assign[e.v]) {
      const auto aux_id = static_cast<std::uint32_t>(m.aux_count++);
      m.auxiliary[e.u].push_back(aux_id);
      m.auxiliary[e.v].push_back(aux_id);
    }
  }
  return m;
}

}  // namespace forge
