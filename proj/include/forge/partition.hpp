#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "forge/errors.hpp"
#include "forge/io.hpp"
#include "forge/rng.hpp"

namespace forge {

// Total assignment of every node to exactly one community. Community ids are
// dense 0..k-1 after canonicalization; this is the unit the GA evolves.
struct Partition {
  std::vector<std::uint32_t> assign;
  std::uint32_t k = 0;

  std::size_t node_count() const { return assign.size(); }
};

// Relabels community ids to 0..k-1 in order of first appearance by node id.
// Partitions inducing the same set-partition map to identical assign arrays.
inline Partition canonicalize(const Partition& p) {
  Partition out;
  out.assign.resize(p.assign.size());
  std::uint32_t next = 0;
  std::vector<std::uint32_t> relabel;
  std::uint32_t max_id = 0;
  for (auto c : p.assign) max_id = std::max(max_id, c);
  relabel.assign(static_cast<std::size_t>(max_id) + 1, UINT32_MAX);
  for (std::size_t v = 0; v < p.assign.size(); ++v) {
    auto& r = relabel[p.assign[v]];
    if (r == UINT32_MAX) r = next++;
    out.assign[v] = r;
  }
  out.k = next;
  return out;
}

inline bool is_canonical(const Partition& p) {
  std::uint32_t seen = 0;
  for (auto c : p.assign) {
    if (c > seen) return false;
    if (c == seen) ++seen;
  }
  return seen == p.k;
}

inline bool same_set_partition(const Partition& a, const Partition& b) {
  if (a.assign.size() != b.assign.size()) return false;
  return canonicalize(a).assign == canonicalize(b).assign;
}

inline std::vector<std::vector<std::uint32_t>> community_members(const Partition& p) {
  std::vector<std::vector<std::uint32_t>> members(p.k);
  for (std::uint32_t v = 0; v < p.assign.size(); ++v) members[p.assign[v]].push_back(v);
  return members;
}

inline std::vector<std::uint32_t> community_members(const Partition& p, std::uint32_t c) {
  std::vector<std::uint32_t> members;
  for (std::uint32_t v = 0; v < p.assign.size(); ++v)
    if (p.assign[v] == c) members.push_back(v);
  return members;
}

// Uniform community count in [k_min, k_max], then each node assigned a
// community uniformly at random with no regard for edges. Canonicalization
// collapses empty communities, so the realized k may be lower.
inline Partition random_partition(std::size_t node_count, std::size_t k_min, std::size_t k_max,
                                  Rng& rng, bool* clamped = nullptr) {
  if (k_min < 1 || k_min > k_max) throw ValidationError("random_partition: need 1 <= k_min <= k_max");
  if (k_max > node_count && node_count > 0) {
    k_max = node_count;
    if (k_min > k_max) k_min = k_max;
    if (clamped) *clamped = true;
  }
  const std::size_t k = k_min + rng.index(k_max - k_min + 1);
  Partition p;
  p.assign.resize(node_count);
  for (auto& c : p.assign) c = static_cast<std::uint32_t>(rng.index(k));
  p.k = static_cast<std::uint32_t>(k);
  return canonicalize(p);
}

inline Partition random_partition(std::size_t node_count, std::size_t k_min, std::size_t k_max,
                                  std::uint64_t seed, bool* clamped = nullptr) {
  Rng rng(seed);
  return random_partition(node_count, k_min, k_max, rng, clamped);
}

// Partition file: one "node_id community_id" line per node, canonical ids.
inline void write_partition(const std::string& path, const Partition& p) {
  std::ostringstream out;
  for (std::size_t v = 0; v < p.assign.size(); ++v) {
    out << v << ' ' << p.assign[v] << '\n';
  }
  write_text(path, out.str());
}

inline Partition read_partition(const std::string& path, std::size_t expected_nodes = SIZE_MAX) {
  const auto lines = read_text_lines(path);
  std::vector<std::int64_t> assign;
  std::size_t lineno = 0;
  for (const auto& line : lines) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto toks = split_ws(line);
    if (toks.size() != 2) throw ParseError("partition line needs 'node community'", lineno);
    std::size_t node, comm;
    try {
      node = std::stoull(toks[0]);
      comm = std::stoull(toks[1]);
    } catch (const std::exception&) {
      throw ParseError("partition line has non-numeric token", lineno);
    }
    if (node >= assign.size()) assign.resize(node + 1, -1);
    if (assign[node] >= 0) throw ValidationError("duplicate node id in partition file: " + toks[0]);
    assign[node] = static_cast<std::int64_t>(comm);
  }
  if (expected_nodes != SIZE_MAX && assign.size() != expected_nodes)
    throw ValidationError("partition covers " + std::to_string(assign.size()) + " nodes, graph has " +
                          std::to_string(expected_nodes));
  Partition p;
  p.assign.reserve(assign.size());
  for (std::size_t v = 0; v < assign.size(); ++v) {
    if (assign[v] < 0) throw ValidationError("partition file misses node " + std::to_string(v));
    p.assign.push_back(static_cast<std::uint32_t>(assign[v]));
  }
  for (auto c : p.assign) p.k = std::max(p.k, c + 1);
  return canonicalize(p);
}

// Normalized mutual information, 2*I/(H(a)+H(b)). 1 when the set-partitions
// coincide, 0 when independent. Both-trivial partitions compare equal -> 1.
inline double nmi(const Partition& a, const Partition& b) {
  if (a.assign.size() != b.assign.size()) throw ValidationError("nmi: partitions differ in node count");
  const double n = static_cast<double>(a.assign.size());
  if (n == 0) throw ValidationError("nmi: empty partitions");
  const Partition ca = canonicalize(a), cb = canonicalize(b);
  std::vector<double> pa(ca.k, 0.0), pb(cb.k, 0.0);
  std::vector<std::vector<double>> joint(ca.k, std::vector<double>(cb.k, 0.0));
  for (std::size_t v = 0; v < ca.assign.size(); ++v) {
    pa[ca.assign[v]] += 1.0;
    pb[cb.assign[v]] += 1.0;
    joint[ca.assign[v]][cb.assign[v]] += 1.0;
  }
  double ha = 0, hb = 0, info = 0;
  for (auto c : pa)
    if (c > 0) ha -= (c / n) * std::log(c / n);
  for (auto c : pb)
    if (c > 0) hb -= (c / n) * std::log(c / n);
  for (std::uint32_t i = 0; i < ca.k; ++i) {
    for (std::uint32_t j = 0; j < cb.k; ++j) {
      const double pij = joint[i][j] / n;
      if (pij > 0) info += pij * std::log(pij / ((pa[i] / n) * (pb[j] / n)));
    }
  }
  if (ha + hb == 0.0) return 1.0;  // both single-community, hence identical
  return 2.0 * info / (ha + hb);
}

}  // namespace forge
