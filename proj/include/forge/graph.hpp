#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "forge/errors.hpp"
#include "forge/io.hpp"
#include "forge/partition.hpp"
#include "forge/rng.hpp"

namespace forge {

struct Edge {
  std::uint32_t u, v;
  double w;
};

struct GraphBuildStats {
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_merged = 0;
};

// Undirected weighted simple graph over dense node ids 0..n-1, immutable
// once built and safe to share across concurrent readers. An optional
// directed (truster, trustee) overlay backs the trust task.
class Graph {
 public:
  Graph() = default;

  // Normalizes edges to u < v, drops self-loops, merges parallel edges by
  // weight summation.
  static Graph build(std::size_t node_count, std::vector<Edge> raw, GraphBuildStats* stats = nullptr) {
    for (auto& e : raw) {
      if (e.w < 0) throw ValidationError("negative edge weight");
      if (e.u >= node_count || e.v >= node_count) throw ValidationError("edge endpoint out of range");
      if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(raw.begin(), raw.end(), [](const Edge& a, const Edge& b) {
      return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    Graph g;
    g.n_ = node_count;
    for (const auto& e : raw) {
      if (e.u == e.v) {
        if (stats) ++stats->self_loops_dropped;
        continue;
      }
      if (!g.edges_.empty() && g.edges_.back().u == e.u && g.edges_.back().v == e.v) {
        g.edges_.back().w += e.w;
        if (stats) ++stats->duplicates_merged;
      } else {
        g.edges_.push_back(e);
      }
    }
    g.adj_.assign(node_count, {});
    g.wdeg_.assign(node_count, 0.0);
    g.total_weight_ = 0.0;
    for (const auto& e : g.edges_) {
      g.adj_[e.u].emplace_back(e.v, e.w);
      g.adj_[e.v].emplace_back(e.u, e.w);
      g.wdeg_[e.u] += e.w;
      g.wdeg_[e.v] += e.w;
      g.total_weight_ += e.w;
    }
    return g;
  }

  std::size_t node_count() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::pair<std::uint32_t, double>>& neighbors(std::uint32_t v) const { return adj_[v]; }
  std::size_t degree(std::uint32_t v) const { return adj_[v].size(); }
  double weighted_degree(std::uint32_t v) const { return wdeg_[v]; }
  double total_weight() const { return total_weight_; }

  bool has_trust() const { return !trust_.empty(); }
  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& trust_edges() const { return trust_; }
  void attach_trust(std::vector<std::pair<std::uint32_t, std::uint32_t>> t) { trust_ = std::move(t); }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;  // u < v, unique
  std::vector<std::vector<std::pair<std::uint32_t, double>>> adj_;
  std::vector<double> wdeg_;
  double total_weight_ = 0.0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> trust_;
};

enum class EdgeListFormat { whitespace, csv };

struct EdgeListResult {
  Graph graph;
  std::vector<std::string> original_ids;                    // dense id -> original token
  std::unordered_map<std::string, std::uint32_t> id_map;    // original token -> dense id
  GraphBuildStats stats;
};

namespace detail {

inline std::vector<std::string> tokens_for(const std::string& line, EdgeListFormat fmt) {
  return fmt == EdgeListFormat::csv ? split_csv(line) : split_ws(line);
}

inline std::uint32_t intern_id(const std::string& tok, EdgeListResult& r) {
  auto it = r.id_map.find(tok);
  if (it != r.id_map.end()) return it->second;
  const auto id = static_cast<std::uint32_t>(r.original_ids.size());
  r.id_map.emplace(tok, id);
  r.original_ids.push_back(tok);
  return id;
}

}  // namespace detail

// Edge list: one `u v [w]` per line, `#` comments skipped. Node ids may be
// arbitrary tokens; they are relabeled densely in order of first appearance
// and the sidecar id map is retained for reporting.
inline EdgeListResult load_edge_list(const std::string& path,
                                     EdgeListFormat fmt = EdgeListFormat::whitespace) {
  EdgeListResult r;
  std::vector<Edge> raw;
  const auto lines = read_text_lines(path);
  std::size_t lineno = 0;
  for (const auto& line : lines) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto toks = detail::tokens_for(line, fmt);
    if (toks.empty() || (toks.size() == 1 && toks[0].empty())) continue;
    if (toks.size() != 2 && toks.size() != 3) throw ParseError("edge line needs 'u v [w]'", lineno);
    const auto u = detail::intern_id(toks[0], r);
    const auto v = detail::intern_id(toks[1], r);
    double w = 1.0;
    if (toks.size() == 3) {
      try {
        std::size_t pos = 0;
        w = std::stod(toks[2], &pos);
        if (pos != toks[2].size()) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw ParseError("edge weight is not a number: '" + toks[2] + "'", lineno);
      }
      if (w < 0) throw ValidationError("negative edge weight on line " + std::to_string(lineno));
    }
    raw.push_back({u, v, w});
  }
  r.graph = Graph::build(r.original_ids.size(), std::move(raw), &r.stats);
  return r;
}

// Writes `u v w` lines using the supplied original tokens (dense ids when
// empty). Nodes without incident edges are not representable in this format.
inline void write_edge_list(const std::string& path, const Graph& g,
                            const std::vector<std::string>& original_ids = {}) {
  std::ostringstream out;
  auto name = [&](std::uint32_t v) {
    return original_ids.empty() ? std::to_string(v) : original_ids[v];
  };
  for (const auto& e : g.edges()) {
    out << name(e.u) << ' ' << name(e.v) << ' ' << fmt_double(e.w) << '\n';
  }
  write_text(path, out.str());
}

// Per-node class in {0 = normal, 1 = anomaly}.
using NodeLabels = std::vector<std::uint8_t>;

struct LabelsResult {
  NodeLabels labels;
  std::size_t defaulted = 0;  // nodes absent from the file, defaulted to 0
};

inline LabelsResult load_labels(const std::string& path,
                                const std::unordered_map<std::string, std::uint32_t>& id_map,
                                std::size_t node_count) {
  LabelsResult r;
  r.labels.assign(node_count, 0);
  std::vector<bool> listed(node_count, false);
  const auto lines = read_text_lines(path);
  std::size_t lineno = 0;
  for (const auto& line : lines) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto toks = split_ws(line);
    if (toks.size() != 2) throw ParseError("label line needs 'node label'", lineno);
    const auto it = id_map.find(toks[0]);
    if (it == id_map.end()) throw ValidationError("unknown node id in labels: '" + toks[0] + "'");
    if (toks[1] != "0" && toks[1] != "1")
      throw ValidationError("label outside {0,1}: '" + toks[1] + "' on line " + std::to_string(lineno));
    r.labels[it->second] = static_cast<std::uint8_t>(toks[1] == "1");
    listed[it->second] = true;
  }
  for (std::size_t v = 0; v < node_count; ++v)
    if (!listed[v]) ++r.defaulted;
  return r;
}

// Identity id map for graphs generated in-process (dense ids as tokens).
inline std::unordered_map<std::string, std::uint32_t> identity_id_map(std::size_t node_count) {
  std::unordered_map<std::string, std::uint32_t> m;
  m.reserve(node_count);
  for (std::size_t v = 0; v < node_count; ++v) m.emplace(std::to_string(v), static_cast<std::uint32_t>(v));
  return m;
}

struct RatingsTable {
  // per-user (item, rating), sorted by item id; items interned densely
  std::vector<std::vector<std::pair<std::uint32_t, double>>> by_user;
  std::vector<std::string> item_tokens;
  std::size_t row_count = 0;
};

struct RatingsResult {
  RatingsTable table;
  std::size_t duplicates_overwritten = 0;  // (user, item) last-write-wins
};

// Ratings: CSV `user,item,rating` with a header row.
inline RatingsResult load_ratings(const std::string& path,
                                  const std::unordered_map<std::string, std::uint32_t>& id_map,
                                  std::size_t node_count) {
  RatingsResult r;
  r.table.by_user.assign(node_count, {});
  std::unordered_map<std::string, std::uint32_t> item_map;
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> cells;
  const auto lines = read_text_lines(path);
  std::size_t lineno = 0;
  bool header_seen = false;
  for (const auto& line : lines) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto toks = split_csv(line);
    if (!header_seen) {
      if (toks.size() < 3 || toks[0] != "user")
        throw ParseError("expected ratings header 'user,item,rating'", lineno);
      header_seen = true;
      continue;
    }
    if (toks.size() != 3) throw ParseError("rating line needs 'user,item,rating'", lineno);
    const auto uit = id_map.find(toks[0]);
    if (uit == id_map.end()) throw ValidationError("unknown user id in ratings: '" + toks[0] + "'");
    auto iit = item_map.find(toks[1]);
    if (iit == item_map.end()) {
      iit = item_map.emplace(toks[1], static_cast<std::uint32_t>(r.table.item_tokens.size())).first;
      r.table.item_tokens.push_back(toks[1]);
    }
    double rating;
    try {
      rating = std::stod(toks[2]);
    } catch (const std::exception&) {
      throw ParseError("rating is not a number: '" + toks[2] + "'", lineno);
    }
    const auto key = std::make_pair(uit->second, iit->second);
    if (cells.count(key)) ++r.duplicates_overwritten;
    cells[key] = rating;
  }
  if (!header_seen) throw ValidationError("ratings file has no header: " + path);
  for (const auto& [key, rating] : cells) {
    r.table.by_user[key.first].emplace_back(key.second, rating);
    ++r.table.row_count;
  }
  return r;
}

struct TrustResult {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // (truster, trustee), unique
  std::size_t self_trust_dropped = 0;
  std::size_t duplicates_dropped = 0;
};

// Directed trust overlay: one `truster trustee` pair per line.
inline TrustResult load_trust(const std::string& path,
                              const std::unordered_map<std::string, std::uint32_t>& id_map) {
  TrustResult r;
  const auto lines = read_text_lines(path);
  std::size_t lineno = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> raw;
  for (const auto& line : lines) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto toks = split_ws(line);
    if (toks.size() != 2) throw ParseError("trust line needs 'truster trustee'", lineno);
    const auto a = id_map.find(toks[0]);
    const auto b = id_map.find(toks[1]);
    if (a == id_map.end() || b == id_map.end())
      throw ValidationError("unknown node id in trust edges on line " + std::to_string(lineno));
    if (a->second == b->second) {
      ++r.self_trust_dropped;
      continue;
    }
    raw.emplace_back(a->second, b->second);
  }
  std::sort(raw.begin(), raw.end());
  for (const auto& e : raw) {
    if (!r.edges.empty() && r.edges.back() == e) {
      ++r.duplicates_dropped;
    } else {
      r.edges.push_back(e);
    }
  }
  return r;
}

struct PlantedResult {
  Graph graph;
  Partition ground_truth;
  bool sparse_warning = false;  // expected internal degree below 1
};

// Planted-partition benchmark: `blocks` blocks of `block_size` nodes,
// intra-block edge probability p_in, inter-block p_out, unit weights.
// Deterministic for a fixed seed.
inline PlantedResult planted_partition(std::size_t blocks, std::size_t block_size, double p_in,
                                       double p_out, std::uint64_t seed) {
  if (blocks < 2) throw ValidationError("planted_partition: need blocks >= 2");
  if (block_size < 1) throw ValidationError("planted_partition: need block_size >= 1");
  if (p_in < 0 || p_in > 1 || p_out < 0 || p_out > 1)
    throw ValidationError("planted_partition: probabilities must be in [0,1]");
  if (!(p_in > p_out)) throw ValidationError("planted_partition: need p_in > p_out");
  const std::size_t n = blocks * block_size;
  PlantedResult r;
  r.sparse_warning = p_in * static_cast<double>(block_size - 1) < 1.0;
  r.ground_truth.assign.resize(n);
  for (std::size_t v = 0; v < n; ++v)
    r.ground_truth.assign[v] = static_cast<std::uint32_t>(v / block_size);
  r.ground_truth.k = static_cast<std::uint32_t>(blocks);
  Rng rng(Rng::derive(seed, 0x706c616e74ull));  // independent of other users of `seed`
  std::vector<Edge> raw;
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = i + 1; j < n; ++j) {
      const double p = (r.ground_truth.assign[i] == r.ground_truth.assign[j]) ? p_in : p_out;
      if (rng.unit() < p) raw.push_back({i, j, 1.0});
    }
  }
  r.graph = Graph::build(n, std::move(raw));
  return r;
}

}  // namespace forge
