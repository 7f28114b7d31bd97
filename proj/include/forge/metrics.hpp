#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "forge/errors.hpp"
#include "forge/graph.hpp"
#include "forge/partition.hpp"

namespace forge {

// The 11 structural properties computed for every (graph, partition) pair.
// Field order here is the canonical column order in every serialization.
struct PropertyVector {
  double modularity = 0;
  double num_communities = 0;
  double avg_clustering_coefficient = 0;
  double avg_density = 0;
  double avg_cut_size = 0;
  double avg_conductance = 0;
  double avg_centralization = 0;
  double top3_avg_density = 0;
  double top3_avg_conductance = 0;
  double top3_avg_size = 0;
  double top3_avg_cut_size = 0;

  static constexpr std::size_t kCount = 11;

  static const std::array<std::string, kCount>& names() {
    static const std::array<std::string, kCount> n = {
        "modularity",          "num_communities",      "avg_clustering_coefficient",
        "avg_density",         "avg_cut_size",         "avg_conductance",
        "avg_centralization",  "top3_avg_density",     "top3_avg_conductance",
        "top3_avg_size",       "top3_avg_cut_size"};
    return n;
  }

  std::array<double, kCount> values() const {
    return {modularity,         num_communities,  avg_clustering_coefficient,
            avg_density,        avg_cut_size,     avg_conductance,
            avg_centralization, top3_avg_density, top3_avg_conductance,
            top3_avg_size,      top3_avg_cut_size};
  }

  static PropertyVector from_values(const std::array<double, kCount>& v) {
    PropertyVector p;
    p.modularity = v[0];
    p.num_communities = v[1];
    p.avg_clustering_coefficient = v[2];
    p.avg_density = v[3];
    p.avg_cut_size = v[4];
    p.avg_conductance = v[5];
    p.avg_centralization = v[6];
    p.top3_avg_density = v[7];
    p.top3_avg_conductance = v[8];
    p.top3_avg_size = v[9];
    p.top3_avg_cut_size = v[10];
    return p;
  }
};

// Per-community structural measurements. d_c = 2*l_c + cut_c always holds.
struct CommunityStat {
  std::size_t size = 0;
  double internal_weight = 0;        // l_c, weighted
  double total_degree = 0;           // d_c, weighted
  double cut_weight = 0;             // weighted edges leaving the community
  std::size_t internal_edge_count = 0;  // unweighted l_c (cliqueness variants)
  double density = 0;                // 2*l_c / (|C|*(|C|-1)), 0 for singletons
  double conductance = 0;            // cut / min(vol, complement vol), 0 if min vol 0
  double centralization = 0;         // Freeman degree centralization of the induced subgraph
  double avg_local_clustering = 0;   // mean local clustering in the induced subgraph
};

namespace detail {

inline void check_partition(const Graph& g, const Partition& p) {
  if (p.assign.size() != g.node_count()) throw ValidationError("partition does not cover the graph");
  for (auto c : p.assign)
    if (c >= p.k) throw ValidationError("partition has community id >= k");
}

// sizes, weighted internal/cut sums, per-community degree; one edge pass
struct BasicSums {
  std::vector<std::size_t> size;
  std::vector<double> internal_w;
  std::vector<std::size_t> internal_cnt;
  std::vector<double> cut_w;
  std::vector<double> degree_w;
};

inline BasicSums basic_sums(const Graph& g, const Partition& p) {
  BasicSums s;
  s.size.assign(p.k, 0);
  s.internal_w.assign(p.k, 0.0);
  s.internal_cnt.assign(p.k, 0);
  s.cut_w.assign(p.k, 0.0);
  s.degree_w.assign(p.k, 0.0);
  for (std::uint32_t v = 0; v < g.node_count(); ++v) {
    ++s.size[p.assign[v]];
    s.degree_w[p.assign[v]] += g.weighted_degree(v);
  }
  for (const auto& e : g.edges()) {
    const auto cu = p.assign[e.u], cv = p.assign[e.v];
    if (cu == cv) {
      s.internal_w[cu] += e.w;
      ++s.internal_cnt[cu];
    } else {
      s.cut_w[cu] += e.w;
      s.cut_w[cv] += e.w;
    }
  }
  return s;
}

}  // namespace detail

// Newman modularity, Q = sum_c [ l_c/m - (d_c/2m)^2 ], weighted.
inline double modularity(const Graph& g, const Partition& p) {
  detail::check_partition(g, p);
  const double m = g.total_weight();
  if (m <= 0) throw ValidationError("modularity undefined on an edgeless graph");
  const auto s = detail::basic_sums(g, p);
  double q = 0;
  for (std::uint32_t c = 0; c < p.k; ++c) {
    const double frac = s.degree_w[c] / (2.0 * m);
    q += s.internal_w[c] / m - frac * frac;
  }
  return q;
}

inline std::vector<CommunityStat> community_stats(const Graph& g, const Partition& p) {
  detail::check_partition(g, p);
  const auto s = detail::basic_sums(g, p);
  const double two_m = 2.0 * g.total_weight();
  std::vector<CommunityStat> out(p.k);

  const auto members = community_members(p);
  // scratch for induced-subgraph passes
  std::vector<std::uint32_t> local_index(g.node_count(), 0);
  std::vector<std::uint32_t> stamp(g.node_count(), UINT32_MAX);

  for (std::uint32_t c = 0; c < p.k; ++c) {
    auto& st = out[c];
    st.size = s.size[c];
    st.internal_weight = s.internal_w[c];
    st.internal_edge_count = s.internal_cnt[c];
    st.cut_weight = s.cut_w[c];
    st.total_degree = s.degree_w[c];
    const auto n_c = static_cast<double>(st.size);
    st.density = st.size >= 2 ? 2.0 * st.internal_weight / (n_c * (n_c - 1.0)) : 0.0;
    const double vol = st.total_degree;
    const double min_vol = std::min(vol, two_m - vol);
    st.conductance = min_vol > 0 ? st.cut_weight / min_vol : 0.0;

    // induced subgraph: unweighted degrees and neighbor sets
    const auto& mem = members[c];
    for (std::uint32_t i = 0; i < mem.size(); ++i) local_index[mem[i]] = i;
    std::vector<std::vector<std::uint32_t>> iadj(mem.size());
    for (std::uint32_t i = 0; i < mem.size(); ++i) {
      for (const auto& [u, w] : g.neighbors(mem[i])) {
        (void)w;
        if (p.assign[u] == c) iadj[i].push_back(local_index[u]);
      }
    }
    if (mem.size() >= 3) {
      std::size_t d_max = 0;
      for (const auto& nb : iadj) d_max = std::max(d_max, nb.size());
      double acc = 0;
      for (const auto& nb : iadj) acc += static_cast<double>(d_max - nb.size());
      st.centralization = acc / ((n_c - 1.0) * (n_c - 2.0));
    }
    // local clustering inside the induced subgraph; degree < 2 contributes 0
    double cc_sum = 0;
    for (std::uint32_t i = 0; i < mem.size(); ++i) {
      const auto d = iadj[i].size();
      if (d < 2) continue;
      for (auto u : iadj[i]) stamp[u] = i;
      std::size_t links = 0;
      for (auto u : iadj[i])
        for (auto w2 : iadj[u])
          if (stamp[w2] == i && w2 > u) ++links;
      cc_sum += 2.0 * static_cast<double>(links) / (static_cast<double>(d) * (static_cast<double>(d) - 1.0));
      for (auto u : iadj[i]) stamp[u] = UINT32_MAX;
    }
    st.avg_local_clustering = mem.empty() ? 0.0 : cc_sum / n_c;
  }
  return out;
}

// Indices of the up-to-3 largest communities by node count (ties by id).
inline std::vector<std::uint32_t> top3_communities(const std::vector<CommunityStat>& stats) {
  std::vector<std::uint32_t> idx(stats.size());
  std::iota(idx.begin(), idx.end(), 0u);
  std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
    return stats[a].size != stats[b].size ? stats[a].size > stats[b].size : a < b;
  });
  idx.resize(std::min<std::size_t>(3, idx.size()));
  return idx;
}

inline PropertyVector property_vector(const Graph& g, const Partition& p) {
  const auto stats = community_stats(g, p);
  PropertyVector pv;
  pv.modularity = modularity(g, p);
  pv.num_communities = static_cast<double>(p.k);
  const double k = static_cast<double>(p.k);
  for (const auto& st : stats) {
    pv.avg_clustering_coefficient += st.avg_local_clustering / k;
    pv.avg_density += st.density / k;
    pv.avg_cut_size += st.cut_weight / k;
    pv.avg_conductance += st.conductance / k;
    pv.avg_centralization += st.centralization / k;
  }
  const auto top = top3_communities(stats);
  const double t = static_cast<double>(top.size());
  for (auto c : top) {
    pv.top3_avg_density += stats[c].density / t;
    pv.top3_avg_conductance += stats[c].conductance / t;
    pv.top3_avg_size += static_cast<double>(stats[c].size) / t;
    pv.top3_avg_cut_size += stats[c].cut_weight / t;
  }
  return pv;
}

struct CorrelationResult {
  std::array<std::array<double, PropertyVector::kCount>, PropertyVector::kCount> r{};
  std::array<bool, PropertyVector::kCount> constant_column{};
};

// Pearson correlations between the 11 properties across rows. Columns with
// zero variance are flagged and get correlation 0 everywhere (diagonal too).
inline CorrelationResult correlation_matrix(const std::vector<PropertyVector>& rows) {
  constexpr std::size_t d = PropertyVector::kCount;
  if (rows.size() < 2) throw ValidationError("correlation_matrix needs at least 2 rows");
  const double n = static_cast<double>(rows.size());
  std::array<double, d> sum{}, minv{}, maxv{};
  minv.fill(std::numeric_limits<double>::infinity());
  maxv.fill(-std::numeric_limits<double>::infinity());
  for (const auto& row : rows) {
    const auto v = row.values();
    for (std::size_t i = 0; i < d; ++i) {
      sum[i] += v[i];
      minv[i] = std::min(minv[i], v[i]);
      maxv[i] = std::max(maxv[i], v[i]);
    }
  }
  CorrelationResult out;
  // constancy is an exact spread test; a rounded mean must not unflag it
  for (std::size_t i = 0; i < d; ++i) out.constant_column[i] = minv[i] == maxv[i];
  std::array<double, d> mean{};
  for (std::size_t i = 0; i < d; ++i) mean[i] = sum[i] / n;
  std::array<std::array<double, d>, d> cov{};
  for (const auto& row : rows) {
    const auto v = row.values();
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i; j < d; ++j) cov[i][j] += (v[i] - mean[i]) * (v[j] - mean[j]);
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      double r = 0;
      if (!out.constant_column[i] && !out.constant_column[j] && cov[i][i] > 0.0 &&
          cov[j][j] > 0.0) {
        r = cov[i][j] / std::sqrt(cov[i][i] * cov[j][j]);
        r = std::clamp(r, -1.0, 1.0);
      }
      out.r[i][j] = out.r[j][i] = r;
    }
  }
  return out;
}

}  // namespace forge
