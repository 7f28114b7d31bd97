#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "forge/errors.hpp"
#include "forge/graph.hpp"
#include "forge/metrics.hpp"
#include "forge/partition.hpp"
#include "forge/rng.hpp"

namespace forge {

// The four fitness functions, all maximized (conductance is negated).
enum class FitnessTag { modularity, avg_density, avg_clustering_coefficient, neg_avg_conductance };

inline const char* to_string(FitnessTag t) {
  switch (t) {
    case FitnessTag::modularity: return "modularity";
    case FitnessTag::avg_density: return "avg_density";
    case FitnessTag::avg_clustering_coefficient: return "avg_clustering_coefficient";
    case FitnessTag::neg_avg_conductance: return "neg_avg_conductance";
  }
  return "?";
}

inline FitnessTag fitness_from_string(const std::string& s) {
  if (s == "modularity") return FitnessTag::modularity;
  if (s == "density" || s == "avg_density") return FitnessTag::avg_density;
  if (s == "clustcoef" || s == "avg_clustering_coefficient") return FitnessTag::avg_clustering_coefficient;
  if (s == "conductance" || s == "neg_avg_conductance") return FitnessTag::neg_avg_conductance;
  throw ValidationError("unknown fitness tag: '" + s + "'");
}

inline double evaluate_fitness(const Graph& g, const Partition& p, FitnessTag tag) {
  switch (tag) {
    case FitnessTag::modularity:
      return modularity(g, p);
    case FitnessTag::avg_clustering_coefficient: {
      const auto stats = community_stats(g, p);
      double acc = 0;
      for (const auto& st : stats) acc += st.avg_local_clustering;
      return acc / static_cast<double>(stats.size());
    }
    case FitnessTag::avg_density:
    case FitnessTag::neg_avg_conductance: {
      // light path: no induced-subgraph work needed
      detail::check_partition(g, p);
      const auto s = detail::basic_sums(g, p);
      const double two_m = 2.0 * g.total_weight();
      double acc = 0;
      for (std::uint32_t c = 0; c < p.k; ++c) {
        if (tag == FitnessTag::avg_density) {
          const double n_c = static_cast<double>(s.size[c]);
          acc += s.size[c] >= 2 ? 2.0 * s.internal_w[c] / (n_c * (n_c - 1.0)) : 0.0;
        } else {
          const double min_vol = std::min(s.degree_w[c], two_m - s.degree_w[c]);
          acc += min_vol > 0 ? s.cut_w[c] / min_vol : 0.0;
        }
      }
      acc /= static_cast<double>(p.k);
      return tag == FitnessTag::avg_density ? acc : -acc;
    }
  }
  throw ValidationError("unknown fitness tag");
}

// One row of the solution-pool archive.
struct SolutionRecord {
  std::uint64_t id = 0;
  Partition partition;
  FitnessTag fitness_tag = FitnessTag::modularity;
  double fitness = 0;
  std::uint32_t generation = 0;
  std::optional<PropertyVector> properties;  // computed lazily
};

struct GAConfig {
  std::size_t population = 1000;
  std::size_t generations = 50;
  std::size_t offspring_per_gen = 0;  // 0 means "same as population"
  std::size_t k_min = 20;
  std::size_t k_max = 160;
  double mutation_prob = 0.1;
  double elite_frac = 0.2;
  double roulette_frac = 0.6;
  std::size_t random_keep = 100;
  std::size_t archive_cap = 100000;
  std::uint64_t seed = 0;

  std::size_t offspring() const { return offspring_per_gen == 0 ? population : offspring_per_gen; }

  void validate() const {
    if (population < 4) throw ValidationError("ga: population must be >= 4 (crossover needs 4 parents)");
    if (k_min < 1 || k_min > k_max) throw ValidationError("ga: need 1 <= k_min <= k_max");
    if (mutation_prob < 0 || mutation_prob > 1) throw ValidationError("ga: mutation_prob outside [0,1]");
    if (elite_frac < 0 || roulette_frac < 0 || elite_frac + roulette_frac <= 0 ||
        elite_frac + roulette_frac > 1)
      throw ValidationError("ga: need 0 < elite_frac + roulette_frac <= 1");
    if (archive_cap < population) throw ValidationError("ga: archive_cap must be >= population");
  }
};

// Uniformly draws four distinct records, takes the two fittest as parents,
// transplants one uniformly chosen community of parent 1 into the child and
// fills the remaining nodes from parent 2. The transplant gets a community id
// of its own so parent-2 labels cannot leak nodes into it.
inline Partition crossover(const std::vector<SolutionRecord>& pool, Rng& rng) {
  if (pool.size() < 4) throw ValidationError("crossover needs a pool of at least 4 solutions");
  const auto picks = rng.sample_indices(pool.size(), 4);
  std::array<const SolutionRecord*, 4> four{};
  for (std::size_t i = 0; i < 4; ++i) four[i] = &pool[picks[i]];
  std::sort(four.begin(), four.end(), [](const SolutionRecord* a, const SolutionRecord* b) {
    return a->fitness != b->fitness ? a->fitness > b->fitness : a->id < b->id;
  });
  const Partition& p1 = four[0]->partition;
  const Partition& p2 = four[1]->partition;
  const auto chosen = static_cast<std::uint32_t>(rng.index(p1.k));
  Partition child;
  child.assign = p2.assign;
  const auto transplant_id = p2.k;  // fresh id, distinct from every parent-2 community
  for (std::size_t v = 0; v < child.assign.size(); ++v) {
    if (p1.assign[v] == chosen) child.assign[v] = transplant_id;
  }
  child.k = p2.k + 1;
  return canonicalize(child);
}

// Each node is independently selected with probability `prob`; a selected
// node with neighbors moves to the most frequent community among them
// (ties to the smallest community id). Works on a copy, reading the copy as
// it mutates.
inline Partition mutate(const Graph& g, const Partition& p, double prob, Rng& rng) {
  Partition out = p;
  std::vector<std::size_t> count(p.k, 0);
  std::vector<std::uint32_t> touched;
  for (std::uint32_t v = 0; v < g.node_count(); ++v) {
    const bool selected = rng.unit() < prob;
    if (!selected || g.degree(v) == 0) continue;
    touched.clear();
    for (const auto& [u, w] : g.neighbors(v)) {
      (void)w;
      const auto c = out.assign[u];
      if (count[c] == 0) touched.push_back(c);
      ++count[c];
    }
    std::sort(touched.begin(), touched.end());
    std::uint32_t best = touched[0];
    for (const auto c : touched)
      if (count[c] > count[best]) best = c;
    out.assign[v] = best;
    for (const auto c : touched) count[c] = 0;
  }
  return canonicalize(out);
}

// Three-stage survivor selection: top 20% elites, 60% of the remainder by
// roulette wheel on min-max-normalized fitness, then up to `random_keep`
// uniform picks from what is left. Elites come first in the output.
inline std::vector<SolutionRecord> select_survivors(std::vector<SolutionRecord> pool,
                                                    const GAConfig& cfg, Rng& rng) {
  if (pool.empty()) throw ValidationError("select: empty pool");
  std::sort(pool.begin(), pool.end(), [](const SolutionRecord& a, const SolutionRecord& b) {
    return a.fitness != b.fitness ? a.fitness > b.fitness : a.id < b.id;
  });
  const std::size_t n = pool.size();
  const auto n_elite = static_cast<std::size_t>(static_cast<double>(n) * cfg.elite_frac);
  std::vector<SolutionRecord> kept(pool.begin(), pool.begin() + n_elite);

  std::vector<SolutionRecord> rest(pool.begin() + n_elite, pool.end());
  const auto n_roul = static_cast<std::size_t>(static_cast<double>(rest.size()) * cfg.roulette_frac);
  if (n_roul > 0 && !rest.empty()) {
    double f_min = rest.front().fitness, f_max = rest.front().fitness;
    for (const auto& r : rest) {
      f_min = std::min(f_min, r.fitness);
      f_max = std::max(f_max, r.fitness);
    }
    const double span = f_max - f_min;
    constexpr double eps = 1e-9;  // keeps zero-normalized records selectable
    std::vector<double> weight(rest.size());
    for (std::size_t i = 0; i < rest.size(); ++i)
      weight[i] = (span > 0 ? (rest[i].fitness - f_min) / span : 0.0) + eps;
    // roulette wheel without replacement
    std::vector<std::size_t> alive(rest.size());
    std::iota(alive.begin(), alive.end(), std::size_t{0});
    double total = 0;
    for (const auto w : weight) total += w;
    for (std::size_t pick = 0; pick < n_roul; ++pick) {
      double x = rng.unit() * total;
      std::size_t chosen_pos = alive.size() - 1;
      for (std::size_t i = 0; i < alive.size(); ++i) {
        x -= weight[alive[i]];
        if (x < 0) {
          chosen_pos = i;
          break;
        }
      }
      const auto chosen = alive[chosen_pos];
      kept.push_back(rest[chosen]);
      total -= weight[chosen];
      alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(chosen_pos));
    }
    std::vector<SolutionRecord> leftovers;
    leftovers.reserve(alive.size());
    for (const auto i : alive) leftovers.push_back(rest[i]);
    rest = std::move(leftovers);
  }
  const std::size_t n_random = std::min(cfg.random_keep, rest.size());
  const auto picks = rng.sample_indices(rest.size(), n_random);
  for (const auto i : picks) kept.push_back(rest[i]);
  return kept;
}

struct GAResult {
  std::vector<SolutionRecord> archive;       // every evaluated record, id order
  std::vector<double> best_per_generation;   // index 0 = initial population
  GAConfig config;
  FitnessTag fitness_tag = FitnessTag::modularity;
  bool k_max_clamped = false;
};

// The full exploration loop: random initialization, crossover+mutation
// offspring, (mu+lambda) survivor selection, archive of every evaluated
// record with uniform downsampling past archive_cap (current elites are
// never dropped). Deterministic per seed: every candidate draws from an RNG
// stream derived from (seed, generation, index).
inline GAResult run_ga(const Graph& g, FitnessTag tag, const GAConfig& cfg) {
  cfg.validate();
  GAResult res;
  res.config = cfg;
  res.fitness_tag = tag;
  std::uint64_t next_id = 0;

  std::vector<SolutionRecord> pool;
  pool.reserve(cfg.population);
  for (std::size_t i = 0; i < cfg.population; ++i) {
    Rng rng(Rng::derive(cfg.seed, 0, i));
    bool clamped = false;
    SolutionRecord rec;
    rec.partition = random_partition(g.node_count(), cfg.k_min, cfg.k_max, rng, &clamped);
    res.k_max_clamped = res.k_max_clamped || clamped;
    rec.id = next_id++;
    rec.fitness_tag = tag;
    rec.fitness = evaluate_fitness(g, rec.partition, tag);
    rec.generation = 0;
    pool.push_back(rec);
  }
  res.archive = pool;

  auto best_of = [](const std::vector<SolutionRecord>& v) {
    double best = v.front().fitness;
    for (const auto& r : v) best = std::max(best, r.fitness);
    return best;
  };
  res.best_per_generation.push_back(best_of(pool));

  for (std::uint32_t gen = 1; gen <= cfg.generations; ++gen) {
    std::vector<SolutionRecord> offspring;
    offspring.reserve(cfg.offspring());
    for (std::size_t j = 0; j < cfg.offspring(); ++j) {
      Rng rng(Rng::derive(cfg.seed, gen, j));
      SolutionRecord rec;
      rec.partition = mutate(g, crossover(pool, rng), cfg.mutation_prob, rng);
      rec.id = next_id++;
      rec.fitness_tag = tag;
      rec.fitness = evaluate_fitness(g, rec.partition, tag);
      rec.generation = gen;
      offspring.push_back(rec);
    }
    res.archive.insert(res.archive.end(), offspring.begin(), offspring.end());

    std::vector<SolutionRecord> combined = pool;
    combined.insert(combined.end(), offspring.begin(), offspring.end());
    Rng sel_rng(Rng::derive(cfg.seed, gen, UINT64_MAX));
    pool = select_survivors(std::move(combined), cfg, sel_rng);
    res.best_per_generation.push_back(best_of(pool));

    if (res.archive.size() > cfg.archive_cap) {
      // keep the current elite set, downsample the rest uniformly
      const auto n_elite = std::max<std::size_t>(
          1, static_cast<std::size_t>(static_cast<double>(pool.size()) * cfg.elite_frac));
      std::vector<bool> keep_id_flag;
      keep_id_flag.assign(static_cast<std::size_t>(next_id), false);
      for (std::size_t i = 0; i < n_elite && i < pool.size(); ++i) keep_id_flag[pool[i].id] = true;
      std::vector<std::size_t> protected_rows, other_rows;
      for (std::size_t i = 0; i < res.archive.size(); ++i) {
        (keep_id_flag[res.archive[i].id] ? protected_rows : other_rows).push_back(i);
      }
      Rng ds_rng(Rng::derive(cfg.seed, gen, UINT64_MAX - 1));
      const std::size_t want_others =
          cfg.archive_cap > protected_rows.size() ? cfg.archive_cap - protected_rows.size() : 0;
      const auto picked = ds_rng.sample_indices(other_rows.size(), want_others);
      std::vector<std::size_t> chosen = protected_rows;
      for (const auto i : picked) chosen.push_back(other_rows[i]);
      std::sort(chosen.begin(), chosen.end());
      std::vector<SolutionRecord> pruned;
      pruned.reserve(chosen.size());
      for (const auto i : chosen) pruned.push_back(std::move(res.archive[i]));
      res.archive = std::move(pruned);
    }
  }
  return res;
}

}  // namespace forge
