#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/errors.hpp"
#include "forge/ga.hpp"
#include "forge/io.hpp"
#include "forge/metrics.hpp"
#include "forge/partition.hpp"
#include "forge/version.hpp"

namespace forge {

inline std::vector<std::string> properties_csv_header() {
  std::vector<std::string> h{"solution_id", "fitness_tag"};
  for (const auto& name : PropertyVector::names()) h.push_back(name);
  return h;
}

// Archive directory layout:
//   manifest.json          config, seed, fitness tag, row index
//   partitions/<id>.part   one partition per solution
//   properties.csv         solution_id, fitness_tag, 11 property columns
inline void write_archive(const std::filesystem::path& dir, const Graph& g, const GAResult& res) {
  ensure_dir(dir);
  ensure_dir(dir / "partitions");

  std::vector<std::vector<std::string>> rows;
  rows.reserve(res.archive.size());
  nlohmann::json index = nlohmann::json::array();
  for (const auto& rec : res.archive) {
    const PropertyVector pv =
        rec.properties ? *rec.properties : property_vector(g, rec.partition);
    std::vector<std::string> row{std::to_string(rec.id), to_string(rec.fitness_tag)};
    for (const auto v : pv.values()) row.push_back(fmt_double(v));
    rows.push_back(std::move(row));

    const auto rel = std::string("partitions/") + std::to_string(rec.id) + ".part";
    write_partition(dir / rel, rec.partition);
    index.push_back({{"id", rec.id},
                     {"generation", rec.generation},
                     {"fitness", rec.fitness},
                     {"path", rel}});
  }
  write_csv(dir / "properties.csv", properties_csv_header(), rows);

  nlohmann::json m;
  m["tool_version"] = kToolVersion;
  m["fitness_tag"] = to_string(res.fitness_tag);
  m["node_count"] = g.node_count();
  m["config"] = {{"population", res.config.population},
                 {"generations", res.config.generations},
                 {"offspring_per_gen", res.config.offspring()},
                 {"k_min", res.config.k_min},
                 {"k_max", res.config.k_max},
                 {"mutation_prob", res.config.mutation_prob},
                 {"elite_frac", res.config.elite_frac},
                 {"roulette_frac", res.config.roulette_frac},
                 {"random_keep", res.config.random_keep},
                 {"archive_cap", res.config.archive_cap},
                 {"seed", res.config.seed}};
  m["best_per_generation"] = res.best_per_generation;
  m["rows"] = std::move(index);
  write_text(dir / "manifest.json", m.dump(2) + "\n");
}

struct ArchiveRow {
  std::uint64_t id = 0;
  FitnessTag fitness_tag = FitnessTag::modularity;
  double fitness = 0;
  std::uint32_t generation = 0;
  PropertyVector properties;
  std::string partition_path;  // relative to the archive dir
};

struct ArchiveView {
  std::filesystem::path dir;
  FitnessTag fitness_tag = FitnessTag::modularity;
  std::uint32_t node_count = 0;
  std::vector<ArchiveRow> rows;  // ascending id

  Partition load_partition(std::size_t row_idx) const {
    return read_partition(dir / rows[row_idx].partition_path, node_count);
  }
};

// Reads manifest + properties back; partitions stay on disk (load_partition).
inline ArchiveView read_archive(const std::filesystem::path& dir) {
  ArchiveView av;
  av.dir = dir;
  const auto mpath = dir / "manifest.json";
  std::ifstream in(mpath);
  if (!in) throw ValidationError("cannot open archive manifest: " + mpath.string());
  nlohmann::json m;
  try {
    in >> m;
  } catch (const std::exception& e) {
    throw ValidationError("bad archive manifest " + mpath.string() + ": " + e.what());
  }
  av.fitness_tag = fitness_from_string(m.at("fitness_tag").get<std::string>());
  av.node_count = m.at("node_count").get<std::uint32_t>();

  std::map<std::uint64_t, ArchiveRow> by_id;
  for (const auto& r : m.at("rows")) {
    ArchiveRow row;
    row.id = r.at("id").get<std::uint64_t>();
    row.generation = r.at("generation").get<std::uint32_t>();
    row.fitness = r.at("fitness").get<double>();
    row.partition_path = r.at("path").get<std::string>();
    by_id.emplace(row.id, std::move(row));
  }

  const auto lines = read_text_lines(dir / "properties.csv");
  if (lines.empty()) throw ValidationError("empty properties.csv in " + dir.string());
  const auto header = split_csv(lines[0]);
  const auto expected = properties_csv_header();
  if (header != expected)
    throw ParseError("unexpected properties.csv header in " + dir.string(), 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto cells = split_csv(lines[i]);
    if (cells.size() != expected.size())
      throw ParseError("wrong column count in properties.csv", i + 1);
    const auto id = static_cast<std::uint64_t>(std::stoull(cells[0]));
    auto it = by_id.find(id);
    if (it == by_id.end())
      throw ParseError("properties.csv row has no manifest entry (id " + cells[0] + ")", i + 1);
    std::array<double, PropertyVector::kCount> vals{};
    for (std::size_t j = 0; j < PropertyVector::kCount; ++j) vals[j] = std::stod(cells[j + 2]);
    it->second.properties = PropertyVector::from_values(vals);
  }

  av.rows.reserve(by_id.size());
  for (auto& [id, row] : by_id) {
    (void)id;
    av.rows.push_back(std::move(row));
  }
  if (av.rows.empty()) throw ValidationError("archive has no rows: " + dir.string());
  return av;
}

}  // namespace forge
