#include <catch2/catch_amalgamated.hpp>

#include <fstream>

#include "forge/archive.hpp"
#include "forge/errors.hpp"
#include "forge/ga.hpp"
#include "support/fixtures.hpp"
#include "support/tmpdir.hpp"

using namespace forge;

namespace {

GAResult small_run(std::uint64_t seed) {
  GAConfig cfg;
  cfg.population = 12;
  cfg.generations = 2;
  cfg.k_min = 1;
  cfg.k_max = 4;
  cfg.seed = seed;
  return run_ga(fixture::bridged_triangles(), FitnessTag::modularity, cfg);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("the properties csv header is fixed") {
  const auto h = properties_csv_header();
  REQUIRE(h.size() == 13);
  REQUIRE(h[0] == "solution_id");
  REQUIRE(h[1] == "fitness_tag");
  REQUIRE(h[2] == "modularity");
  REQUIRE(h[12] == "top3_avg_cut_size");
}

TEST_CASE("archives round-trip through the filesystem") {
  testutil::TempDir td;
  const auto g = fixture::bridged_triangles();
  const auto res = small_run(9);
  write_archive(td.path / "pool", g, res);

  const auto av = read_archive(td.path / "pool");
  REQUIRE(av.fitness_tag == FitnessTag::modularity);
  REQUIRE(av.node_count == 6);
  REQUIRE(av.rows.size() == res.archive.size());
  for (std::size_t i = 0; i < av.rows.size(); ++i) {
    const auto& row = av.rows[i];
    const auto& orig = res.archive[i];
    REQUIRE(row.id == orig.id);
    REQUIRE(row.generation == orig.generation);
    REQUIRE(row.fitness == orig.fitness);
    REQUIRE(row.properties.values() == property_vector(g, orig.partition).values());
    REQUIRE(av.load_partition(i).assign == orig.partition.assign);
  }
}

TEST_CASE("identical runs produce byte-identical archive files") {
  testutil::TempDir td;
  const auto g = fixture::bridged_triangles();
  write_archive(td.path / "a", g, small_run(4));
  write_archive(td.path / "b", g, small_run(4));
  REQUIRE(slurp(td.path / "a/properties.csv") == slurp(td.path / "b/properties.csv"));
  REQUIRE(slurp(td.path / "a/manifest.json") == slurp(td.path / "b/manifest.json"));
}

TEST_CASE("reading a corrupt archive reports the offending file") {
  testutil::TempDir td;
  const auto g = fixture::bridged_triangles();
  write_archive(td.path / "pool", g, small_run(2));

  // break the properties header
  auto text = slurp(td.path / "pool/properties.csv");
  text[0] = 'x';
  write_text((td.path / "pool/properties.csv").string(), text);
  REQUIRE_THROWS_AS(read_archive(td.path / "pool"), ParseError);

  REQUIRE_THROWS_AS(read_archive(td.path / "nowhere"), ValidationError);
}
