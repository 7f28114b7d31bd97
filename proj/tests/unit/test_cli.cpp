#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>
#include <nlohmann/json.hpp>

#include "forge/cli.hpp"
#include "forge/io.hpp"
#include "forge/partition.hpp"
#include "forge/report.hpp"
#include "support/tmpdir.hpp"

using namespace forge;

namespace {

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& s : args) argv.push_back(s.c_str());
  return dispatch(static_cast<int>(argv.size()), argv.data());
}

const char* kTwoTriangles = "0 1\n1 2\n0 2\n3 4\n4 5\n3 5\n";
const char* kSplitPartition = "0 0\n1 0\n2 0\n3 1\n4 1\n5 1\n";
const char* kLabels = "0 1\n1 0\n2 0\n3 1\n4 0\n5 1\n";

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("metrics writes a one-row property csv") {
  testutil::TempDir td;
  write_text(td.file("g.txt"), kTwoTriangles);
  write_text(td.file("p.part"), kSplitPartition);
  const auto out = td.file("props.csv");
  const int rc = run_cli(
      {"forge", "metrics", "--graph", td.file("g.txt"), "--partition", td.file("p.part"), "--out", out});
  REQUIRE(rc == 0);
  const auto lines = read_text_lines(out);
  REQUIRE(lines.size() == 2);
  const auto header = split_csv(lines[0]);
  REQUIRE(header.size() == 13);
  REQUIRE(header[0] == "solution_id");
  REQUIRE(header[1] == "fitness_tag");
  REQUIRE(header[2] == "modularity");
  const auto row = split_csv(lines[1]);
  REQUIRE(row[1] == "none");
  REQUIRE_THAT(std::stod(row[2]), Catch::Matchers::WithinAbs(0.5, 1e-12));
  REQUIRE(std::filesystem::exists(td.path / "run_manifest.json"));
}

TEST_CASE("bad invocations exit 1") {
  testutil::TempDir td;
  write_text(td.file("g.txt"), kTwoTriangles);
  write_text(td.file("p.part"), kSplitPartition);
  REQUIRE(run_cli({"forge", "metrics", "--graph", td.file("g.txt")}) == 1);
  REQUIRE(run_cli({"forge", "bogus"}) == 1);
  REQUIRE(run_cli({"forge"}) == 1);
  REQUIRE(run_cli({"forge", "metrics", "--graph", td.file("absent.txt"), "--partition",
                   td.file("p.part")}) == 1);
  REQUIRE(run_cli({"forge", "detect", "--graph", td.file("g.txt"), "--algo", "nope", "--out",
                   td.file("x.part")}) == 1);
  REQUIRE(run_cli({"forge", "task", "anomaly", "--graph", td.file("g.txt"), "--labels",
                   td.file("p.part")}) == 1);  // neither --partition nor --pool
}

TEST_CASE("detect emits a loadable partition") {
  testutil::TempDir td;
  write_text(td.file("g.txt"), kTwoTriangles);
  const auto out = td.file("louvain.part");
  const int rc = run_cli(
      {"forge", "detect", "--graph", td.file("g.txt"), "--algo", "louvain", "--out", out, "--seed", "3"});
  REQUIRE(rc == 0);
  const auto p = read_partition(out, 6);
  REQUIRE(p.k == 2);
  REQUIRE(p.assign == std::vector<std::uint32_t>{0, 0, 0, 1, 1, 1});
}

TEST_CASE("generate reproduces byte-identical archives per seed") {
  testutil::TempDir td;
  write_text(td.file("g.txt"), kTwoTriangles);
  const std::vector<std::string> base{"forge",       "generate", "--graph",     td.file("g.txt"),
                                      "--fitness",   "modularity", "--population", "20",
                                      "--generations", "2",        "--k-min",     "1",
                                      "--k-max",     "4",          "--archive-cap", "80",
                                      "--seed",      "5"};
  auto a1 = base, a2 = base;
  a1.insert(a1.end(), {"--out", td.file("a1")});
  a2.insert(a2.end(), {"--out", td.file("a2")});
  REQUIRE(run_cli(a1) == 0);
  REQUIRE(run_cli(a2) == 0);
  REQUIRE(slurp(td.file("a1") + "/properties.csv") == slurp(td.file("a2") + "/properties.csv"));
  REQUIRE(slurp(td.file("a1") + "/partitions/0.part") ==
          slurp(td.file("a2") + "/partitions/0.part"));
}

TEST_CASE("task anomaly on a single partition writes results") {
  testutil::TempDir td;
  write_text(td.file("g.txt"), kTwoTriangles);
  write_text(td.file("p.part"), kSplitPartition);
  write_text(td.file("labels.txt"), kLabels);
  const auto out = td.file("res.csv");
  const int rc = run_cli({"forge", "task", "anomaly", "--graph", td.file("g.txt"), "--labels",
                          td.file("labels.txt"), "--partition", td.file("p.part"), "--folds", "3",
                          "--seed", "2", "--out", out});
  REQUIRE(rc == 0);
  const auto back = read_results_csv(out);
  REQUIRE(back.size() == 1);
  REQUIRE(back.count(0) == 1);
}

TEST_CASE("a corrupt pool member yields partial results and exit 2") {
  testutil::TempDir td;
  write_text(td.file("g.txt"), kTwoTriangles);
  write_text(td.file("labels.txt"), kLabels);
  const auto pool = td.file("pool");
  REQUIRE(run_cli({"forge", "generate", "--graph", td.file("g.txt"), "--fitness", "modularity",
                   "--out", pool, "--population", "12", "--generations", "0", "--k-min", "1",
                   "--k-max", "4", "--archive-cap", "12", "--seed", "7"}) == 0);
  write_text(pool + "/partitions/2.part", "0 0\n");

  const int rc = run_cli({"forge", "task", "anomaly", "--graph", td.file("g.txt"), "--labels",
                          td.file("labels.txt"), "--pool", pool, "--folds", "3", "--seed", "3"});
  REQUIRE(rc == 2);
  const auto back = read_results_csv(pool + "/results.csv");
  REQUIRE(back.size() == 11);
  REQUIRE(back.count(2) == 0);
  REQUIRE(back.count(0) == 1);
}

TEST_CASE("the seed falls back to the environment") {
  testutil::TempDir td;
  write_text(td.file("g.txt"), kTwoTriangles);
  setenv("PARTITION_FORGE_SEED", "123", 1);
  const int rc = run_cli(
      {"forge", "detect", "--graph", td.file("g.txt"), "--algo", "louvain", "--out", td.file("env.part")});
  unsetenv("PARTITION_FORGE_SEED");
  REQUIRE(rc == 0);
  nlohmann::json j = nlohmann::json::parse(slurp(td.file("run_manifest.json")));
  REQUIRE(j.at("seed").get<std::uint64_t>() == 123);

  const int rc2 = run_cli({"forge", "detect", "--graph", td.file("g.txt"), "--algo", "louvain",
                           "--out", td.file("explicit.part"), "--seed", "123"});
  REQUIRE(rc2 == 0);
  REQUIRE(slurp(td.file("env.part")) == slurp(td.file("explicit.part")));
}

TEST_CASE("meta and report run end to end over a generated pool") {
  testutil::TempDir td;
  write_text(td.file("g.txt"), kTwoTriangles);
  write_text(td.file("labels.txt"), kLabels);
  const auto pool = td.file("pool");
  REQUIRE(run_cli({"forge", "generate", "--graph", td.file("g.txt"), "--fitness", "modularity",
                   "--out", pool, "--population", "60", "--generations", "0", "--k-min", "1",
                   "--k-max", "4", "--archive-cap", "60", "--seed", "9"}) == 0);
  REQUIRE(run_cli({"forge", "task", "anomaly", "--graph", td.file("g.txt"), "--labels",
                   td.file("labels.txt"), "--pool", pool, "--folds", "3", "--seed", "4"}) == 0);

  const auto model = td.file("model.json");
  REQUIRE(run_cli({"forge", "meta", "fit", "--pool", pool, "--task", "anomaly", "--graph",
                   td.file("g.txt"), "--labels", td.file("labels.txt"), "--folds", "3", "--seed",
                   "4", "--budget-frac", "1.0", "--seed-size", "12", "--batch", "8", "--bags",
                   "2", "--model-out", model}) == 0);
  const auto mj = nlohmann::json::parse(slurp(model));
  REQUIRE(mj.at("target_name").get<std::string>() == "anomaly_class1_f1");
  REQUIRE(mj.at("active").at("sampled_ids").size() == 48);  // 60 minus the 12-row holdout

  REQUIRE(run_cli({"forge", "meta", "rank", "--model", model, "--pool", pool}) == 0);
  const auto ranked = read_text_lines(pool + "/ranked.csv");
  REQUIRE(ranked.size() == 61);
  REQUIRE(split_csv(ranked[0]) == std::vector<std::string>{"rank", "solution_id", "predicted"});

  REQUIRE(run_cli({"forge", "report", "extremes", "--pool", pool, "--frac", "0.05"}) == 0);
  const auto extremes = read_text_lines(pool + "/report/extremes.csv");
  REQUIRE(extremes.size() == 61);
  std::size_t top = 0, bottom = 0;
  for (std::size_t i = 1; i < extremes.size(); ++i) {
    const auto cells = split_csv(extremes[i]);
    if (cells[1] == "top") ++top;
    if (cells[1] == "bottom") ++bottom;
  }
  REQUIRE(top == 3);
  REQUIRE(bottom == 3);

  REQUIRE(run_cli({"forge", "report", "distributions", "--pool", pool}) == 0);
  REQUIRE(read_text_lines(pool + "/report/distributions.csv").size() == 12);
  REQUIRE(run_cli({"forge", "report", "correlations", "--pool", pool}) == 0);
  REQUIRE(read_text_lines(pool + "/report/correlations.csv").size() == 12);
}

TEST_CASE("bare relative output paths land in the working directory") {
  testutil::TempDir td;
  write_text(td.file("g.txt"), kTwoTriangles);
  const auto pool = td.file("pool");
  REQUIRE(run_cli({"forge", "generate", "--graph", td.file("g.txt"), "--fitness", "modularity",
                   "--population", "12", "--generations", "0", "--k-min", "1", "--k-max", "4",
                   "--archive-cap", "12", "--seed", "7", "--out", pool}) == 0);

  const auto old_cwd = std::filesystem::current_path();
  std::filesystem::current_path(td.path);
  const int rc_dist = run_cli({"forge", "report", "distributions", "--pool", pool, "--out", "bare.csv"});
  const int rc_corr = run_cli({"forge", "report", "correlations", "--pool", pool, "--out", "corr.csv"});
  std::filesystem::current_path(old_cwd);

  REQUIRE(rc_dist == 0);
  REQUIRE(rc_corr == 0);
  REQUIRE(read_text_lines((td.path / "bare.csv").string()).size() == 12);
  REQUIRE(read_text_lines((td.path / "corr.csv").string()).size() == 12);
}

TEST_CASE("outputs into a missing directory create it") {
  testutil::TempDir td;
  write_text(td.file("g.txt"), kTwoTriangles);
  const auto part = (td.path / "fresh" / "nested" / "louvain.part").string();
  REQUIRE(run_cli({"forge", "detect", "--graph", td.file("g.txt"), "--algo", "louvain", "--seed",
                   "5", "--out", part}) == 0);
  REQUIRE(read_text_lines(part).size() == 6);
  REQUIRE(std::filesystem::exists(td.path / "fresh" / "nested" / "run_manifest.json"));
}
