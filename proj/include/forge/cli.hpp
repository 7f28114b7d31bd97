#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "forge/anomaly.hpp"
#include "forge/archive.hpp"
#include "forge/detectors.hpp"
#include "forge/errors.hpp"
#include "forge/ga.hpp"
#include "forge/graph.hpp"
#include "forge/manifest.hpp"
#include "forge/meta.hpp"
#include "forge/metrics.hpp"
#include "forge/report.hpp"
#include "forge/trust.hpp"
#include "forge/version.hpp"

namespace forge {
namespace cli {

namespace fs = std::filesystem;

inline EdgeListFormat parse_format(const std::string& s) {
  if (s == "ws") return EdgeListFormat::whitespace;
  if (s == "csv") return EdgeListFormat::csv;
  throw ValidationError("unknown edge list format: '" + s + "'");
}

inline std::string join_args(int argc, const char* const* argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

struct CommonState {
  std::string command_line;
  RunManifest manifest() const {
    RunManifest rm;
    rm.command_line = command_line;
    rm.started_at = iso8601_utc_now();
    return rm;
  }
};

// generate: GA archive construction
struct GenerateArgs {
  std::string graph, out, fitness;
  std::string format = "ws";
  GAConfig cfg;
};

inline int run_generate(const GenerateArgs& a, const CommonState& cs) {
  auto rm = cs.manifest();
  rm.seed = a.cfg.seed;
  const auto el = load_edge_list(a.graph, parse_format(a.format));
  rm.add_input(a.graph);
  const auto tag = fitness_from_string(a.fitness);
  const auto res = run_ga(el.graph, tag, a.cfg);
  if (res.k_max_clamped)
    std::cerr << "note: k_max clamped to node count " << el.graph.node_count() << "\n";
  write_archive(a.out, el.graph, res);

  rm.config = {{"fitness", to_string(tag)},
               {"population", a.cfg.population},
               {"generations", a.cfg.generations},
               {"offspring_per_gen", a.cfg.offspring()},
               {"k_min", a.cfg.k_min},
               {"k_max", a.cfg.k_max},
               {"mutation_prob", a.cfg.mutation_prob},
               {"elite_frac", a.cfg.elite_frac},
               {"roulette_frac", a.cfg.roulette_frac},
               {"random_keep", a.cfg.random_keep},
               {"archive_cap", a.cfg.archive_cap}};
  rm.add_output(fs::path(a.out) / "properties.csv");
  rm.add_output_dir(fs::path(a.out) / "partitions");
  rm.finished_at = iso8601_utc_now();
  merge_run_into_archive_manifest(a.out, rm);
  std::cout << "archive rows: " << res.archive.size()
            << "\nbest fitness: " << fmt_double(res.best_per_generation.back()) << "\n";
  return 0;
}

// detect: baseline community detectors
struct DetectArgs {
  std::string graph, algo, out;
  std::string format = "ws";
  double resolution = 1.0;
  std::size_t max_rounds = 100;
  std::uint64_t seed = 0;
};

inline int run_detect(const DetectArgs& a, const CommonState& cs) {
  auto rm = cs.manifest();
  rm.seed = a.seed;
  const auto el = load_edge_list(a.graph, parse_format(a.format));
  rm.add_input(a.graph);
  Partition p;
  if (a.algo == "single") {
    p = single_community(el.graph);
  } else if (a.algo == "louvain") {
    p = louvain(el.graph, a.seed, a.resolution);
  } else if (a.algo == "labelprop") {
    p = label_propagation(el.graph, a.seed, a.max_rounds);
  } else {
    throw ValidationError("unknown algorithm: '" + a.algo + "' (single|louvain|labelprop)");
  }
  write_partition(a.out, p);
  rm.config = {{"algo", a.algo}, {"resolution", a.resolution}, {"max_rounds", a.max_rounds}};
  rm.add_output(a.out);
  rm.finished_at = iso8601_utc_now();
  write_run_manifest(fs::path(a.out).parent_path().empty() ? "." : fs::path(a.out).parent_path(),
                     rm);
  std::cout << "communities: " << p.k << "\n";
  return 0;
}

// metrics: one-row property CSV for a single partition
struct MetricsArgs {
  std::string graph, partition;
  std::string out = "properties.csv";
  std::string format = "ws";
};

inline int run_metrics(const MetricsArgs& a, const CommonState& cs) {
  auto rm = cs.manifest();
  const auto el = load_edge_list(a.graph, parse_format(a.format));
  rm.add_input(a.graph);
  const auto p = read_partition(a.partition, el.graph.node_count());
  rm.add_input(a.partition);
  const auto pv = property_vector(el.graph, p);
  std::vector<std::string> row{"0", "none"};
  for (const auto v : pv.values()) row.push_back(fmt_double(v));
  write_csv(a.out, properties_csv_header(), {row});
  rm.add_output(a.out);
  rm.finished_at = iso8601_utc_now();
  write_run_manifest(fs::path(a.out).parent_path().empty() ? "." : fs::path(a.out).parent_path(),
                     rm);
  const auto names = PropertyVector::names();
  const auto vals = pv.values();
  for (std::size_t i = 0; i < names.size(); ++i)
    std::cout << names[i] << ": " << fmt_double(vals[i]) << "\n";
  return 0;
}

inline void print_task_result(const TaskResult& r) {
  for (int cls = 0; cls <= 1; ++cls)
    std::cout << "class " << cls << ": precision " << fmt_double(r.cls[cls].precision)
              << " recall " << fmt_double(r.cls[cls].recall) << " f1 "
              << fmt_double(r.cls[cls].f1) << " support " << r.cls[cls].support << "\n";
  std::cout << "accuracy " << fmt_double(r.accuracy) << " auc " << fmt_double(r.auc) << "\n";
}

inline int report_pool_failures(const std::vector<PoolEvalRow>& rows) {
  std::size_t failed = 0;
  for (const auto& r : rows)
    if (!r.ok) {
      ++failed;
      std::cerr << "solution " << r.id << " failed: " << r.error << "\n";
    }
  if (failed) {
    std::cerr << failed << "/" << rows.size() << " solutions failed; partial results written\n";
    return 2;
  }
  return 0;
}

// task anomaly
struct AnomalyArgs {
  std::string graph, labels, partition, pool;
  std::string out;
  std::string format = "ws";
  std::size_t folds = 5;
  std::uint64_t seed = 0;
};

inline int run_task_anomaly(const AnomalyArgs& a, const CommonState& cs) {
  auto rm = cs.manifest();
  rm.seed = a.seed;
  rm.config = {{"folds", a.folds}};
  const auto el = load_edge_list(a.graph, parse_format(a.format));
  rm.add_input(a.graph);
  const auto lr = load_labels(a.labels, el.id_map, el.graph.node_count());
  rm.add_input(a.labels);
  if (lr.defaulted)
    std::cerr << "note: " << lr.defaulted << " nodes missing from labels, defaulted to 0\n";

  if (!a.partition.empty()) {
    const auto p = read_partition(a.partition, el.graph.node_count());
    rm.add_input(a.partition);
    std::size_t ridge = 0;
    const auto res =
        train_eval_anomaly(el.graph, p, lr.labels, a.folds, a.seed, &ridge);
    if (ridge) std::cerr << "note: ridge fallback used in " << ridge << " folds\n";
    const auto out = a.out.empty() ? std::string("results.csv") : a.out;
    PoolEvalRow row;
    row.id = 0;
    row.ok = true;
    row.result = res;
    write_results_csv(out, {row});
    rm.add_output(out);
    rm.finished_at = iso8601_utc_now();
    write_run_manifest(fs::path(out).parent_path().empty() ? "." : fs::path(out).parent_path(),
                       rm);
    print_task_result(res);
    return 0;
  }
  const auto av = read_archive(a.pool);
  rm.add_input(fs::path(a.pool) / "properties.csv");
  const auto rows = evaluate_pool_anomaly(av, el.graph, lr.labels, a.folds, a.seed);
  const auto out = a.out.empty() ? (fs::path(a.pool) / "results.csv").string() : a.out;
  write_results_csv(out, rows);
  rm.add_output(out);
  rm.finished_at = iso8601_utc_now();
  write_run_manifest(fs::path(out).parent_path(), rm);
  std::cout << "evaluated " << rows.size() << " solutions -> " << out << "\n";
  return report_pool_failures(rows);
}

// task trust
struct TrustArgs {
  std::string graph, ratings, trust, centrality, partition, pool;
  std::string out;
  std::string format = "ws";
  double holdout = 0.2;
  std::uint64_t seed = 0;
};

inline int run_task_trust(const TrustArgs& a, const CommonState& cs) {
  auto rm = cs.manifest();
  rm.seed = a.seed;
  rm.config = {{"centrality", a.centrality}, {"holdout", a.holdout}};
  auto el = load_edge_list(a.graph, parse_format(a.format));
  rm.add_input(a.graph);
  const auto rr = load_ratings(a.ratings, el.id_map, el.graph.node_count());
  rm.add_input(a.ratings);
  if (rr.duplicates_overwritten)
    std::cerr << "note: " << rr.duplicates_overwritten << " duplicate ratings overwritten\n";
  const auto tr = load_trust(a.trust, el.id_map);
  rm.add_input(a.trust);
  if (tr.self_trust_dropped || tr.duplicates_dropped)
    std::cerr << "note: dropped " << tr.self_trust_dropped << " self-trust and "
              << tr.duplicates_dropped << " duplicate trust edges\n";
  el.graph.attach_trust(tr.edges);
  const auto choice = centrality_from_string(a.centrality);

  if (!a.partition.empty()) {
    const auto p = read_partition(a.partition, el.graph.node_count());
    rm.add_input(a.partition);
    const auto res = train_eval_trust(el.graph, rr.table, p, choice, a.holdout, a.seed);
    const auto out = a.out.empty() ? std::string("results.csv") : a.out;
    PoolEvalRow row;
    row.id = 0;
    row.ok = true;
    row.result = res;
    write_results_csv(out, {row}, a.centrality);
    rm.add_output(out);
    rm.finished_at = iso8601_utc_now();
    write_run_manifest(fs::path(out).parent_path().empty() ? "." : fs::path(out).parent_path(),
                       rm);
    print_task_result(res);
    return 0;
  }
  const auto av = read_archive(a.pool);
  rm.add_input(fs::path(a.pool) / "properties.csv");
  const auto rows = evaluate_pool_trust(av, el.graph, rr.table, choice, a.holdout, a.seed);
  const auto out = a.out.empty() ? (fs::path(a.pool) / "results.csv").string() : a.out;
  write_results_csv(out, rows, a.centrality);
  rm.add_output(out);
  rm.finished_at = iso8601_utc_now();
  write_run_manifest(fs::path(out).parent_path(), rm);
  std::cout << "evaluated " << rows.size() << " solutions -> " << out << "\n";
  return report_pool_failures(rows);
}

// shared oracle construction for meta fit / transfer
struct MetaTaskInputs {
  std::string task;  // anomaly | trust
  std::string graph, labels, ratings, trust, centrality;
  std::string format = "ws";
  std::size_t folds = 5;
  double holdout = 0.2;
  std::uint64_t seed = 0;
};

struct MetaOracleBundle {
  Graph graph;
  NodeLabels labels;
  RatingsTable ratings;
  CentralityChoice choice = CentralityChoice::max_degree;

  Oracle make(const ArchiveView& av, const MetaTaskInputs& in) const {
    // oracle target: class-1 F1 of the downstream task on the solution
    const auto* self = this;
    if (in.task == "anomaly") {
      return [self, &av, in](std::uint64_t id) -> std::optional<double> {
        for (std::size_t i = 0; i < av.rows.size(); ++i) {
          if (av.rows[i].id != id) continue;
          try {
            const auto r = train_eval_anomaly(self->graph, av.load_partition(i),
                                              self->labels, in.folds, in.seed);
            return r.cls[1].f1;
          } catch (const std::exception& e) {
            std::cerr << "oracle failed on solution " << id << ": " << e.what() << "\n";
            return std::nullopt;
          }
        }
        return std::nullopt;
      };
    }
    return [self, &av, in](std::uint64_t id) -> std::optional<double> {
      for (std::size_t i = 0; i < av.rows.size(); ++i) {
        if (av.rows[i].id != id) continue;
        try {
          const auto r = train_eval_trust(self->graph, self->ratings, av.load_partition(i),
                                          self->choice, in.holdout, in.seed);
          return r.cls[1].f1;
        } catch (const std::exception& e) {
          std::cerr << "oracle failed on solution " << id << ": " << e.what() << "\n";
          return std::nullopt;
        }
      }
      return std::nullopt;
    };
  }
};

inline MetaOracleBundle load_task_inputs(const MetaTaskInputs& in, RunManifest& rm) {
  MetaOracleBundle b;
  auto el = load_edge_list(in.graph, parse_format(in.format));
  rm.add_input(in.graph);
  if (in.task == "anomaly") {
    if (in.labels.empty()) throw ValidationError("meta: anomaly task needs --labels");
    b.labels = load_labels(in.labels, el.id_map, el.graph.node_count()).labels;
    rm.add_input(in.labels);
  } else if (in.task == "trust") {
    if (in.ratings.empty() || in.trust.empty() || in.centrality.empty())
      throw ValidationError("meta: trust task needs --ratings, --trust, --centrality");
    b.ratings = load_ratings(in.ratings, el.id_map, el.graph.node_count()).table;
    rm.add_input(in.ratings);
    el.graph.attach_trust(load_trust(in.trust, el.id_map).edges);
    rm.add_input(in.trust);
    b.choice = centrality_from_string(in.centrality);
  } else {
    throw ValidationError("meta: unknown task '" + in.task + "' (anomaly|trust)");
  }
  b.graph = std::move(el.graph);
  return b;
}

inline std::vector<MetaRow> pool_to_meta_rows(const ArchiveView& av) {
  std::vector<MetaRow> rows;
  rows.reserve(av.rows.size());
  for (const auto& r : av.rows) {
    MetaRow mr;
    mr.id = r.id;
    const auto vals = r.properties.values();
    mr.features.assign(vals.begin(), vals.end());
    rows.push_back(std::move(mr));
  }
  return rows;
}

// meta fit
struct MetaFitArgs {
  std::string pool, model_out;
  MetaTaskInputs task;
  SampleBudget budget;
};

inline int run_meta_fit(const MetaFitArgs& a, const CommonState& cs) {
  auto rm = cs.manifest();
  rm.seed = a.task.seed;
  rm.config = {{"task", a.task.task},
               {"budget_frac", a.budget.max_fraction},
               {"seed_size", a.budget.seed_size},
               {"batch", a.budget.batch},
               {"bags", a.budget.bag_count}};
  const auto av = read_archive(a.pool);
  rm.add_input(fs::path(a.pool) / "properties.csv");
  const auto bundle = load_task_inputs(a.task, rm);
  const auto oracle = bundle.make(av, a.task);
  const auto pool_rows = pool_to_meta_rows(av);
  const auto fit = active_fit(pool_rows, oracle, a.budget, a.task.seed,
                              a.task.task + "_class1_f1");

  auto j = fit.model.to_json();
  j["active"] = {{"sampled_ids", fit.sampled_ids},
                 {"rmse_holdout", fit.rmse_holdout},
                 {"holdout_size", fit.holdout_size},
                 {"oracle_failures", fit.oracle_failures}};
  const auto out = a.model_out.empty() ? (fs::path(a.pool) / "meta_model.json").string()
                                       : a.model_out;
  write_text(out, j.dump(2) + "\n");
  rm.add_output(out);
  rm.finished_at = iso8601_utc_now();
  write_run_manifest(fs::path(out).parent_path(), rm);
  std::cout << "sampled " << fit.sampled_ids.size() << "/" << pool_rows.size()
            << " solutions, holdout rmse " << fmt_double(fit.rmse_holdout) << "\n";
  return 0;
}

// meta rank
struct MetaRankArgs {
  std::string model, pool, out;
};

inline int run_meta_rank(const MetaRankArgs& a, const CommonState& cs) {
  auto rm = cs.manifest();
  std::ifstream in(a.model);
  if (!in) throw ValidationError("cannot open model: " + a.model);
  nlohmann::json j;
  in >> j;
  const auto model = GbrtModel::from_json(j);
  rm.add_input(a.model);
  const auto av = read_archive(a.pool);
  rm.add_input(fs::path(a.pool) / "properties.csv");
  const auto pool_rows = pool_to_meta_rows(av);
  const auto ranked = rank_solutions(model, pool_rows);

  std::vector<std::vector<std::string>> rows;
  rows.reserve(ranked.size());
  std::size_t rank = 1;
  for (const auto id : ranked) {
    for (const auto& mr : pool_rows)
      if (mr.id == id) {
        rows.push_back({std::to_string(rank), std::to_string(id),
                        fmt_double(model.predict(mr.features))});
        break;
      }
    ++rank;
  }
  const auto out = a.out.empty() ? (fs::path(a.pool) / "ranked.csv").string() : a.out;
  write_csv(out, {"rank", "solution_id", "predicted"}, rows);
  rm.add_output(out);
  rm.finished_at = iso8601_utc_now();
  write_run_manifest(fs::path(out).parent_path(), rm);
  std::cout << "ranked " << ranked.size() << " solutions -> " << out << "\n";
  return 0;
}

// meta transfer
struct MetaTransferArgs {
  std::string train_pool, test_pool, out;
  MetaTaskInputs task;
  SampleBudget budget;
};

inline int run_meta_transfer(const MetaTransferArgs& a, const CommonState& cs) {
  auto rm = cs.manifest();
  rm.seed = a.task.seed;
  rm.config = {{"task", a.task.task}, {"budget_frac", a.budget.max_fraction}};
  const auto train_av = read_archive(a.train_pool);
  rm.add_input(fs::path(a.train_pool) / "properties.csv");
  const auto test_av = read_archive(a.test_pool);
  rm.add_input(fs::path(a.test_pool) / "properties.csv");
  const auto bundle = load_task_inputs(a.task, rm);
  const auto oracle_train = bundle.make(train_av, a.task);
  const auto oracle_test = bundle.make(test_av, a.task);
  const auto res = transfer_eval(pool_to_meta_rows(train_av), pool_to_meta_rows(test_av),
                                 oracle_train, oracle_test, a.budget, a.task.seed);

  nlohmann::json j = {{"rmse", res.rmse},
                      {"test_rows", res.test_rows},
                      {"train_rmse_holdout", res.fit.rmse_holdout},
                      {"sampled", res.fit.sampled_ids.size()}};
  const auto out = a.out.empty() ? (fs::path(a.test_pool) / "transfer.json").string() : a.out;
  write_text(out, j.dump(2) + "\n");
  rm.add_output(out);
  rm.finished_at = iso8601_utc_now();
  write_run_manifest(fs::path(out).parent_path(), rm);
  std::cout << "transfer rmse " << fmt_double(res.rmse) << " over " << res.test_rows
            << " test rows\n";
  return 0;
}

// report
struct ReportArgs {
  std::string pool, results, out, metric = "f1";
  double frac = 0.03;
};

inline int run_report_extremes(const ReportArgs& a, const CommonState& cs) {
  auto rm = cs.manifest();
  rm.config = {{"metric", a.metric}, {"frac", a.frac}};
  const auto av = read_archive(a.pool);
  rm.add_input(fs::path(a.pool) / "properties.csv");
  const auto results_path =
      a.results.empty() ? (fs::path(a.pool) / "results.csv").string() : a.results;
  const auto results = read_results_csv(results_path);
  rm.add_input(results_path);

  std::vector<std::uint64_t> ids;
  std::vector<double> metric;
  std::vector<PropertyVector> props;
  for (const auto& row : av.rows) {
    const auto it = results.find(row.id);
    if (it == results.end()) continue;
    ids.push_back(row.id);
    metric.push_back(metric_from_result(it->second, a.metric));
    props.push_back(row.properties);
  }
  const auto rep = report_extremes(ids, metric, props, a.frac);
  if (rep.tie_warning) std::cerr << "warning: metric ties across group boundaries\n";
  const auto out_dir = a.out.empty() ? (fs::path(a.pool) / "report").string() : a.out;
  ensure_dir(out_dir);
  write_extremes_csv(out_dir, rep, a.metric);
  rm.add_output(fs::path(out_dir) / "extremes.csv");
  rm.add_output(fs::path(out_dir) / "extremes_summary.csv");
  rm.finished_at = iso8601_utc_now();
  write_run_manifest(out_dir, rm);
  std::cout << "tagged " << rep.group_size << " top and bottom solutions of " << ids.size()
            << " -> " << out_dir << "\n";
  return 0;
}

inline int run_report_distributions(const ReportArgs& a, const CommonState& cs) {
  auto rm = cs.manifest();
  const auto av = read_archive(a.pool);
  rm.add_input(fs::path(a.pool) / "properties.csv");
  std::vector<PropertyVector> props;
  props.reserve(av.rows.size());
  for (const auto& row : av.rows) props.push_back(row.properties);
  const auto summary = report_distributions(props);
  const auto out =
      a.out.empty() ? (fs::path(a.pool) / "report" / "distributions.csv").string() : a.out;
  ensure_dir(fs::path(out).parent_path());
  write_distributions_csv(out, summary);
  rm.add_output(out);
  rm.finished_at = iso8601_utc_now();
  write_run_manifest(fs::path(out).parent_path(), rm);
  std::cout << "distribution summary -> " << out << "\n";
  return 0;
}

inline int run_report_correlations(const ReportArgs& a, const CommonState& cs) {
  auto rm = cs.manifest();
  const auto av = read_archive(a.pool);
  rm.add_input(fs::path(a.pool) / "properties.csv");
  std::vector<PropertyVector> props;
  props.reserve(av.rows.size());
  for (const auto& row : av.rows) props.push_back(row.properties);
  const auto corr = correlation_matrix(props);
  bool any_const = false;
  for (const auto c : corr.constant_column) any_const = any_const || c;
  if (any_const) std::cerr << "warning: constant property columns, correlations set to 0\n";
  const auto out =
      a.out.empty() ? (fs::path(a.pool) / "report" / "correlations.csv").string() : a.out;
  ensure_dir(fs::path(out).parent_path());
  write_correlations_csv(out, corr);
  rm.add_output(out);
  rm.finished_at = iso8601_utc_now();
  write_run_manifest(fs::path(out).parent_path(), rm);
  std::cout << "correlation matrix -> " << out << "\n";
  return 0;
}

inline void add_seed_option(CLI::App* cmd, std::uint64_t& seed) {
  cmd->add_option("--seed", seed, "rng seed")->envname("PARTITION_FORGE_SEED");
}

}  // namespace cli

// Entry point shared by the binary and the tests: returns the process exit
// code (0 ok, 1 validation error, 2 runtime error).
inline int dispatch(int argc, const char* const* argv) {
  using namespace cli;
  CLI::App app{"community-structure exploration and meta-prediction toolkit"};
  app.set_config("--config", "", "key=value config file; sections per subcommand");
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  CommonState cs;
  cs.command_line = join_args(argc, argv);

  GenerateArgs gen;
  auto* c_gen = app.add_subcommand("generate", "evolve an archive of community structures");
  c_gen->add_option("--graph", gen.graph, "edge list path")->required()->check(CLI::ExistingFile);
  c_gen->add_option("--fitness", gen.fitness, "modularity|density|clustcoef|conductance")
      ->required();
  c_gen->add_option("--out", gen.out, "archive output directory")->required();
  c_gen->add_option("--format", gen.format, "edge list format: ws|csv");
  c_gen->add_option("--population", gen.cfg.population, "population size");
  c_gen->add_option("--generations", gen.cfg.generations, "generation count");
  c_gen->add_option("--offspring", gen.cfg.offspring_per_gen, "offspring per generation");
  c_gen->add_option("--k-min", gen.cfg.k_min, "min initial communities");
  c_gen->add_option("--k-max", gen.cfg.k_max, "max initial communities");
  c_gen->add_option("--mutation-prob", gen.cfg.mutation_prob, "per-node mutation probability");
  c_gen->add_option("--elite-frac", gen.cfg.elite_frac, "elite fraction");
  c_gen->add_option("--roulette-frac", gen.cfg.roulette_frac, "roulette fraction");
  c_gen->add_option("--random-keep", gen.cfg.random_keep, "uniform survivors per generation");
  c_gen->add_option("--archive-cap", gen.cfg.archive_cap, "archive size cap");
  add_seed_option(c_gen, gen.cfg.seed);

  DetectArgs det;
  auto* c_det = app.add_subcommand("detect", "run a baseline community detector");
  c_det->add_option("--graph", det.graph, "edge list path")->required()->check(CLI::ExistingFile);
  c_det->add_option("--algo", det.algo, "single|louvain|labelprop")->required();
  c_det->add_option("--out", det.out, "partition output path")->required();
  c_det->add_option("--format", det.format, "edge list format: ws|csv");
  c_det->add_option("--resolution", det.resolution, "louvain resolution");
  c_det->add_option("--max-rounds", det.max_rounds, "label propagation round cap");
  add_seed_option(c_det, det.seed);

  MetricsArgs met;
  auto* c_met = app.add_subcommand("metrics", "11-property vector of one partition");
  c_met->add_option("--graph", met.graph, "edge list path")->required()->check(CLI::ExistingFile);
  c_met->add_option("--partition", met.partition, "partition path")
      ->required()
      ->check(CLI::ExistingFile);
  c_met->add_option("--out", met.out, "output csv path");
  c_met->add_option("--format", met.format, "edge list format: ws|csv");

  auto* c_task = app.add_subcommand("task", "downstream task evaluation");
  c_task->require_subcommand(1);

  AnomalyArgs an;
  auto* c_an = c_task->add_subcommand("anomaly", "node anomaly classification");
  c_an->add_option("--graph", an.graph, "edge list path")->required()->check(CLI::ExistingFile);
  c_an->add_option("--labels", an.labels, "node labels path")
      ->required()
      ->check(CLI::ExistingFile);
  auto* an_part = c_an->add_option("--partition", an.partition, "single partition path")
                      ->check(CLI::ExistingFile);
  auto* an_pool = c_an->add_option("--pool", an.pool, "archive directory");
  an_part->excludes(an_pool);
  c_an->add_option("--folds", an.folds, "cross-validation folds");
  c_an->add_option("--out", an.out, "results csv path");
  c_an->add_option("--format", an.format, "edge list format: ws|csv");
  add_seed_option(c_an, an.seed);

  TrustArgs tru;
  auto* c_tr = c_task->add_subcommand("trust", "trust edge prediction");
  c_tr->add_option("--graph", tru.graph, "edge list path")->required()->check(CLI::ExistingFile);
  c_tr->add_option("--ratings", tru.ratings, "ratings csv path")
      ->required()
      ->check(CLI::ExistingFile);
  c_tr->add_option("--trust", tru.trust, "trust edge list path")
      ->required()
      ->check(CLI::ExistingFile);
  c_tr->add_option("--centrality", tru.centrality,
                   "betweenness|max_degree|max_trustor|max_trustee|max_closeness|random")
      ->required();
  auto* tr_part = c_tr->add_option("--partition", tru.partition, "single partition path")
                      ->check(CLI::ExistingFile);
  auto* tr_pool = c_tr->add_option("--pool", tru.pool, "archive directory");
  tr_part->excludes(tr_pool);
  c_tr->add_option("--holdout", tru.holdout, "held-out trust edge fraction");
  c_tr->add_option("--out", tru.out, "results csv path");
  c_tr->add_option("--format", tru.format, "edge list format: ws|csv");
  add_seed_option(c_tr, tru.seed);

  auto* c_meta = app.add_subcommand("meta", "meta-prediction over solution pools");
  c_meta->require_subcommand(1);

  auto add_task_inputs = [](CLI::App* cmd, MetaTaskInputs& in) {
    cmd->add_option("--task", in.task, "anomaly|trust")->required();
    cmd->add_option("--graph", in.graph, "edge list path")->required()->check(CLI::ExistingFile);
    cmd->add_option("--labels", in.labels, "labels path (anomaly)")->check(CLI::ExistingFile);
    cmd->add_option("--ratings", in.ratings, "ratings path (trust)")->check(CLI::ExistingFile);
    cmd->add_option("--trust", in.trust, "trust path (trust)")->check(CLI::ExistingFile);
    cmd->add_option("--centrality", in.centrality, "centrality tag (trust)");
    cmd->add_option("--folds", in.folds, "anomaly cv folds");
    cmd->add_option("--holdout", in.holdout, "trust holdout fraction");
    cmd->add_option("--format", in.format, "edge list format: ws|csv");
    add_seed_option(cmd, in.seed);
  };
  auto add_budget = [](CLI::App* cmd, SampleBudget& b) {
    cmd->add_option("--budget-frac", b.max_fraction, "max oracle fraction of the pool");
    cmd->add_option("--seed-size", b.seed_size, "initial uniform sample");
    cmd->add_option("--batch", b.batch, "active sampling batch size");
    cmd->add_option("--bags", b.bag_count, "bootstrap ensembles per round");
  };

  MetaFitArgs mf;
  auto* c_mf = c_meta->add_subcommand("fit", "actively fit a property->metric model");
  c_mf->add_option("--pool", mf.pool, "archive directory")->required();
  c_mf->add_option("--model-out", mf.model_out, "model json path");
  add_task_inputs(c_mf, mf.task);
  add_budget(c_mf, mf.budget);

  MetaRankArgs mr;
  auto* c_mr = c_meta->add_subcommand("rank", "rank a pool by predicted metric");
  c_mr->add_option("--model", mr.model, "model json path")->required()->check(CLI::ExistingFile);
  c_mr->add_option("--pool", mr.pool, "archive directory")->required();
  c_mr->add_option("--out", mr.out, "ranked csv path");

  MetaTransferArgs mt;
  auto* c_mt = c_meta->add_subcommand("transfer", "cross-pool generalization rmse");
  c_mt->add_option("--train", mt.train_pool, "training archive directory")->required();
  c_mt->add_option("--test", mt.test_pool, "test archive directory")->required();
  c_mt->add_option("--out", mt.out, "summary json path");
  add_task_inputs(c_mt, mt.task);
  add_budget(c_mt, mt.budget);

  auto* c_rep = app.add_subcommand("report", "plot-ready summaries of an evaluated pool");
  c_rep->require_subcommand(1);
  ReportArgs re_ex, re_di, re_co;
  auto* c_re = c_rep->add_subcommand("extremes", "top/bottom fraction by a result metric");
  c_re->add_option("--pool", re_ex.pool, "archive directory")->required();
  c_re->add_option("--results", re_ex.results, "results csv (default pool/results.csv)");
  c_re->add_option("--metric", re_ex.metric, "f1|precision|recall|accuracy|auc");
  c_re->add_option("--frac", re_ex.frac, "extreme group fraction");
  c_re->add_option("--out", re_ex.out, "report output directory");
  auto* c_rd = c_rep->add_subcommand("distributions", "per-property five-number summaries");
  c_rd->add_option("--pool", re_di.pool, "archive directory")->required();
  c_rd->add_option("--out", re_di.out, "output csv path");
  auto* c_rc = c_rep->add_subcommand("correlations", "pairwise property correlations");
  c_rc->add_option("--pool", re_co.pool, "archive directory")->required();
  c_rc->add_option("--out", re_co.out, "output csv path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (c_gen->parsed()) return run_generate(gen, cs);
    if (c_det->parsed()) return run_detect(det, cs);
    if (c_met->parsed()) return run_metrics(met, cs);
    if (c_task->parsed()) {
      if (c_an->parsed()) {
        if (an.partition.empty() && an.pool.empty())
          throw ValidationError("task anomaly: need --partition or --pool");
        return run_task_anomaly(an, cs);
      }
      if (tru.partition.empty() && tru.pool.empty())
        throw ValidationError("task trust: need --partition or --pool");
      return run_task_trust(tru, cs);
    }
    if (c_meta->parsed()) {
      if (c_mf->parsed()) return run_meta_fit(mf, cs);
      if (c_mr->parsed()) return run_meta_rank(mr, cs);
      return run_meta_transfer(mt, cs);
    }
    if (c_rep->parsed()) {
      if (c_re->parsed()) return run_report_extremes(re_ex, cs);
      if (c_rd->parsed()) return run_report_distributions(re_di, cs);
      return run_report_correlations(re_co, cs);
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace forge
