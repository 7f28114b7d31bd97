#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "forge/errors.hpp"
#include "forge/eval.hpp"
#include "forge/io.hpp"
#include "forge/metrics.hpp"

namespace forge {

inline std::vector<std::string> results_csv_header(bool with_centrality) {
  std::vector<std::string> h{"solution_id", "class",   "precision", "recall",
                             "f1",          "support", "accuracy",  "auc"};
  if (with_centrality) h.push_back("centrality");
  return h;
}

// Two rows per solution (class 0 and class 1); failed solutions are skipped
// here and reported through the run log.
inline void write_results_csv(const std::filesystem::path& path,
                              const std::vector<PoolEvalRow>& rows,
                              const std::string& centrality = "") {
  std::vector<std::vector<std::string>> out;
  for (const auto& r : rows) {
    if (!r.ok) continue;
    for (int cls = 0; cls <= 1; ++cls) {
      const auto& m = r.result.cls[cls];
      std::vector<std::string> row{std::to_string(r.id),          std::to_string(cls),
                                   fmt_double(m.precision),       fmt_double(m.recall),
                                   fmt_double(m.f1),              std::to_string(m.support),
                                   fmt_double(r.result.accuracy), fmt_double(r.result.auc)};
      if (!centrality.empty()) row.push_back(centrality);
      out.push_back(std::move(row));
    }
  }
  write_csv(path, results_csv_header(!centrality.empty()), out);
}

// Per-solution class-1 row of a results.csv, keyed by solution id.
struct ResultRow {
  double precision = 0, recall = 0, f1 = 0, accuracy = 0, auc = 0;
};

inline std::map<std::uint64_t, ResultRow> read_results_csv(const std::filesystem::path& path) {
  const auto lines = read_text_lines(path);
  if (lines.empty()) throw ValidationError("empty results csv: " + path.string());
  const auto header = split_csv(lines[0]);
  const auto base = results_csv_header(false);
  if (header.size() < base.size() ||
      !std::equal(base.begin(), base.end(), header.begin()))
    throw ValidationError("unexpected results.csv header in " + path.string());
  std::map<std::uint64_t, ResultRow> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto cells = split_csv(lines[i]);
    if (cells.size() != header.size()) throw ParseError("wrong column count", i + 1);
    if (cells[1] != "1") continue;  // rank and report on the class-1 rows
    ResultRow r;
    r.precision = std::stod(cells[2]);
    r.recall = std::stod(cells[3]);
    r.f1 = std::stod(cells[4]);
    r.accuracy = std::stod(cells[6]);
    r.auc = std::stod(cells[7]);
    out[std::stoull(cells[0])] = r;
  }
  if (out.empty()) throw ValidationError("no class-1 rows in " + path.string());
  return out;
}

inline double metric_from_result(const ResultRow& r, const std::string& metric) {
  if (metric == "f1") return r.f1;
  if (metric == "precision") return r.precision;
  if (metric == "recall") return r.recall;
  if (metric == "accuracy") return r.accuracy;
  if (metric == "auc") return r.auc;
  throw ValidationError("unknown metric '" + metric + "'");
}

struct ExtremesReport {
  // parallel arrays, sorted by metric descending then id
  std::vector<std::uint64_t> ids;
  std::vector<std::string> group;  // top | mid | bottom
  std::vector<double> metric;
  std::vector<PropertyVector> properties;
  bool tie_warning = false;
  std::size_t group_size = 0;
};

// Tags the ceil(frac*n) best and worst solutions by the chosen metric; ties
// across a group boundary fall back to id order and raise tie_warning.
inline ExtremesReport report_extremes(const std::vector<std::uint64_t>& ids,
                                      const std::vector<double>& metric,
                                      const std::vector<PropertyVector>& properties,
                                      double frac = 0.03) {
  if (ids.size() != metric.size() || ids.size() != properties.size())
    throw ValidationError("extremes: input size mismatch");
  if (frac <= 0 || frac >= 0.5) throw ValidationError("extremes: frac outside (0, 0.5)");
  const std::size_t n = ids.size();
  const auto g = static_cast<std::size_t>(std::ceil(frac * static_cast<double>(n)));
  if (n < 2 * g || g == 0)
    throw ValidationError("extremes: need at least " +
                          std::to_string(static_cast<std::size_t>(std::ceil(2.0 / frac))) +
                          " solutions");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (metric[a] != metric[b]) return metric[a] > metric[b];
    return ids[a] < ids[b];
  });

  ExtremesReport rep;
  rep.group_size = g;
  rep.tie_warning = metric[order[g - 1]] == metric[order[g]] ||
                    metric[order[n - g]] == metric[order[n - g - 1]];
  for (std::size_t pos = 0; pos < n; ++pos) {
    const auto i = order[pos];
    rep.ids.push_back(ids[i]);
    rep.metric.push_back(metric[i]);
    rep.properties.push_back(properties[i]);
    rep.group.push_back(pos < g ? "top" : pos >= n - g ? "bottom" : "mid");
  }
  return rep;
}

inline double median_of_sorted(const std::vector<double>& v) {
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

inline void write_extremes_csv(const std::filesystem::path& dir, const ExtremesReport& rep,
                               const std::string& metric_name) {
  std::vector<std::string> header{"solution_id", "group", metric_name};
  for (const auto& nm : PropertyVector::names()) header.push_back(nm);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < rep.ids.size(); ++i) {
    std::vector<std::string> row{std::to_string(rep.ids[i]), rep.group[i],
                                 fmt_double(rep.metric[i])};
    for (const auto v : rep.properties[i].values()) row.push_back(fmt_double(v));
    rows.push_back(std::move(row));
  }
  write_csv(dir / "extremes.csv", header, rows);

  std::vector<std::string> sum_header{"group", std::string("median_") + metric_name};
  for (const auto& nm : PropertyVector::names()) sum_header.push_back("median_" + nm);
  std::vector<std::vector<std::string>> sum_rows;
  for (const std::string grp : {"top", "mid", "bottom"}) {
    std::vector<double> ms;
    std::vector<std::vector<double>> props(PropertyVector::kCount);
    for (std::size_t i = 0; i < rep.ids.size(); ++i) {
      if (rep.group[i] != grp) continue;
      ms.push_back(rep.metric[i]);
      const auto vals = rep.properties[i].values();
      for (std::size_t j = 0; j < PropertyVector::kCount; ++j) props[j].push_back(vals[j]);
    }
    if (ms.empty()) continue;
    std::sort(ms.begin(), ms.end());
    std::vector<std::string> row{grp, fmt_double(median_of_sorted(ms))};
    for (auto& col : props) {
      std::sort(col.begin(), col.end());
      row.push_back(fmt_double(median_of_sorted(col)));
    }
    sum_rows.push_back(std::move(row));
  }
  write_csv(dir / "extremes_summary.csv", sum_header, sum_rows);
}

struct DistributionSummary {
  std::vector<std::string> property;
  std::vector<double> min, q1, median, q3, max;
};

// Five-number summary per property; quartiles use linear interpolation
// between order statistics.
inline DistributionSummary report_distributions(const std::vector<PropertyVector>& rows) {
  if (rows.empty()) throw ValidationError("distributions: no rows");
  auto quantile = [](const std::vector<double>& sorted, double p) {
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double t = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - t) + sorted[hi] * t;
  };
  DistributionSummary s;
  const auto names = PropertyVector::names();
  for (std::size_t j = 0; j < PropertyVector::kCount; ++j) {
    std::vector<double> col;
    col.reserve(rows.size());
    for (const auto& r : rows) col.push_back(r.values()[j]);
    std::sort(col.begin(), col.end());
    s.property.push_back(names[j]);
    s.min.push_back(col.front());
    s.q1.push_back(quantile(col, 0.25));
    s.median.push_back(quantile(col, 0.5));
    s.q3.push_back(quantile(col, 0.75));
    s.max.push_back(col.back());
  }
  return s;
}

inline void write_distributions_csv(const std::filesystem::path& path,
                                    const DistributionSummary& s) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t j = 0; j < s.property.size(); ++j)
    rows.push_back({s.property[j], fmt_double(s.min[j]), fmt_double(s.q1[j]),
                    fmt_double(s.median[j]), fmt_double(s.q3[j]), fmt_double(s.max[j])});
  write_csv(path, {"property", "min", "q1", "median", "q3", "max"}, rows);
}

inline void write_correlations_csv(const std::filesystem::path& path,
                                   const CorrelationResult& corr) {
  const auto names = PropertyVector::names();
  std::vector<std::string> header{"property"};
  for (const auto& nm : names) header.push_back(nm);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < PropertyVector::kCount; ++i) {
    std::vector<std::string> row{names[i]};
    for (std::size_t j = 0; j < PropertyVector::kCount; ++j)
      row.push_back(fmt_double(corr.r[i][j]));
    rows.push_back(std::move(row));
  }
  write_csv(path, header, rows);
}

}  // namespace forge
