#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "forge/errors.hpp"
#include "forge/gbrt.hpp"
#include "forge/metrics.hpp"
#include "forge/rng.hpp"

namespace forge {

struct MetaRow {
  std::uint64_t id = 0;
  std::vector<double> features;
};

using Oracle = std::function<std::optional<double>(std::uint64_t)>;

struct SampleBudget {
  std::size_t seed_size = 32;
  std::size_t batch = 16;
  double max_fraction = 0.05;
  std::size_t bag_count = 10;
};

struct ActiveFitResult {
  GbrtModel model;
  std::vector<std::uint64_t> sampled_ids;  // oracle-queried training ids, query order
  double rmse_holdout = std::numeric_limits<double>::quiet_NaN();
  std::size_t holdout_size = 0;
  std::size_t oracle_failures = 0;
};

namespace detail {

inline void check_schema(const std::vector<MetaRow>& pool) {
  if (pool.empty()) throw ValidationError("meta: empty pool");
  for (const auto& r : pool)
    if (r.features.size() != pool[0].features.size())
      throw ValidationError("meta: inconsistent feature schema in pool");
}

inline double rmse(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(acc / static_cast<double>(a.size()));
}

}  // namespace detail

// Variance-based active sampling: seed uniformly, then repeatedly train
// `bag_count` bootstrap ensembles on the labelled rows and query the oracle
// for the unsampled ids with the highest prediction variance (budget-capped
// at max_fraction of the pool). A fixed 20% holdout is oracled only to
// measure rmse_holdout and is never trained on.
inline ActiveFitResult active_fit(const std::vector<MetaRow>& pool, const Oracle& oracle,
                                  const SampleBudget& budget, std::uint64_t seed,
                                  const std::string& target_name = "target",
                                  const GbrtParams& params = {}) {
  detail::check_schema(pool);
  if (pool.size() < budget.seed_size + budget.batch)
    throw ValidationError("meta: pool smaller than seed_size + batch");
  if (budget.max_fraction <= 0 || budget.max_fraction > 1)
    throw ValidationError("meta: max_fraction outside (0,1]");
  if (budget.bag_count < 2) throw ValidationError("meta: bag_count must be >= 2");

  const std::size_t n = pool.size();
  Rng hold_rng(Rng::derive(seed, 0x686f6c64ull));
  const std::size_t n_hold = std::max<std::size_t>(1, n / 5);
  const auto hold_picks = hold_rng.sample_indices(n, n_hold);
  std::vector<bool> is_holdout(n, false);
  for (const auto i : hold_picks) is_holdout[i] = true;

  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < n; ++i)
    if (!is_holdout[i]) candidates.push_back(i);

  std::size_t budget_total =
      static_cast<std::size_t>(budget.max_fraction * static_cast<double>(n));
  budget_total = std::min(budget_total, candidates.size());

  ActiveFitResult res;
  std::vector<std::size_t> train_rows;
  std::vector<double> train_y;
  std::vector<bool> unavailable(n, false);  // sampled or failed
  std::size_t attempts = 0;

  auto query = [&](std::size_t row) {
    unavailable[row] = true;
    ++attempts;
    const auto v = oracle(pool[row].id);
    if (!v) {
      ++res.oracle_failures;
      return;
    }
    train_rows.push_back(row);
    train_y.push_back(*v);
    res.sampled_ids.push_back(pool[row].id);
  };

  Rng seed_rng(Rng::derive(seed, 0x73656564ull));
  const std::size_t n_seed = std::min(budget.seed_size, budget_total);
  for (const auto i : seed_rng.sample_indices(candidates.size(), n_seed)) query(candidates[i]);

  std::size_t round = 0;
  while (attempts < budget_total) {
    std::vector<std::vector<double>> x;
    x.reserve(train_rows.size());
    for (const auto r : train_rows) x.push_back(pool[r].features);

    std::vector<std::size_t> open;
    for (const auto r : candidates)
      if (!unavailable[r]) open.push_back(r);
    if (open.empty()) break;

    std::vector<double> mean(open.size(), 0.0), m2(open.size(), 0.0);
    for (std::size_t b = 0; b < budget.bag_count; ++b) {
      Rng bag_rng(Rng::derive(seed, 0x626167ull + round, b));
      std::vector<std::vector<double>> bx;
      std::vector<double> by;
      bx.reserve(x.size());
      by.reserve(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) {
        const auto pick = bag_rng.index(x.size());
        bx.push_back(x[pick]);
        by.push_back(train_y[pick]);
      }
      const auto bag = fit_gbrt(bx, by, params);
      for (std::size_t i = 0; i < open.size(); ++i) {
        const double p = bag.predict(pool[open[i]].features);
        const double delta = p - mean[i];
        mean[i] += delta / static_cast<double>(b + 1);
        m2[i] += delta * (p - mean[i]);
      }
    }
    std::vector<std::size_t> order(open.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (m2[a] != m2[b]) return m2[a] > m2[b];
      return pool[open[a]].id < pool[open[b]].id;
    });
    const std::size_t take = std::min(budget.batch, budget_total - attempts);
    for (std::size_t i = 0; i < take && i < order.size(); ++i) query(open[order[i]]);
    ++round;
  }

  std::vector<std::vector<double>> x;
  x.reserve(train_rows.size());
  for (const auto r : train_rows) x.push_back(pool[r].features);
  res.model = fit_gbrt(x, train_y, params);
  if (PropertyVector::kCount == x[0].size()) {
    const auto& nm = PropertyVector::names();
    res.model.feature_names.assign(nm.begin(), nm.end());
  } else {
    res.model.feature_names.assign(x[0].size(), "f");
  }
  res.model.target_name = target_name;

  std::vector<double> hold_pred, hold_true;
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_holdout[i]) continue;
    ++res.holdout_size;
    const auto v = oracle(pool[i].id);
    if (!v) {
      ++res.oracle_failures;
      continue;
    }
    hold_true.push_back(*v);
    hold_pred.push_back(res.model.predict(pool[i].features));
  }
  if (!hold_true.empty()) res.rmse_holdout = detail::rmse(hold_pred, hold_true);
  return res;
}

// Ids ordered by predicted target descending; exact prediction ties fall
// back to ascending id, so a constant model yields plain id order.
inline std::vector<std::uint64_t> rank_solutions(const GbrtModel& m,
                                                 const std::vector<MetaRow>& pool) {
  detail::check_schema(pool);
  std::vector<std::pair<double, std::uint64_t>> scored;
  scored.reserve(pool.size());
  for (const auto& r : pool) scored.push_back({m.predict(r.features), r.id});
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<std::uint64_t> ids;
  ids.reserve(scored.size());
  for (const auto& [s, id] : scored) {
    (void)s;
    ids.push_back(id);
  }
  return ids;
}

struct TransferResult {
  double rmse = std::numeric_limits<double>::quiet_NaN();
  ActiveFitResult fit;
  std::size_t test_rows = 0;
};

// active_fit on the training pool, then RMSE against the oracle on a
// 200-row uniform sample of the test pool.
inline TransferResult transfer_eval(const std::vector<MetaRow>& train_pool,
                                    const std::vector<MetaRow>& test_pool,
                                    const Oracle& oracle_train, const Oracle& oracle_test,
                                    const SampleBudget& budget, std::uint64_t seed,
                                    const GbrtParams& params = {}) {
  detail::check_schema(train_pool);
  detail::check_schema(test_pool);
  if (train_pool[0].features.size() != test_pool[0].features.size())
    throw ValidationError("meta: train/test feature schemas differ");

  TransferResult out;
  out.fit = active_fit(train_pool, oracle_train, budget, seed, "target", params);

  Rng rng(Rng::derive(seed, 0x7472616e73ull));
  const std::size_t want = std::min<std::size_t>(200, test_pool.size());
  const auto picks = rng.sample_indices(test_pool.size(), want);
  std::vector<double> pred, truth;
  for (const auto i : picks) {
    const auto v = oracle_test(test_pool[i].id);
    if (!v) continue;
    truth.push_back(*v);
    pred.push_back(out.fit.model.predict(test_pool[i].features));
  }
  if (truth.empty()) throw ValidationError("meta: no oracle values on the test sample");
  out.test_rows = truth.size();
  out.rmse = detail::rmse(pred, truth);
  return out;
}

}  // namespace forge
