#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "forge/errors.hpp"

namespace forge {

// Column-wise mean/std scaler; constant columns get std 1 so they map to 0.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> stddev;

  [[nodiscard]] static Standardizer fit(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw ValidationError("standardize: no rows");
    const std::size_t d = rows[0].size();
    Standardizer s;
    s.mean.assign(d, 0.0);
    s.stddev.assign(d, 0.0);
    for (const auto& r : rows)
      for (std::size_t j = 0; j < d; ++j) s.mean[j] += r[j];
    for (std::size_t j = 0; j < d; ++j) s.mean[j] /= static_cast<double>(rows.size());
    for (const auto& r : rows)
      for (std::size_t j = 0; j < d; ++j) {
        const double dj = r[j] - s.mean[j];
        s.stddev[j] += dj * dj;
      }
    for (std::size_t j = 0; j < d; ++j) {
      s.stddev[j] = std::sqrt(s.stddev[j] / static_cast<double>(rows.size()));
      if (s.stddev[j] == 0.0) s.stddev[j] = 1.0;
    }
    return s;
  }

  std::vector<double> apply(const std::vector<double>& row) const {
    std::vector<double> out(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) out[j] = (row[j] - mean[j]) / stddev[j];
    return out;
  }
};

namespace detail {

// Gaussian elimination with partial pivoting; returns false on a (near-)
// singular system.
inline bool solve_linear(std::vector<std::vector<double>> a, std::vector<double> b,
                         std::vector<double>& x) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    if (std::fabs(a[piv][col]) < 1e-12) return false;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  x.assign(n, 0.0);
  for (std::size_t ri = n; ri-- > 0;) {
    double acc = b[ri];
    for (std::size_t c = ri + 1; c < n; ++c) acc -= a[ri][c] * x[c];
    x[ri] = acc / a[ri][ri];
  }
  return true;
}

}  // namespace detail

struct LinearModel {
  std::vector<double> weights;  // one per feature
  double intercept = 0;
  bool used_ridge_fallback = false;

  double score(const std::vector<double>& row) const {
    double s = intercept;
    for (std::size_t j = 0; j < weights.size(); ++j) s += weights[j] * row[j];
    return s;
  }
};

// OLS via normal equations; a singular Gram matrix falls back to ridge with
// lambda = 1e-6 (intercept unpenalized).
inline LinearModel ols_fit(const std::vector<std::vector<double>>& rows,
                           const std::vector<double>& target) {
  if (rows.empty() || rows.size() != target.size()) throw ValidationError("ols: bad inputs");
  const std::size_t d = rows[0].size();
  const std::size_t n = d + 1;  // intercept last
  std::vector<std::vector<double>> xtx(n, std::vector<double>(n, 0.0));
  std::vector<double> xty(n, 0.0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t a = 0; a < n; ++a) {
      const double xa = a < d ? rows[i][a] : 1.0;
      xty[a] += xa * target[i];
      for (std::size_t b = a; b < n; ++b) {
        const double xb = b < d ? rows[i][b] : 1.0;
        xtx[a][b] += xa * xb;
      }
    }
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < a; ++b) xtx[a][b] = xtx[b][a];

  LinearModel m;
  std::vector<double> sol;
  if (!detail::solve_linear(xtx, xty, sol)) {
    constexpr double lambda = 1e-6;
    for (std::size_t a = 0; a < d; ++a) xtx[a][a] += lambda;
    if (!detail::solve_linear(xtx, xty, sol))
      throw ValidationError("ols: singular system even with ridge fallback");
    m.used_ridge_fallback = true;
  }
  m.weights.assign(sol.begin(), sol.begin() + static_cast<std::ptrdiff_t>(d));
  m.intercept = sol[d];
  return m;
}

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Full-batch gradient descent on mean log loss.
inline LinearModel logistic_fit(const std::vector<std::vector<double>>& rows,
                                const std::vector<int>& labels, double lr = 0.1,
                                std::size_t epochs = 500) {
  if (rows.empty() || rows.size() != labels.size()) throw ValidationError("logistic: bad inputs");
  const std::size_t d = rows[0].size();
  LinearModel m;
  m.weights.assign(d, 0.0);
  const double inv_n = 1.0 / static_cast<double>(rows.size());
  std::vector<double> grad(d, 0.0);
  for (std::size_t e = 0; e < epochs; ++e) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad0 = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const double err = sigmoid(m.score(rows[i])) - static_cast<double>(labels[i]);
      grad0 += err;
      for (std::size_t j = 0; j < d; ++j) grad[j] += err * rows[i][j];
    }
    m.intercept -= lr * grad0 * inv_n;
    for (std::size_t j = 0; j < d; ++j) m.weights[j] -= lr * grad[j] * inv_n;
  }
  return m;
}

}  // namespace forge
