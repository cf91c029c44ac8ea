#include "siglab/linmodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "siglab/errors.hpp"

namespace siglab::linmodel {
namespace {

constexpr double kRankTol = 1e-10;

void check_subset(std::span<const std::size_t> subset, std::size_t cols, const char* who) {
  if (subset.empty()) throw DomainError(std::string(who) + ": subset must be non-empty");
  std::vector<bool> seen(cols, false);
  for (std::size_t j : subset) {
    if (j == 0) throw DomainError(std::string(who) + ": the intercept cannot be tested");
    if (j >= cols) throw DomainError(std::string(who) + ": coefficient index out of range");
    if (seen[j]) throw DomainError(std::string(who) + ": duplicate coefficient index");
    seen[j] = true;
  }
}

}  // namespace

DesignMatrix::DesignMatrix(std::size_t rows, std::size_t cols, std::vector<double> column_major,
                           std::vector<std::string> labels)
    : rows_(rows), cols_(cols), values_(std::move(column_major)), labels_(std::move(labels)) {
  if (cols_ == 0) throw DomainError("design needs at least the intercept column");
  if (rows_ < cols_) throw DomainError("design needs at least as many rows as columns");
  if (values_.size() != rows_ * cols_) throw DomainError("design data does not match its shape");
  for (std::size_t i = 0; i < rows_; ++i) {
    if (values_[i] != 1.0) throw DomainError("first design column must be all ones");
  }
  if (labels_.empty()) {
    labels_.emplace_back("const");
    for (std::size_t j = 1; j < cols_; ++j) labels_.push_back("x" + std::to_string(j));
  }
  if (labels_.size() != cols_) throw DomainError("one label per design column required");
}

DesignMatrix DesignMatrix::with_intercept(const std::vector<std::vector<double>>& columns,
                                          std::vector<std::string> labels) {
  if (columns.empty()) throw DomainError("with_intercept needs at least one regressor");
  const std::size_t n = columns.front().size();
  std::vector<double> data(n, 1.0);
  data.reserve(n * (columns.size() + 1));
  for (const auto& c : columns) {
    if (c.size() != n) throw DomainError("regressor columns differ in length");
    data.insert(data.end(), c.begin(), c.end());
  }
  if (!labels.empty()) labels.insert(labels.begin(), "const");
  return DesignMatrix(n, columns.size() + 1, std::move(data), std::move(labels));
}

DesignMatrix DesignMatrix::without_columns(std::span<const std::size_t> drop) const {
  std::vector<bool> dropped(cols_, false);
  for (std::size_t j : drop) {
    if (j == 0 || j >= cols_) throw DomainError("without_columns: invalid column index");
    dropped[j] = true;
  }
  std::vector<double> data;
  std::vector<std::string> labels;
  std::size_t kept = 0;
  for (std::size_t j = 0; j < cols_; ++j) {
    if (dropped[j]) continue;
    auto col = column(j);
    data.insert(data.end(), col.begin(), col.end());
    labels.push_back(labels_[j]);
    ++kept;
  }
  return DesignMatrix(rows_, kept, std::move(data), std::move(labels));
}

DesignMatrix build_lag_matrix(std::span<const double> series, std::size_t k, std::size_t n) {
  if (k < 1) throw DomainError("build_lag_matrix requires k >= 1");
  if (series.size() < n + k - 1) throw DomainError("series shorter than n + k - 1");
  std::vector<double> data(n * (k + 1));
  std::fill_n(data.begin(), n, 1.0);
  std::vector<std::string> labels{"const"};
  for (std::size_t h = 0; h < k; ++h) {
    // Column h+1 holds x_{t-h}.
    double* col = data.data() + (h + 1) * n;
    for (std::size_t t = 0; t < n; ++t) col[t] = series[t + k - 1 - h];
    labels.push_back(h == 0 ? "x_t" : "x_t-" + std::to_string(h));
  }
  return DesignMatrix(n, k + 1, std::move(data), std::move(labels));
}

RegressionFit ols_fit(const DesignMatrix& x, std::span<const double> y) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  if (y.size() != n) throw DomainError("response length differs from design rows");
  if (n <= p) throw DomainError("ols_fit needs more rows than columns");

  // Householder QR in place: R ends up in the upper triangle of `a`, and
  // `qty` accumulates Q^T y.
  std::vector<double> a(n * p);
  for (std::size_t j = 0; j < p; ++j) std::copy_n(x.column(j).begin(), n, a.begin() + j * n);
  std::vector<double> qty(y.begin(), y.end());
  std::vector<double> v(n);

  auto apply = [&](double* col, std::size_t j, double vtv) {
    double s = 0.0;
    for (std::size_t i = j; i < n; ++i) s += v[i] * col[i];
    const double f = 2.0 * s / vtv;
    for (std::size_t i = j; i < n; ++i) col[i] -= f * v[i];
  };

  std::vector<double> diag(p);
  for (std::size_t j = 0; j < p; ++j) {
    double* cj = a.data() + j * n;
    double norm = 0.0;
    for (std::size_t i = j; i < n; ++i) norm += cj[i] * cj[i];
    norm = std::sqrt(norm);
    if (norm == 0.0) {
      diag[j] = 0.0;
      continue;
    }
    const double alpha = cj[j] > 0 ? -norm : norm;
    for (std::size_t i = j; i < n; ++i) v[i] = cj[i];
    v[j] -= alpha;
    double vtv = 0.0;
    for (std::size_t i = j; i < n; ++i) vtv += v[i] * v[i];
    if (vtv > 0) {
      for (std::size_t c = j + 1; c < p; ++c) apply(a.data() + c * n, j, vtv);
      apply(qty.data(), j, vtv);
    }
    cj[j] = alpha;
    diag[j] = alpha;
  }

  double largest = 0.0;
  for (double d : diag) largest = std::max(largest, std::fabs(d));
  for (std::size_t j = 0; j < p; ++j) {
    if (!(std::fabs(diag[j]) >= kRankTol * largest) || largest == 0.0) {
      throw RankDeficient("design matrix is rank deficient at column " + std::to_string(j) + " (" +
                          x.labels()[j] + ")");
    }
  }

  auto r = [&](std::size_t i, std::size_t j) { return a[j * n + i]; };

  RegressionFit fit;
  fit.beta_hat.assign(p, 0.0);
  for (std::size_t jj = p; jj-- > 0;) {
    double s = qty[jj];
    for (std::size_t c = jj + 1; c < p; ++c) s -= r(jj, c) * fit.beta_hat[c];
    fit.beta_hat[jj] = s / r(jj, jj);
  }

  double rss = 0.0;
  for (std::size_t i = p; i < n; ++i) rss += qty[i] * qty[i];
  fit.rss = rss;
  fit.df_resid = n - p;
  fit.sigma2_hat = rss / static_cast<double>(fit.df_resid);

  // diag((X^T X)^{-1}) = row norms of R^{-1}.
  std::vector<double> rinv(p * p, 0.0);  // row-major upper triangular
  for (std::size_t j = 0; j < p; ++j) {
    rinv[j * p + j] = 1.0 / r(j, j);
    for (std::size_t i = j; i-- > 0;) {
      double s = 0.0;
      for (std::size_t k = i + 1; k <= j; ++k) s += r(i, k) * rinv[k * p + j];
      rinv[i * p + j] = -s / r(i, i);
    }
  }
  fit.xtx_inv_diag.assign(p, 0.0);
  fit.se.assign(p, 0.0);
  fit.t_ratios.assign(p, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t j = 0; j < p; ++j) {
    double s = 0.0;
    for (std::size_t k = j; k < p; ++k) s += rinv[j * p + k] * rinv[j * p + k];
    fit.xtx_inv_diag[j] = s;
    fit.se[j] = std::sqrt(fit.sigma2_hat * s);
    if (fit.se[j] > 0) fit.t_ratios[j] = fit.beta_hat[j] / fit.se[j];
  }
  return fit;
}

double t_stat(const RegressionFit& fit, std::size_t j, double b0) {
  if (j >= fit.beta_hat.size()) throw DomainError("t_stat: coefficient index out of range");
  if (!(fit.se[j] > 0)) throw DegenerateStatistic("t_stat: standard error is zero");
  return (fit.beta_hat[j] - b0) / fit.se[j];
}

double f_stat_subset_zero(const RegressionFit& fit_u, const DesignMatrix& x, std::span<const double> y,
                          std::span<const std::size_t> subset) {
  check_subset(subset, x.cols(), "f_stat_subset_zero");
  if (fit_u.beta_hat.size() != x.cols()) throw DomainError("f_stat_subset_zero: fit does not match design");
  if (!(fit_u.rss > 0)) throw DegenerateStatistic("f_stat_subset_zero: unrestricted RSS is zero");
  const RegressionFit fit_r = ols_fit(x.without_columns(subset), y);
  const double q = static_cast<double>(subset.size());
  // rss_R >= rss_U in exact arithmetic; clamp rounding noise.
  const double gain = std::max(0.0, fit_r.rss - fit_u.rss);
  return (gain / q) / fit_u.sigma2_hat;
}

double max_abs_t(const RegressionFit& fit, std::span<const std::size_t> subset) {
  check_subset(subset, fit.beta_hat.size(), "max_abs_t");
  double best = 0.0;
  for (std::size_t j : subset) best = std::max(best, std::fabs(fit.t_ratios[j]));
  return best;
}

}  // namespace siglab::linmodel
