#pragma once

// Classical homoskedastic OLS with coefficient t-ratios and subset F tests.
// Column 0 of every design is the intercept; it is never tested.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace siglab::linmodel {

/// n x p design matrix stored column-major, first column all ones.
class DesignMatrix {
 public:
  /// `columns` and `labels` exclude the intercept, which is prepended. All
  /// columns must have the same length n >= p.
  static DesignMatrix with_intercept(const std::vector<std::vector<double>>& columns,
                                     std::vector<std::string> labels = {});

  /// Takes ownership of column-major data whose first column is all ones.
  DesignMatrix(std::size_t rows, std::size_t cols, std::vector<double> column_major,
               std::vector<std::string> labels = {});

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[j * rows_ + i]; }
  std::span<const double> column(std::size_t j) const {
    return {values_.data() + j * rows_, rows_};
  }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  /// Same design with the listed (non-intercept) columns removed.
  DesignMatrix without_columns(std::span<const std::size_t> drop) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;
  std::vector<std::string> labels_;
};

struct RegressionFit {
  std::vector<double> beta_hat;
  double rss = 0.0;
  double sigma2_hat = 0.0;  // rss / (n - p)
  std::vector<double> se;
  std::vector<double> t_ratios;  // beta_hat / se, NaN where se == 0
  std::size_t df_resid = 0;
  std::vector<double> xtx_inv_diag;
};

/// Design [1, x_t, x_{t-1}, ..., x_{t-k+1}] for t = 1..n. The first k-1
/// entries of `series` are the starting values, so row t (0-based) reads
/// series[t + k - 1], series[t + k - 2], ..., series[t]. Only the first
/// n + k - 1 entries are used.
DesignMatrix build_lag_matrix(std::span<const double> series, std::size_t k, std::size_t n);

/// Least squares by Householder QR. Requires n > p. Throws RankDeficient if some |R_jj|
/// falls below 1e-10 times the largest |R_ii|.
RegressionFit ols_fit(const DesignMatrix& x, std::span<const double> y);

/// (beta_hat[j] - b0) / se[j]; throws DegenerateStatistic if se[j] == 0.
double t_stat(const RegressionFit& fit, std::size_t j, double b0);

/// F statistic for H0: beta_j = 0 for all j in `subset`, by refitting the
/// restricted model. Distributed F(q, n - p) under H0.
double f_stat_subset_zero(const RegressionFit& fit_u, const DesignMatrix& x, std::span<const double> y,
                          std::span<const std::size_t> subset);

/// max over `subset` of |t_ratios[j]|.
double max_abs_t(const RegressionFit& fit, std::span<const std::size_t> subset);

}  // namespace siglab::linmodel
