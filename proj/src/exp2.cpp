#include <algorithm>
#include <cmath>
#include <numeric>

#include "siglab/distributions.hpp"
#include "siglab/errors.hpp"
#include "siglab/experiments.hpp"
#include "siglab/linmodel.hpp"
#include "siglab/replication.hpp"

namespace siglab::experiments {

void Exp2Config::validate() const {
  if (reps < 1) throw ConfigError("reps", "must be >= 1");
  if (k_values.empty()) throw ConfigError("k", "at least one lag count is required");
  for (int k : k_values) {
    if (k < 1) throw ConfigError("k", "lag counts must be >= 1");
    if (static_cast<std::uint64_t>(k) + 1 >= n) {
      throw ConfigError("k", "k=" + std::to_string(k) + " leaves no residual degrees of freedom (need k < n - 1)");
    }
  }
  if (alphas.empty()) throw ConfigError("alpha", "at least one level is required");
  for (double a : alphas) {
    if (!(a > 0 && a < 1)) throw ConfigError("alpha", "levels must lie in (0, 1)");
  }
}

const Exp2Cell& Exp2Report::cell(double alpha, int k) const {
  for (const auto& c : cells) {
    if (c.k == k && std::fabs(c.alpha - alpha) < 1e-12) return c;
  }
  throw DomainError("exp2 report has no cell for alpha=" + std::to_string(alpha) + ", k=" + std::to_string(k));
}

Exp2Report run_exp2(const Exp2Config& cfg, int workers) {
  cfg.validate();
  const std::size_t n = cfg.n;
  const std::size_t n_alpha = cfg.alphas.size();

  Exp2Report report;
  report.config = cfg;
  report.cells.resize(n_alpha * cfg.k_values.size());

  for (std::size_t ki = 0; ki < cfg.k_values.size(); ++ki) {
    const int k = cfg.k_values[ki];
    const auto ku = static_cast<std::size_t>(k);
    const dist::DegreesOfFreedom df_resid(static_cast<double>(n - ku - 1));
    const dist::DegreesOfFreedom df_num(static_cast<double>(k));

    std::vector<double> t_crit(n_alpha), f_crit(n_alpha);
    for (std::size_t a = 0; a < n_alpha; ++a) {
      t_crit[a] = dist::student_t_quantile(1 - cfg.alphas[a] / 2, df_resid);
      f_crit[a] = dist::f_quantile(1 - cfg.alphas[a], df_num, df_resid);
    }
    std::vector<std::size_t> slopes(ku);
    std::iota(slopes.begin(), slopes.end(), std::size_t{1});

    auto task = [&](rng::RngStream& rng, std::span<std::uint8_t> hit, std::span<double>) {
      std::vector<double> x(n + ku - 1), y(n);
      for (double& v : x) v = rng::standard_normal(rng);
      for (double& v : y) v = rng::standard_normal(rng);
      const auto design = linmodel::build_lag_matrix(x, ku, n);
      const auto fit = linmodel::ols_fit(design, y);
      const double tmax = linmodel::max_abs_t(fit, slopes);
      const double f = linmodel::f_stat_subset_zero(fit, design, y, slopes);
      for (std::size_t a = 0; a < n_alpha; ++a) {
        hit[2 * a] = tmax > t_crit[a];
        hit[2 * a + 1] = f > f_crit[a];
      }
    };

    // Independent data per lag count: each k gets its own derived seed.
    const auto totals =
        run_replications(task, {2 * n_alpha, 0}, cfg.reps, rng::derive_seed(cfg.seed, static_cast<std::uint64_t>(k)), workers);

    for (std::size_t a = 0; a < n_alpha; ++a) {
      Exp2Cell& c = report.cells[a * cfg.k_values.size() + ki];
      c.alpha = cfg.alphas[a];
      c.k = k;
      c.tmax = {totals.counts[2 * a], cfg.reps};
      c.f = {totals.counts[2 * a + 1], cfg.reps};
      c.t_critical = t_crit[a];
      c.f_critical = f_crit[a];
      c.analytic_sidak = hyptests::sidak_size(cfg.alphas[a], k);
    }
  }
  return report;
}

}  // namespace siglab::experiments
