#include <algorithm>
#include <cmath>

#include "siglab/distributions.hpp"
#include "siglab/errors.hpp"
#include "siglab/experiments.hpp"
#include "siglab/linmodel.hpp"
#include "siglab/replication.hpp"

namespace siglab::experiments {
namespace {

rng::MvnSpec regressor_spec(double rho, double error_variance) {
  return rng::MvnSpec({0.0, 0.0, 0.0}, rng::SquareMatrix(3, {1.0, rho, 0.0,  //
                                                              rho, 1.0, 0.0,  //
                                                              0.0, 0.0, error_variance}));
}

std::uint64_t quantized_tag(double v) { return static_cast<std::uint64_t>(std::llround(v * 1e9)); }

}  // namespace

void Exp3Config::validate() const {
  if (n < 4) throw ConfigError("n", "must be >= 4 (the unrestricted model has n - 3 residual df)");
  if (reps < 1) throw ConfigError("reps", "must be >= 1");
  if (rhos.empty()) throw ConfigError("rho", "at least one correlation is required");
  if (!(error_variance > 0)) throw ConfigError("error_variance", "must be > 0");
  for (double rho : rhos) {
    // Builds the covariance first so an impossible correlation surfaces as
    // NotPositiveSemidefinite.
    (void)regressor_spec(rho, error_variance);
    if (!(std::fabs(rho) < 1)) throw ConfigError("rho", "must satisfy |rho| < 1");
  }
  if (!(gamma_step > 0)) throw ConfigError("gamma_step", "must be > 0");
  if (!(gamma_max >= gamma_min)) throw ConfigError("gamma_max", "must be >= gamma_min");
  if (!(alpha > 0 && alpha < 1)) throw ConfigError("alpha", "must lie in (0, 1)");
  if (alpha_u_levels.empty()) throw ConfigError("alpha_u", "at least one pretest level is required");
  for (double a : alpha_u_levels) {
    if (!(a > 0 && a < 1)) throw ConfigError("alpha_u", "levels must lie in (0, 1)");
  }
}

std::vector<double> Exp3Config::gamma_grid() const {
  const auto steps = static_cast<std::size_t>(std::floor((gamma_max - gamma_min) / gamma_step + 1e-9));
  std::vector<double> grid;
  grid.reserve(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    const double g = gamma_min + static_cast<double>(i) * gamma_step;
    grid.push_back(std::round(g * 1e12) / 1e12 + 0.0);
  }
  return grid;
}

double Exp3Curve::max_pms_frequency(std::size_t alpha_u_index) const {
  double best = 0.0;
  for (const auto& p : points) best = std::max(best, p.pms.at(alpha_u_index).frequency());
  return best;
}

Exp3Report run_exp3(const Exp3Config& cfg, int workers) {
  cfg.validate();
  const std::size_t n = cfg.n;
  const std::size_t n_levels = cfg.alpha_u_levels.size();
  const dist::DegreesOfFreedom df_r(static_cast<double>(n - 2));
  const dist::DegreesOfFreedom df_u(static_cast<double>(n - 3));

  // Critical values depend only on the config, not on the grid cell.
  const double crit_r = dist::student_t_quantile(1 - cfg.alpha / 2, df_r);
  const double crit_u = dist::student_t_quantile(1 - cfg.alpha / 2, df_u);
  std::vector<double> crit_pretest(n_levels);
  for (std::size_t a = 0; a < n_levels; ++a) {
    crit_pretest[a] = dist::student_t_quantile(1 - cfg.alpha_u_levels[a] / 2, df_u);
  }

  const std::vector<double> grid = cfg.gamma_grid();
  const std::size_t drop_z[] = {2};

  Exp3Report report;
  report.config = cfg;
  for (double rho : cfg.rhos) {
    const rng::MvnSpec spec = regressor_spec(rho, cfg.error_variance);
    Exp3Curve curve;
    curve.rho = rho;
    const std::uint64_t rho_seed = rng::derive_seed(cfg.seed, quantized_tag(rho));

    for (double gamma : grid) {
      auto task = [&](rng::RngStream& rng, std::span<std::uint8_t> hit, std::span<double>) {
        // Column-major [1 | x | z].
        std::vector<double> design(3 * n);
        std::vector<double> y(n);
        double draw[3];
        for (std::size_t i = 0; i < n; ++i) {
          rng::mvn_sample(rng, spec, draw);
          design[i] = 1.0;
          design[n + i] = draw[0];
          design[2 * n + i] = draw[1];
          y[i] = cfg.delta_true + cfg.beta_true * draw[0] + gamma * draw[1] + draw[2];
        }
        const linmodel::DesignMatrix unrestricted(n, 3, std::move(design));
        const auto fit_u = linmodel::ols_fit(unrestricted, y);
        const auto fit_r = linmodel::ols_fit(unrestricted.without_columns(drop_z), y);

        const double t_gamma = std::fabs(linmodel::t_stat(fit_u, 2, 0.0));
        const bool reject_u = std::fabs(linmodel::t_stat(fit_u, 1, cfg.beta0)) > crit_u;
        const bool reject_r = std::fabs(linmodel::t_stat(fit_r, 1, cfg.beta0)) > crit_r;
        for (std::size_t a = 0; a < n_levels; ++a) {
          const bool keep_restricted = t_gamma <= crit_pretest[a];
          hit[a] = keep_restricted ? reject_r : reject_u;
        }
        hit[n_levels] = reject_u;
      };

      // +gamma and -gamma share a seed, pairing the two halves of the curve.
      const std::uint64_t cell_seed = rng::derive_seed(rho_seed, quantized_tag(std::fabs(gamma)));
      const auto totals = run_replications(task, {n_levels + 1, 0}, cfg.reps, cell_seed, workers);

      Exp3Point point;
      point.gamma = gamma;
      for (std::size_t a = 0; a < n_levels; ++a) point.pms.push_back({totals.counts[a], cfg.reps});
      point.unrestricted = {totals.counts[n_levels], cfg.reps};
      curve.points.push_back(std::move(point));
    }
    report.curves.push_back(std::move(curve));
  }
  return report;
}

}  // namespace siglab::experiments
