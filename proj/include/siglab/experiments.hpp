#pragma once

// The three Monte Carlo size studies.
//
//   exp1  event-battery p-hacking: repeated proportion tests on uniform draws
//         from {1..100}, with a chi-squared goodness-of-fit companion.
//   exp2  max-|t| snooping vs the joint F test in a lag regression of two
//         independent white-noise series.
//   exp3  inference on beta after a pretest on gamma decides whether z stays
//         in the regression.
//
// Every runner validates its config (ConfigError naming the field), then
// hands replications to run_replications.

#include <cstdint>
#include <string>
#include <vector>

#include "siglab/hyptests.hpp"

namespace siglab::experiments {

struct RejectionCell {
  std::uint64_t rejections = 0;
  std::uint64_t reps = 0;

  double frequency() const { return reps ? static_cast<double>(rejections) / static_cast<double>(reps) : 0.0; }
  /// sqrt(f (1 - f) / reps)
  double mc_se() const;
};

// ---- exp1 ------------------------------------------------------------------

struct Exp1Config {
  std::uint64_t n = 100000;
  std::vector<hyptests::EventSet> events = hyptests::builtin_battery();
  double alpha = 0.05;
  std::uint64_t reps = 2000;
  std::uint64_t seed = 0;

  void validate() const;
};

struct Exp1Report {
  Exp1Config config;
  std::vector<RejectionCell> per_event;  // parallel to config.events
  RejectionCell familywise;              // at least one event rejected
  RejectionCell gof;                     // chi-squared over the 100 cells
  std::vector<double> gof_p_values;      // one per replication, in order
  double sidak = 0.0;
  double bonferroni = 0.0;
};

Exp1Report run_exp1(const Exp1Config& cfg, int workers = 0);

// ---- exp2 ------------------------------------------------------------------

struct Exp2Config {
  std::uint64_t n = 100;
  std::vector<int> k_values = {2, 3, 4};
  std::vector<double> alphas = {0.05, 0.10};
  std::uint64_t reps = 10000;
  std::uint64_t seed = 0;

  void validate() const;
};

struct Exp2Cell {
  double alpha = 0.0;
  int k = 0;
  RejectionCell tmax;
  RejectionCell f;
  double t_critical = 0.0;  // t_{1-alpha/2}(n-k-1)
  double f_critical = 0.0;  // F_{1-alpha}(k, n-k-1)
  double analytic_sidak = 0.0;
};

struct Exp2Report {
  Exp2Config config;
  std::vector<Exp2Cell> cells;  // alpha-major, then k, in config order

  const Exp2Cell& cell(double alpha, int k) const;
};

Exp2Report run_exp2(const Exp2Config& cfg, int workers = 0);

// ---- exp3 ------------------------------------------------------------------

struct Exp3Config {
  std::uint64_t n = 100;
  std::vector<double> rhos = {0.5, 0.9};
  double beta_true = 1.0;
  double beta0 = 1.0;
  double delta_true = 0.0;
  double error_variance = 0.5;
  double gamma_min = -0.5;
  double gamma_max = 0.5;
  double gamma_step = 0.025;
  double alpha = 0.05;
  std::vector<double> alpha_u_levels = {0.01, 0.05, 0.10};
  std::uint64_t reps = 5000;
  std::uint64_t seed = 0;

  void validate() const;
  /// gamma_min, gamma_min + step, ..., gamma_max (inclusive, snapped to 1e-12).
  std::vector<double> gamma_grid() const;
};

struct Exp3Point {
  double gamma = 0.0;
  std::vector<RejectionCell> pms;  // parallel to config.alpha_u_levels
  RejectionCell unrestricted;
};

struct Exp3Curve {
  double rho = 0.0;
  std::vector<Exp3Point> points;

  /// max over the grid of the PMS rejection frequency for one pretest level.
  double max_pms_frequency(std::size_t alpha_u_index) const;
};

struct Exp3Report {
  Exp3Config config;
  std::vector<Exp3Curve> curves;  // parallel to config.rhos
};

Exp3Report run_exp3(const Exp3Config& cfg, int workers = 0);

}  // namespace siglab::experiments
