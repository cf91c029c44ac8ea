#include <gtest/gtest.h>

#include <cmath>

#include "siglab/errors.hpp"
#include "siglab/experiments.hpp"

using namespace siglab;
using namespace siglab::experiments;

TEST(RejectionCell, FrequencyAndStandardError) {
  const RejectionCell c{25, 100};
  EXPECT_DOUBLE_EQ(c.frequency(), 0.25);
  EXPECT_DOUBLE_EQ(c.mc_se(), std::sqrt(0.25 * 0.75 / 100));
  EXPECT_EQ(RejectionCell{}.frequency(), 0.0);
  EXPECT_EQ(RejectionCell{}.mc_se(), 0.0);
}

TEST(Exp1, ValidatesConfig) {
  Exp1Config cfg;
  cfg.n = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.reps = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.events.clear();
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.alpha = 0;
  try {
    cfg.validate();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "alpha");
  }
}

TEST(Exp1, SingleTrueNullEventHasNominalSize) {
  Exp1Config cfg;
  cfg.events = {hyptests::builtin_battery()[0]};
  cfg.seed = 101;
  const auto r = run_exp1(cfg);
  ASSERT_EQ(r.per_event.size(), 1u);
  EXPECT_GE(r.per_event[0].frequency(), 0.035);
  EXPECT_LE(r.per_event[0].frequency(), 0.065);
  EXPECT_EQ(r.familywise.rejections, r.per_event[0].rejections);
}

TEST(Exp1, BatteryFamilywiseRateIsBetweenAlphaAndBonferroni) {
  Exp1Config cfg;
  cfg.seed = 102;
  cfg.reps = 2000;
  const auto r = run_exp1(cfg);
  EXPECT_DOUBLE_EQ(r.bonferroni, 0.25);
  EXPECT_NEAR(r.sidak, 1 - std::pow(0.95, 5), 1e-15);
  EXPECT_LE(r.familywise.frequency(), std::min(1.0, 5 * 0.05) + 0.015);
  EXPECT_GE(r.familywise.frequency(), 0.05 - 0.015);
  for (std::size_t e = 0; e < r.per_event.size(); ++e) {
    EXPECT_LE(r.per_event[e].rejections, r.familywise.rejections);
    EXPECT_EQ(r.per_event[e].reps, cfg.reps);
  }
  EXPECT_EQ(r.gof_p_values.size(), cfg.reps);
}

TEST(Exp1, LevelOneRejectsEverything) {
  Exp1Config cfg;
  cfg.events = {hyptests::builtin_battery()[0]};
  cfg.alpha = 1.0;
  cfg.reps = 50;
  cfg.n = 1000;
  const auto r = run_exp1(cfg);
  EXPECT_EQ(r.familywise.frequency(), 1.0);
  EXPECT_EQ(r.gof.frequency(), 1.0);
}

TEST(Exp1, WorkerCountDoesNotChangeResults) {
  Exp1Config cfg;
  cfg.reps = 40;
  cfg.n = 5000;
  cfg.seed = 9;
  const auto a = run_exp1(cfg, 1);
  const auto b = run_exp1(cfg, 8);
  for (std::size_t e = 0; e < a.per_event.size(); ++e) EXPECT_EQ(a.per_event[e].rejections, b.per_event[e].rejections);
  EXPECT_EQ(a.gof_p_values, b.gof_p_values);
}

TEST(Exp2, ValidatesConfig) {
  Exp2Config cfg;
  cfg.k_values = {2, 99};
  try {
    cfg.validate();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "k");
  }
  cfg.k_values = {98};
  EXPECT_NO_THROW(cfg.validate());
  cfg.k_values = {0};
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.alphas = {0.05, 1.0};
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.reps = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Exp2, CellsAreAlphaMajorWithCriticalValues) {
  Exp2Config cfg;
  cfg.reps = 200;
  cfg.seed = 5;
  const auto r = run_exp2(cfg);
  ASSERT_EQ(r.cells.size(), 6u);
  EXPECT_EQ(r.cells[0].alpha, 0.05);
  EXPECT_EQ(r.cells[0].k, 2);
  EXPECT_EQ(r.cells[3].alpha, 0.10);
  EXPECT_EQ(r.cells[5].k, 4);
  EXPECT_NEAR(r.cell(0.05, 3).analytic_sidak, 0.142625, 1e-15);
  // t_{0.975}(97) and F_{0.95}(2, 97), frozen from an mpmath inversion.
  EXPECT_NEAR(r.cell(0.05, 2).t_critical, 1.984723186013984684750527, 1e-12);
  EXPECT_NEAR(r.cell(0.05, 2).f_critical, 3.090186675154860550543403, 1e-12);
  EXPECT_THROW(r.cell(0.01, 2), DomainError);
}

TEST(Exp2, SnoopingInflatesSizeButFDoesNot) {
  Exp2Config cfg;
  cfg.reps = 4000;
  cfg.seed = 6;
  const auto r = run_exp2(cfg);
  for (const auto& c : r.cells) {
    // Tolerances of roughly 4 Monte Carlo standard errors at 4000 reps.
    EXPECT_NEAR(c.tmax.frequency(), c.analytic_sidak, 0.03) << c.alpha << "," << c.k;
    EXPECT_NEAR(c.f.frequency(), c.alpha, 0.02) << c.alpha << "," << c.k;
    EXPECT_GE(c.tmax.frequency(), c.f.frequency() - 0.01);
  }
}

TEST(Exp2, SingleReplicationGivesZeroOrOne) {
  Exp2Config cfg;
  cfg.reps = 1;
  const auto r = run_exp2(cfg);
  for (const auto& c : r.cells) {
    EXPECT_TRUE(c.tmax.frequency() == 0.0 || c.tmax.frequency() == 1.0);
    EXPECT_TRUE(c.f.frequency() == 0.0 || c.f.frequency() == 1.0);
  }
}

TEST(Exp3, ValidatesConfig) {
  Exp3Config cfg;
  cfg.rhos = {0.5, 1.5};
  EXPECT_THROW(cfg.validate(), NotPositiveSemidefinite);
  cfg.rhos = {1.0};
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.error_variance = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.gamma_step = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.alpha_u_levels = {};
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.n = 3;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Exp3, DefaultGammaGrid) {
  const auto grid = Exp3Config{}.gamma_grid();
  ASSERT_EQ(grid.size(), 41u);
  EXPECT_EQ(grid.front(), -0.5);
  EXPECT_EQ(grid[20], 0.0);
  EXPECT_FALSE(std::signbit(grid[20]));
  EXPECT_EQ(grid[21], 0.025);
  EXPECT_EQ(grid.back(), 0.5);
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_EQ(grid[i], -grid[grid.size() - 1 - i]);
}

TEST(Exp3, PretestDistortsSizeOnlyAwayFromZero) {
  Exp3Config cfg;
  cfg.rhos = {0.9};
  cfg.gamma_min = -0.2;
  cfg.gamma_max = 0.2;
  cfg.gamma_step = 0.2;
  cfg.reps = 2000;
  cfg.seed = 44;
  const auto r = run_exp3(cfg);
  ASSERT_EQ(r.curves.size(), 1u);
  const auto& pts = r.curves[0].points;
  ASSERT_EQ(pts.size(), 3u);
  for (const auto& p : pts) {
    EXPECT_NEAR(p.unrestricted.frequency(), 0.05, 0.02);
    ASSERT_EQ(p.pms.size(), 3u);
  }
  // |gamma| = 0.2 with rho = 0.9 is far inside the distortion region.
  EXPECT_GT(pts[0].pms[0].frequency(), 0.5);
  EXPECT_GT(pts[2].pms[0].frequency(), 0.5);
  EXPECT_LT(pts[1].pms[0].frequency(), 0.1);
}

TEST(Exp3, PairedSeedsMakeCurvesNearlySymmetric) {
  Exp3Config cfg;
  cfg.rhos = {0.5};
  cfg.gamma_min = -0.2;
  cfg.gamma_max = 0.2;
  cfg.gamma_step = 0.1;
  cfg.reps = 1500;
  cfg.seed = 3;
  const auto r = run_exp3(cfg);
  const auto& pts = r.curves[0].points;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& mirror = pts[pts.size() - 1 - i];
    for (std::size_t a = 0; a < 3; ++a) EXPECT_NEAR(pts[i].pms[a].frequency(), mirror.pms[a].frequency(), 0.03);
  }
}

TEST(Exp3, InterceptDoesNotChangeDecisions) {
  Exp3Config cfg;
  cfg.rhos = {0.5};
  cfg.gamma_min = 0.1;
  cfg.gamma_max = 0.1;
  cfg.reps = 300;
  cfg.seed = 8;
  const auto a = run_exp3(cfg);
  cfg.delta_true = 3.0;
  const auto b = run_exp3(cfg);
  for (std::size_t k = 0; k < 3; ++k) {
    // Decisions may flip only on ties at the critical value; allow one.
    const auto da = static_cast<long>(a.curves[0].points[0].pms[k].rejections);
    const auto db = static_cast<long>(b.curves[0].points[0].pms[k].rejections);
    EXPECT_LE(std::labs(da - db), 1);
  }
}
