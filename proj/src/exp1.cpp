#include <array>
#include <cmath>

#include "siglab/errors.hpp"
#include "siglab/experiments.hpp"
#include "siglab/replication.hpp"

namespace siglab::experiments {

void Exp1Config::validate() const {
  if (n < 1) throw ConfigError("n", "must be >= 1");
  if (reps < 1) throw ConfigError("reps", "must be >= 1");
  if (events.empty()) throw ConfigError("events", "at least one event is required");
  if (!(alpha > 0 && alpha <= 1)) throw ConfigError("alpha", "must lie in (0, 1]");
}

Exp1Report run_exp1(const Exp1Config& cfg, int workers) {
  cfg.validate();
  constexpr int kCells = hyptests::EventSet::kUniverse;
  const std::size_t n_events = cfg.events.size();
  const std::size_t fwer_slot = n_events;
  const std::size_t gof_slot = n_events + 1;
  const std::vector<double> uniform(kCells, 1.0 / kCells);

  auto task = [&](rng::RngStream& rng, std::span<std::uint8_t> hit, std::span<double> obs) {
    std::array<std::uint64_t, kCells> counts{};
    for (std::uint64_t i = 0; i < cfg.n; ++i) ++counts[static_cast<std::size_t>(rng::uniform_int(rng, 1, kCells) - 1)];

    bool any = false;
    for (std::size_t e = 0; e < n_events; ++e) {
      std::uint64_t in_event = 0;
      for (int m : cfg.events[e].members()) in_event += counts[static_cast<std::size_t>(m - 1)];
      const auto result = hyptests::proportion_z_test(in_event, cfg.n, cfg.events[e].prob(), cfg.alpha);
      hit[e] = result.reject;
      any = any || result.reject;
    }
    hit[fwer_slot] = any;

    const auto gof = hyptests::chi_squared_gof(counts, uniform, cfg.alpha);
    hit[gof_slot] = gof.reject;
    obs[0] = gof.p_one_tailed;
  };

  const auto totals = run_replications(task, {n_events + 2, 1}, cfg.reps, cfg.seed, workers);

  Exp1Report report;
  report.config = cfg;
  for (std::size_t e = 0; e < n_events; ++e) report.per_event.push_back({totals.counts[e], cfg.reps});
  report.familywise = {totals.counts[fwer_slot], cfg.reps};
  report.gof = {totals.counts[gof_slot], cfg.reps};
  report.gof_p_values = totals.observations;
  const int k = static_cast<int>(n_events);
  report.sidak = hyptests::sidak_size(cfg.alpha, k);
  report.bonferroni = hyptests::bonferroni_bound(cfg.alpha, k);
  return report;
}

}  // namespace siglab::experiments
