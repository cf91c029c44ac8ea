#include "siglab/replication.hpp"

#include <omp.h>

#include <cmath>
#include <exception>
#include <limits>
#include <string>

#include "siglab/errors.hpp"
#include "siglab/experiments.hpp"

namespace siglab::experiments {
namespace {

void check_reps(std::uint64_t reps) {
  if (reps < 1) throw ConfigError("reps", "must be >= 1");
}

std::string describe(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const std::exception& ex) {
    return ex.what();
  } catch (...) {
    return "unknown exception";
  }
}

}  // namespace

ReplicationTotals run_replications_serial(const ReplicationTask& task, ReplicationLayout layout,
                                          std::uint64_t reps, std::uint64_t seed) {
  check_reps(reps);
  ReplicationTotals totals;
  totals.reps = reps;
  totals.counts.assign(layout.outcomes, 0);
  totals.observations.assign(reps * layout.observations, 0.0);
  std::vector<std::uint8_t> outcomes(layout.outcomes);
  for (std::uint64_t r = 0; r < reps; ++r) {
    rng::RngStream stream = rng::new_stream(seed, r);
    std::fill(outcomes.begin(), outcomes.end(), 0);
    std::span<double> obs(totals.observations.data() + r * layout.observations, layout.observations);
    try {
      task(stream, outcomes, obs);
    } catch (...) {
      throw ReplicationError(r, describe(std::current_exception()));
    }
    for (std::size_t i = 0; i < layout.outcomes; ++i) totals.counts[i] += outcomes[i] ? 1 : 0;
  }
  return totals;
}

ReplicationTotals run_replications(const ReplicationTask& task, ReplicationLayout layout, std::uint64_t reps,
                                   std::uint64_t seed, int workers) {
  check_reps(reps);
  if (workers <= 0) workers = omp_get_max_threads();
  if (workers == 1) return run_replications_serial(task, layout, reps, seed);

  ReplicationTotals totals;
  totals.reps = reps;
  totals.counts.assign(layout.outcomes, 0);
  totals.observations.assign(reps * layout.observations, 0.0);

  std::uint64_t first_failure = std::numeric_limits<std::uint64_t>::max();
  std::exception_ptr failure;
  const auto n = static_cast<std::int64_t>(reps);

#pragma omp parallel num_threads(workers)
  {
    std::vector<std::uint64_t> local(layout.outcomes, 0);
    std::vector<std::uint8_t> outcomes(layout.outcomes);
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
      const auto r = static_cast<std::uint64_t>(i);
      rng::RngStream stream = rng::new_stream(seed, r);
      std::fill(outcomes.begin(), outcomes.end(), 0);
      std::span<double> obs(totals.observations.data() + r * layout.observations, layout.observations);
      try {
        task(stream, outcomes, obs);
        for (std::size_t k = 0; k < layout.outcomes; ++k) local[k] += outcomes[k] ? 1 : 0;
      } catch (...) {
#pragma omp critical(siglab_replication_failure)
        {
          if (r < first_failure) {
            first_failure = r;
            failure = std::current_exception();
          }
        }
      }
    }
#pragma omp critical(siglab_replication_merge)
    for (std::size_t k = 0; k < layout.outcomes; ++k) totals.counts[k] += local[k];
  }

  if (failure) throw ReplicationError(first_failure, describe(failure));
  return totals;
}

double RejectionCell::mc_se() const {
  if (reps == 0) return 0.0;
  const double f = frequency();
  return std::sqrt(f * (1 - f) / static_cast<double>(reps));
}

}  // namespace siglab::experiments
