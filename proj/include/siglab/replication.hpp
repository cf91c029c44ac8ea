#pragma once

// Monte Carlo replication runner.
//
// Replication r always draws from rng::new_stream(seed, r), so results do not
// depend on execution order or on the number of workers. Boolean outcomes
// are aggregated by integer summation; real-valued observations are stored
// per replication index.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "siglab/rng.hpp"

namespace siglab::experiments {

struct ReplicationLayout {
  std::size_t outcomes = 0;      // boolean outcomes per replication
  std::size_t observations = 0;  // real values kept per replication
};

/// One replication. `outcomes` arrives zeroed; set entries to 1 for events
/// that occurred. Must not touch shared mutable state.
using ReplicationTask =
    std::function<void(rng::RngStream& rng, std::span<std::uint8_t> outcomes, std::span<double> observations)>;

struct ReplicationTotals {
  std::uint64_t reps = 0;
  std::vector<std::uint64_t> counts;  // one per outcome
  std::vector<double> observations;   // reps x layout.observations, row-major by replication

  std::span<const double> observation_row(std::uint64_t r, std::size_t width) const {
    return {observations.data() + r * width, width};
  }
};

/// OpenMP-parallel runner. `workers` <= 0 uses the OpenMP default. Task
/// exceptions are rethrown as ReplicationError for the lowest failing index.
ReplicationTotals run_replications(const ReplicationTask& task, ReplicationLayout layout, std::uint64_t reps,
                                   std::uint64_t seed, int workers = 0);

/// Single-threaded reference implementation of run_replications.
ReplicationTotals run_replications_serial(const ReplicationTask& task, ReplicationLayout layout,
                                          std::uint64_t reps, std::uint64_t seed);

}  // namespace siglab::experiments
