#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "siglab/errors.hpp"
#include "siglab/replication.hpp"

using namespace siglab;
using namespace siglab::experiments;

namespace {

// Three outcomes with different rates plus the first uniform as observation.
void coin_task(rng::RngStream& rng, std::span<std::uint8_t> hit, std::span<double> obs) {
  const double u = rng.next_unit();
  hit[0] = u < 0.05;
  hit[1] = u < 0.5;
  hit[2] = rng::standard_normal(rng) > 1.0;
  obs[0] = u;
}

}  // namespace

TEST(Replication, SerialAndParallelAgree) {
  const auto serial = run_replications_serial(coin_task, {3, 1}, 20001, 77);
  for (int workers : {1, 2, 3, 8}) {
    const auto par = run_replications(coin_task, {3, 1}, 20001, 77, workers);
    EXPECT_EQ(par.counts, serial.counts) << workers << " workers";
    EXPECT_EQ(par.observations, serial.observations) << workers << " workers";
  }
}

TEST(Replication, SingleReplicationEqualsDirectCall) {
  const auto totals = run_replications(coin_task, {3, 1}, 1, 5, 4);
  auto stream = rng::new_stream(5, 0);
  std::uint8_t hit[3] = {};
  double obs[1] = {};
  coin_task(stream, hit, obs);
  for (int k = 0; k < 3; ++k) EXPECT_EQ(totals.counts[static_cast<std::size_t>(k)], hit[k]);
  EXPECT_EQ(totals.observations[0], obs[0]);
  EXPECT_EQ(totals.observation_row(0, 1)[0], obs[0]);
}

TEST(Replication, DifferentSeedsGiveDifferentCounts) {
  const auto a = run_replications(coin_task, {3, 1}, 10000, 1);
  const auto b = run_replications(coin_task, {3, 1}, 10000, 2);
  EXPECT_NE(a.counts, b.counts);
}

TEST(Replication, CountsAreSane) {
  const auto t = run_replications(coin_task, {3, 1}, 40000, 9);
  EXPECT_EQ(t.reps, 40000u);
  EXPECT_NEAR(t.counts[0] / 40000.0, 0.05, 5 * std::sqrt(0.05 * 0.95 / 40000));
  EXPECT_NEAR(t.counts[1] / 40000.0, 0.5, 5 * std::sqrt(0.25 / 40000));
}

TEST(Replication, ZeroRepsIsConfigError) {
  EXPECT_THROW(run_replications(coin_task, {3, 1}, 0, 1), ConfigError);
  EXPECT_THROW(run_replications_serial(coin_task, {3, 1}, 0, 1), ConfigError);
}

TEST(Replication, ErrorCarriesLowestFailingIndex) {
  auto task = [](rng::RngStream& rng, std::span<std::uint8_t>, std::span<double>) {
    if (rng.stream_id() == 37 || rng.stream_id() == 812) throw std::runtime_error("boom");
  };
  for (int workers : {1, 4}) {
    try {
      run_replications(task, {1, 0}, 1000, 3, workers);
      FAIL() << "expected ReplicationError";
    } catch (const ReplicationError& e) {
      EXPECT_EQ(e.replication(), 37u);
      EXPECT_NE(std::string(e.what()).find("boom"), std::string::npos);
    }
  }
}
