#pragma once

// Scalar hypothesis tests and the multiplicity analytics.

#include <bitset>
#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace siglab::hyptests {

enum class Sidedness { one_tailed, two_tailed };

struct TestResult {
  double statistic = 0.0;
  std::optional<double> df;
  /// Tail probability in the direction of the observed deviation (for the
  /// z test) or the upper tail (for chi-squared).
  double p_one_tailed = 1.0;
  std::optional<double> p_two_tailed;
  double alpha = 0.05;
  Sidedness sidedness = Sidedness::two_tailed;
  bool reject = false;

  double decision_p() const {
    return sidedness == Sidedness::two_tailed && p_two_tailed ? *p_two_tailed : p_one_tailed;
  }
};

/// Named subset of {1, ..., 100}.
class EventSet {
 public:
  static constexpr int kUniverse = 100;

  EventSet(std::string name, std::vector<int> members);

  const std::string& name() const noexcept { return name_; }
  /// Sorted ascending.
  const std::vector<int>& members() const noexcept { return members_; }
  double prob() const noexcept { return static_cast<double>(members_.size()) / kUniverse; }
  bool contains(int value) const noexcept { return value >= 1 && value <= kUniverse && mask_[value]; }

 private:
  std::string name_;
  std::vector<int> members_;
  std::bitset<kUniverse + 1> mask_;
};

/// Repdigits, powers of 2, powers of 3, Fibonacci numbers, primes.
std::vector<EventSet> builtin_battery();

/// Parses `name: i1,i2,...` lines. Blank lines and `#` comments are skipped.
/// Throws DomainError naming the line on malformed input.
std::vector<EventSet> parse_event_sets(std::istream& in);
std::vector<EventSet> load_event_sets(const std::string& path);

/// z = sqrt(n) (count/n - p0) / sqrt(p0 (1 - p0)), no continuity correction.
/// Rejects when the decision p-value is <= alpha.
TestResult proportion_z_test(std::uint64_t count, std::uint64_t n, double p0, double alpha,
                             Sidedness sidedness = Sidedness::two_tailed);

/// Pearson goodness of fit, df = m - 1, upper tail.
TestResult chi_squared_gof(std::span<const std::uint64_t> counts, std::span<const double> probs,
                           double alpha);

/// Counts draws falling in `event` and runs the proportion test against
/// event.prob().
TestResult event_frequency_test(std::span<const int> draws, const EventSet& event, double alpha,
                                Sidedness sidedness = Sidedness::two_tailed);

/// Exact familywise size 1 - (1 - alpha)^k of k independent level-alpha tests.
double sidak_size(double alpha, int k);

/// min(1, k alpha).
double bonferroni_bound(double alpha, int k);

/// Kolmogorov-Smirnov distance sup |F_n(u) - u| of a sample from U(0, 1).
double ks_uniform_distance(std::vector<double> sample);

}  // namespace siglab::hyptests
