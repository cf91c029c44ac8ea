#include "siglab/hyptests.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "siglab/distributions.hpp"
#include "siglab/errors.hpp"

namespace siglab::hyptests {
namespace {

void check_level(double alpha) {
  if (!(alpha > 0 && alpha <= 1)) throw DomainError("significance level must lie in (0, 1]");
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace

EventSet::EventSet(std::string name, std::vector<int> members)
    : name_(std::move(name)), members_(std::move(members)) {
  if (name_.empty()) throw DomainError("event name must not be empty");
  if (members_.empty()) throw DomainError("event '" + name_ + "' has no members");
  std::sort(members_.begin(), members_.end());
  for (std::size_t i = 0; i < members_.size(); ++i) {
    const int m = members_[i];
    if (m < 1 || m > kUniverse) {
      throw DomainError("event '" + name_ + "' member " + std::to_string(m) + " outside [1, 100]");
    }
    if (i > 0 && members_[i - 1] == m) {
      throw DomainError("event '" + name_ + "' lists " + std::to_string(m) + " twice");
    }
    mask_.set(static_cast<std::size_t>(m));
  }
}

std::vector<EventSet> builtin_battery() {
  std::vector<int> primes;
  for (int v = 2; v <= EventSet::kUniverse; ++v) {
    bool prime = true;
    for (int d = 2; d * d <= v; ++d) prime = prime && v % d != 0;
    if (prime) primes.push_back(v);
  }
  return {
      EventSet("repdigits", {11, 22, 33, 44, 55, 66, 77, 88, 99}),
      EventSet("powers_of_2", {2, 4, 8, 16, 32, 64}),
      EventSet("powers_of_3", {3, 9, 27, 81}),
      EventSet("fibonacci", {2, 3, 5, 8, 13, 21, 34, 55, 89}),
      EventSet("primes", std::move(primes)),
  };
}

std::vector<EventSet> parse_event_sets(std::istream& in) {
  std::vector<EventSet> events;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line.substr(0, line.find('#')));
    if (body.empty()) continue;
    const auto where = "line " + std::to_string(line_no) + ": ";
    const auto colon = body.find(':');
    if (colon == std::string::npos) throw DomainError(where + "expected 'name: i1,i2,...'");
    std::string name = trim(std::string_view(body).substr(0, colon));
    std::vector<int> members;
    std::stringstream list(body.substr(colon + 1));
    std::string item;
    while (std::getline(list, item, ',')) {
      const std::string token = trim(item);
      int value = 0;
      const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
      if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
        throw DomainError(where + "'" + token + "' is not an integer");
      }
      members.push_back(value);
    }
    try {
      events.emplace_back(std::move(name), std::move(members));
    } catch (const DomainError& e) {
      throw DomainError(where + e.what());
    }
  }
  return events;
}

std::vector<EventSet> load_event_sets(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open event file '" + path + "'");
  return parse_event_sets(in);
}

TestResult proportion_z_test(std::uint64_t count, std::uint64_t n, double p0, double alpha, Sidedness sidedness) {
  if (n == 0) throw DomainError("proportion_z_test requires n > 0");
  if (count > n) throw DomainError("proportion_z_test requires count <= n");
  if (!(p0 > 0 && p0 < 1)) throw DomainError("proportion_z_test requires 0 < p0 < 1");
  check_level(alpha);
  const double nn = static_cast<double>(n);
  const double phat = static_cast<double>(count) / nn;
  TestResult r;
  r.statistic = std::sqrt(nn) * (phat - p0) / std::sqrt(p0 * (1 - p0));
  r.p_one_tailed = dist::normal_cdf(-std::fabs(r.statistic));
  r.p_two_tailed = std::min(1.0, 2 * r.p_one_tailed);
  r.alpha = alpha;
  r.sidedness = sidedness;
  r.reject = r.decision_p() <= alpha;
  return r;
}

TestResult chi_squared_gof(std::span<const std::uint64_t> counts, std::span<const double> probs, double alpha) {
  if (counts.size() != probs.size()) throw DomainError("chi_squared_gof: counts and probs differ in length");
  if (counts.size() < 2) throw DomainError("chi_squared_gof needs at least two cells");
  check_level(alpha);
  double total_p = 0.0;
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!(probs[i] > 0)) throw DomainError("chi_squared_gof: cell probabilities must be positive");
    total_p += probs[i];
    n += counts[i];
  }
  if (std::fabs(total_p - 1.0) > 1e-12) throw DomainError("chi_squared_gof: probabilities must sum to 1");
  if (n == 0) throw DomainError("chi_squared_gof: no observations");

  const double nn = static_cast<double>(n);
  double stat = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double expected = nn * probs[i];
    const double diff = static_cast<double>(counts[i]) - expected;
    stat += diff * diff / expected;
  }
  const double df = static_cast<double>(counts.size() - 1);
  TestResult r;
  r.statistic = stat;
  r.df = df;
  r.p_one_tailed = dist::chi_squared_sf(stat, dist::DegreesOfFreedom(df));
  r.alpha = alpha;
  r.sidedness = Sidedness::one_tailed;
  r.reject = r.p_one_tailed <= alpha;
  return r;
}

TestResult event_frequency_test(std::span<const int> draws, const EventSet& event, double alpha,
                                Sidedness sidedness) {
  if (draws.empty()) throw DomainError("event_frequency_test: no draws");
  std::uint64_t hits = 0;
  for (int d : draws) {
    if (d < 1 || d > EventSet::kUniverse) {
      throw DomainError("event_frequency_test: draw " + std::to_string(d) + " outside [1, 100]");
    }
    hits += event.contains(d) ? 1 : 0;
  }
  return proportion_z_test(hits, draws.size(), event.prob(), alpha, sidedness);
}

double sidak_size(double alpha, int k) {
  if (!(alpha > 0 && alpha <= 1)) throw DomainError("sidak_size requires 0 < alpha <= 1");
  if (k < 1) throw DomainError("sidak_size requires k >= 1");
  if (k == 1) return alpha;
  return -std::expm1(k * std::log1p(-alpha));
}

double bonferroni_bound(double alpha, int k) {
  if (!(alpha > 0 && alpha <= 1)) throw DomainError("bonferroni_bound requires 0 < alpha <= 1");
  if (k < 1) throw DomainError("bonferroni_bound requires k >= 1");
  return std::min(1.0, k * alpha);
}

double ks_uniform_distance(std::vector<double> sample) {
  if (sample.empty()) throw DomainError("ks_uniform_distance: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double u = sample[i];
    d = std::max({d, static_cast<double>(i + 1) / n - u, u - static_cast<double>(i) / n});
  }
  return d;
}

}  // namespace siglab::hyptests
