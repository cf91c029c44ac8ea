#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace siglab {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Covariance matrix has a pivot below -1e-10 during factorization.
class NotPositiveSemidefinite : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Design matrix pivot fell below the relative rank threshold.
class RankDeficient : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Statistic undefined for the given fit (zero standard error or zero RSS).
class DegenerateStatistic : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid experiment configuration. `field` names the offending setting.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A replication task threw; carries the replication index.
class ReplicationError : public std::runtime_error {
 public:
  ReplicationError(std::uint64_t replication, const std::string& what)
      : std::runtime_error("replication " + std::to_string(replication) + ": " + what),
        replication_(replication) {}

  std::uint64_t replication() const noexcept { return replication_; }

 private:
  std::uint64_t replication_;
};

}  // namespace siglab
