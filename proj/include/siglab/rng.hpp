#pragma once

// Deterministic random streams and the samplers built on them.
//
// Generator: xoshiro256** (Blackman & Vigna). A stream is keyed by
// (seed, stream_id); the four state words are the first four outputs of
// splitmix64 started from
//
//     mix64(seed) ^ mix64(stream_id + 0x9E3779B97F4A7C15)
//
// where mix64 is the splitmix64 finalizer. Reference vectors for
// (seed=42, stream_id=0) are pinned in tests/test_rng.cpp.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace siglab::rng {

/// splitmix64 finalizer (a bijective 64-bit avalanche).
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for an independent sub-experiment ("cell") of a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag) noexcept;

/// Single-owner pseudo-random stream. Copying duplicates the state.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform on [0, 1) with 53 random bits.
  double next_unit() noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

 private:
  friend double standard_normal(RngStream& rng);

  std::array<std::uint64_t, 4> state_{};
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

RngStream new_stream(std::uint64_t seed, std::uint64_t stream_id) noexcept;

/// Exactly uniform integer in [lo, hi]; width hi - lo + 1 must be <= 2^32.
std::int64_t uniform_int(RngStream& rng, std::int64_t lo, std::int64_t hi);

/// N(0, 1) by the Marsaglia polar method; the second variate of each pair
/// is cached on the stream.
double standard_normal(RngStream& rng);

/// Dense row-major square matrix, small d only.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t dim) : dim_(dim), values_(dim * dim, 0.0) {}
  SquareMatrix(std::size_t dim, std::vector<double> row_major);

  static SquareMatrix identity(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  double& operator()(std::size_t r, std::size_t c) { return values_[r * dim_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * dim_ + c]; }

 private:
  std::size_t dim_ = 0;
  std::vector<double> values_;
};

inline constexpr std::size_t kMaxMvnDim = 16;

/// Lower-triangular L with L L^T = cov. Pivots in [-1e-10, 0) are clamped
/// to zero; anything lower throws NotPositiveSemidefinite. Throws
/// DomainError if cov is not symmetric within 1e-12 or d > kMaxMvnDim.
SquareMatrix cholesky(const SquareMatrix& cov);

/// Mean and covariance of a multivariate normal, with its Cholesky factor.
class MvnSpec {
 public:
  MvnSpec(std::vector<double> mean, SquareMatrix cov);

  std::size_t dim() const noexcept { return mean_.size(); }
  const std::vector<double>& mean() const noexcept { return mean_; }
  const SquareMatrix& cov() const noexcept { return cov_; }
  const SquareMatrix& chol() const noexcept { return chol_; }

 private:
  std::vector<double> mean_;
  SquareMatrix cov_;
  SquareMatrix chol_;
};

/// Writes mean + L z into `out` (size dim) using dim standard normals.
void mvn_sample(RngStream& rng, const MvnSpec& spec, std::span<double> out);
std::vector<double> mvn_sample(RngStream& rng, const MvnSpec& spec);

}  // namespace siglab::rng
