#include "siglab/rng.hpp"

#include <cmath>
#include <string>

#include "siglab/errors.hpp"

namespace siglab::rng {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

}  // namespace

std::uint64_t mix64(std::uint64_t x) noexcept {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag) noexcept {
  return mix64(master + kGolden) ^ mix64(rotl(tag, 17) ^ 0xD1B54A32D192ED03ULL);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
    : seed_(seed), stream_id_(stream_id) {
  std::uint64_t sm = mix64(seed) ^ mix64(stream_id + kGolden);
  for (auto& word : state_) {
    sm += kGolden;
    word = mix64(sm);
  }
  // splitmix64 outputs are never all zero for four consecutive counters,
  // but keep the xoshiro precondition explicit.
  if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = kGolden;
}

std::uint64_t RngStream::next_u64() noexcept {
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double RngStream::next_unit() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

RngStream new_stream(std::uint64_t seed, std::uint64_t stream_id) noexcept {
  return RngStream(seed, stream_id);
}

// Lemire's multiply-shift with rejection on 32-bit draws; exact for any
// width up to 2^32.
std::int64_t uniform_int(RngStream& rng, std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw DomainError("uniform_int requires lo <= hi");
  const std::uint64_t width = static_cast<std::uint64_t>(hi - lo) + 1;
  if (width > (std::uint64_t{1} << 32)) throw DomainError("uniform_int range wider than 2^32");
  if (width == (std::uint64_t{1} << 32)) return lo + static_cast<std::int64_t>(rng.next_u64() >> 32);
  std::uint64_t m = (rng.next_u64() >> 32) * width;
  std::uint32_t low = static_cast<std::uint32_t>(m);
  if (low < width) {
    const std::uint32_t threshold = static_cast<std::uint32_t>((std::uint64_t{1} << 32) % width);
    while (low < threshold) {
      m = (rng.next_u64() >> 32) * width;
      low = static_cast<std::uint32_t>(m);
    }
  }
  return lo + static_cast<std::int64_t>(m >> 32);
}

double standard_normal(RngStream& rng) {
  if (rng.has_spare_) {
    rng.has_spare_ = false;
    return rng.spare_normal_;
  }
  double u, v, s;
  do {
    u = 2.0 * rng.next_unit() - 1.0;
    v = 2.0 * rng.next_unit() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  rng.spare_normal_ = v * factor;
  rng.has_spare_ = true;
  return u * factor;
}

SquareMatrix::SquareMatrix(std::size_t dim, std::vector<double> row_major)
    : dim_(dim), values_(std::move(row_major)) {
  if (values_.size() != dim * dim) throw DomainError("matrix data does not match dimension");
}

SquareMatrix SquareMatrix::identity(std::size_t dim) {
  SquareMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

SquareMatrix cholesky(const SquareMatrix& cov) {
  const std::size_t d = cov.dim();
  if (d == 0 || d > kMaxMvnDim) throw DomainError("cholesky supports 1 <= d <= 16");
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (std::fabs(cov(i, j) - cov(j, i)) > 1e-12) throw DomainError("covariance matrix is not symmetric");
    }
  }
  constexpr double kPivotTol = 1e-10;
  SquareMatrix l(d);
  for (std::size_t j = 0; j < d; ++j) {
    double pivot = cov(j, j);
    for (std::size_t k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
    if (pivot < -kPivotTol) {
      throw NotPositiveSemidefinite("covariance matrix is not positive semidefinite (pivot " +
                                    std::to_string(j) + " = " + std::to_string(pivot) + ")");
    }
    const double ljj = pivot > 0 ? std::sqrt(pivot) : 0.0;
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < d; ++i) {
      double s = cov(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = ljj > 0 ? s / ljj : 0.0;
    }
  }
  return l;
}

MvnSpec::MvnSpec(std::vector<double> mean, SquareMatrix cov)
    : mean_(std::move(mean)), cov_(std::move(cov)), chol_(cholesky(cov_)) {
  if (mean_.size() != cov_.dim()) throw DomainError("mean and covariance dimensions differ");
}

void mvn_sample(RngStream& rng, const MvnSpec& spec, std::span<double> out) {
  const std::size_t d = spec.dim();
  if (out.size() != d) throw DomainError("mvn_sample output has wrong size");
  std::array<double, kMaxMvnDim> z{};
  for (std::size_t i = 0; i < d; ++i) z[i] = standard_normal(rng);
  const SquareMatrix& l = spec.chol();
  for (std::size_t i = 0; i < d; ++i) {
    double s = spec.mean()[i];
    for (std::size_t k = 0; k <= i; ++k) s += l(i, k) * z[k];
    out[i] = s;
  }
}

std::vector<double> mvn_sample(RngStream& rng, const MvnSpec& spec) {
  std::vector<double> out(spec.dim());
  mvn_sample(rng, spec, out);
  return out;
}

}  // namespace siglab::rng
