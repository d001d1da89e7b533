#pragma once

#include <array>
#include <cstdint>

namespace confirm {

/// Counter-based random stream (Philox4x32-10).
///
/// A draw is a pure function of (seed, stream_id, position): the stream
/// carries no hidden state beyond its position counter. Streams with
/// different ids are independent, so replications and patients can each own
/// one and run on any thread in any order with identical results.
///
/// A single RngStream must not be advanced from two threads at once.
class RngStream {
 public:
  constexpr RngStream(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t position = 0) noexcept
      : seed_(seed), stream_id_(stream_id), position_(position) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  std::uint64_t position() const noexcept { return position_; }

  /// 64 random bits for the current position; advances by one.
  std::uint64_t next_u64() noexcept;

  /// Uniform on the open interval (0, 1) with 53-bit resolution.
  double next_uniform() noexcept;

  /// Standard normal via inversion of the uniform draw (one position per
  /// draw, so positions map one-to-one onto variates).
  double next_standard_normal();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t position_;
};

/// The raw Philox4x32-10 bijection, exposed for known-answer tests.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) noexcept;

/// N(mean, sd^2) draw from `stream`. sd == 0 returns `mean` exactly (the
/// stream still advances). Throws DomainError for sd < 0.
double rng_normal(RngStream& stream, double mean, double sd);

}  // namespace confirm
