#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
// Key = 64-bit seed, counter words 2..3 = 64-bit stream id, words 0..1 = block index.
// Streams are independent, so per-subject and per-replicate draws do not depend on
// thread scheduling.

#include <array>
#include <cstdint>

namespace geomix {

class Philox {
 public:
  Philox(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform01();
  /// Uniform integer in [lo, hi] (inclusive), rejection sampling without bias.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  /// Standard normal by inversion.
  double normal();
  /// Gamma(shape, scale) by Marsaglia-Tsang; shape < 1 uses the U^(1/shape) boost.
  double gamma(double shape, double scale);
  /// +1 or -1 with probability 1/2.
  int sign();

  /// Independent generator with the same seed and a different stream id.
  Philox split(std::uint64_t stream) const { return Philox(seed_, stream); }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int pos_ = 4;
};

}  // namespace geomix
