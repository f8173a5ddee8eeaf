#pragma once

#include <array>
#include <cstdint>

namespace ldp::rng {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al., "Parallel random numbers: as
/// easy as 1, 2, 3", SC 2011).
Counter philox4x32(Counter ctr, Key key) noexcept;

/// Inverse standard normal CDF, Wichura's AS 241 (PPND16), accurate to about
/// 1e-16 relative on (0,1).
double normal_quantile(double p) noexcept;

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// A counter-based stream keyed by (root seed, stream id). Draw number `i`
/// is a pure function of (root, stream, i): draws 2k and 2k+1 are the two
/// 64-bit halves of philox(counter = (k, stream), key = root).
///
/// Uniforms are ((bits >> 12) + 0.5) * 2^-52, strictly inside (0,1);
/// normals are normal_quantile(uniform), one uniform per normal.
class Stream {
 public:
  Stream(std::uint64_t root_seed, std::uint64_t stream_id) noexcept;

  std::uint64_t bits(std::uint64_t index) const noexcept;
  double uniform(std::uint64_t index) const noexcept;
  double normal(std::uint64_t index) const noexcept;

  /// Fills out[k] = normal(first + k) for k < count.
  void normals(std::uint64_t first, std::size_t count, double* out) const noexcept;

  double next_uniform() noexcept { return uniform(position_++); }
  double next_normal() noexcept { return normal(position_++); }
  std::uint64_t position() const noexcept { return position_; }

 private:
  Key key_;
  std::uint32_t stream_lo_;
  std::uint32_t stream_hi_;
  std::uint64_t position_ = 0;
};

inline double to_unit(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

}  // namespace ldp::rng
