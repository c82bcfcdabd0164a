#pragma once

#include <array>
#include <cstdint>

namespace subweibull {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

// Philox4x32 with 10 rounds (Salmon et al., Random123).
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

// Maps 64 random bits to a double strictly inside (0, 1). Uses 52 bits: with
// 53, the top value (2^53 - 1/2) 2^-53 rounds up to 1.
inline double bits_to_open_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

/// Counter-based uniform stream.
///
/// Uniform number i of the stream is a pure function of (seed, stream_index, i):
/// block i/2 of Philox is keyed by the seed and countered by (block, stream_index),
/// each block yielding two doubles. Streams with different stream_index values
/// never share a counter, so substreams can be handed to workers in any layout.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_index)
      : seed_(seed), stream_index_(stream_index) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

  // The two uniforms of block `block`; does not move the cursor.
  std::array<double, 2> block(std::uint64_t block) const;

  double next_uniform();
  std::array<double, 2> next_pair();

  // Index of the next uniform that next_uniform() would return.
  std::uint64_t position() const { return position_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_index_;
  std::uint64_t position_ = 0;
  std::array<double, 2> cached_{};
};

}  // namespace subweibull
