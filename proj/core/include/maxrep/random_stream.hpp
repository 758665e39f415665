#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace maxrep {

// Component tags separating the sub-streams of one replication.
enum class StreamTag : std::uint32_t {
  base_path = 0,
  replacing_copy = 1,
  selection = 2,
  lambda = 3,
  diagnostic = 4,
};

// A stream is fully identified by (seed, replication, tag, lane). `lane`
// separates the d independent coordinates of chi / order-statistic paths.
struct StreamKey {
  std::uint64_t seed = 0;
  std::uint64_t replication = 0;
  StreamTag tag = StreamTag::base_path;
  std::uint16_t lane = 0;

  StreamKey with(StreamTag t, std::uint16_t l = 0) const { return {seed, replication, t, l}; }
};

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). The key is the
// master seed; the counter is (block, tag|lane, replication). Streams with
// different keys never overlap, regardless of how many numbers each consumes
// (up to 2^34 per stream).
//
// Satisfies UniformRandomBitGenerator, so it plugs into <random> distributions.
class CounterRng {
public:
  using result_type = std::uint32_t;

  explicit CounterRng(const StreamKey& key);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (index_ == 4) {
      refill();
    }
    return buffer_[index_++];
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    const std::uint64_t hi = (*this)() >> 5;
    const std::uint64_t lo = (*this)() >> 6;
    return (static_cast<double>(hi) * 67108864.0 + static_cast<double>(lo)) * 0x1.0p-53;
  }

  /// One Philox4x32-10 block; exposed for known-answer tests.
  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> counter,
                                            std::array<std::uint32_t, 2> key);

private:
  void refill();

  std::array<std::uint32_t, 4> counter_{};
  std::array<std::uint32_t, 2> key_{};
  std::array<std::uint32_t, 4> buffer_{};
  unsigned index_ = 4;
};

} // namespace maxrep
