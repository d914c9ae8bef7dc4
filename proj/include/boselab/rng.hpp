#pragma once

#include <cstdint>

namespace boselab {

/// Counter-based SplitMix64 stream. Stream i of seed s is fully determined by
/// (s, i), so a batch split across any number of threads draws the same
/// numbers for each sample.
class StreamRng {
 public:
  StreamRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : state_(mix(seed + 0x9e3779b97f4a7c15ULL * (mix(stream ^ 0xd1b54a32d192ed03ULL) | 1))) {}

  std::uint64_t next() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform double in (0, 1).
  double open_uniform() noexcept { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

 private:
  static std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  std::uint64_t state_;
};

}  // namespace boselab
