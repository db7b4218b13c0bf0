#pragma once

#include <cstdint>

namespace circlemaps {

inline constexpr std::uint64_t kDefaultSeed = 20240607ULL;

// Counter-based generator: the i-th draw of a stream is a pure function of
// (seed, stream, i), so parallel workers reproduce the serial sequence.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

  std::uint64_t bits(std::uint64_t index) const noexcept { return mix(key_ + index * 0x9e3779b97f4a7c15ULL); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform(std::uint64_t index) const noexcept {
    return static_cast<double>(bits(index) >> 11) * 0x1.0p-53;
  }

  CounterRng split(std::uint64_t stream) const noexcept { return CounterRng(key_, stream); }

 private:
  // SplitMix64 finalizer.
  static std::uint64_t mix(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
};

}  // namespace circlemaps
