#pragma once

#include <cstdint>

namespace saw {

// SplitMix64 (Steele, Lea & Flood; constants as published by Vigna). The
// stream for replicate i of a campaign is keyed by stream_key(seed, i), so a
// replicate's draws never depend on which thread produced them.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) noexcept : state_(state) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

inline std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t stream_key(std::uint64_t seed, std::uint64_t replicate) noexcept {
  return mix64(mix64(seed) ^ (replicate + 0x9e3779b97f4a7c15ull) * 0xd1342543de82ef95ull);
}

inline SplitMix64 make_stream(std::uint64_t seed, std::uint64_t replicate) noexcept {
  return SplitMix64(stream_key(seed, replicate));
}

}  // namespace saw
