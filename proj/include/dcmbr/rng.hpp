#pragma once

#include <cstdint>

namespace dcmbr {

// SplitMix64: counter-based generator. Draw n of the stream seeded with s is
// mix64(s + n*GAMMA); sub-stream i of a base seed is derive_seed(base, i).
// The scheme is fixed so pools and experiments reproduce across machines and
// worker counts.

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

// Independent sub-stream seed for candidate/worker `index` of `base`.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return mix64(base ^ mix64(index + kGolden));
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += kGolden;
    return mix64(state_);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in (0, 1]; safe under log().
  double next_unit_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

// Unbiased draw in [0, n) via rejection.
inline std::uint64_t next_below(SplitMix64& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v = rng.next_u64();
  while (v >= limit) v = rng.next_u64();
  return v % n;
}

}  // namespace dcmbr
