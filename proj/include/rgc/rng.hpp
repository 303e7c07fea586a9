#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace rgc {

// Counter-based random numbers: every draw is a pure function of
// (seed, purpose tag, stream index, counter). No generator state is shared,
// so results do not depend on thread count or call order, and the bit
// streams are identical across platforms (no std:: distributions involved).

enum class RngTag : std::uint64_t {
  kSbmEdge = 1,
  kLabelSample = 2,
  kLabelFlip = 3,
  kMoonsNoise = 4,
  kPowerStart = 5,
  kExperiment = 6,
  kTest = 99,
};

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t hash_key(std::uint64_t seed, std::uint64_t tag,
                                 std::uint64_t a, std::uint64_t b) noexcept {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ tag);
  h = mix64(h ^ a);
  return mix64(h ^ b);
}

constexpr std::uint64_t hash_key(std::uint64_t seed, RngTag tag,
                                 std::uint64_t a, std::uint64_t b) noexcept {
  return hash_key(seed, static_cast<std::uint64_t>(tag), a, b);
}

// Uniform double in [0, 1) with 53 random bits.
constexpr double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline double keyed_uniform(std::uint64_t seed, RngTag tag, std::uint64_t a,
                            std::uint64_t b) noexcept {
  return to_unit(hash_key(seed, tag, a, b));
}

// Sequential view over one (seed, tag, stream) key.
class KeyedStream {
 public:
  KeyedStream(std::uint64_t seed, RngTag tag, std::uint64_t stream = 0) noexcept
      : seed_(seed), tag_(tag), stream_(stream) {}

  std::uint64_t next() noexcept {
    return hash_key(seed_, tag_, stream_, counter_++);
  }

  double uniform() noexcept { return to_unit(next()); }

  // Unbiased integer in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound) noexcept {
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % bound;
  }

  // Standard normal via Box-Muller (one variate per two uniforms).
  double normal() noexcept {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t seed_;
  RngTag tag_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

}  // namespace rgc
