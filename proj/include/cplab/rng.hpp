#pragma once

#include <cstdint>

namespace cplab {

// SplitMix64 finalizer (Steele, Lea & Flood 2014). Bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Child seed for (seed, label). Chained calls give hierarchical labels, e.g.
// derive_seed(derive_seed(master, point), trial).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label) {
  return mix64(mix64(seed ^ 0x6a09e667f3bcc909ULL) + 0x9e3779b97f4a7c15ULL * (label + 1));
}

// Labels for the independent streams of one generated instance.
namespace stream {
constexpr std::uint64_t initial = 0x494e4954ULL;  // belief state
constexpr std::uint64_t goal = 0x474f414cULL;     // target / raw goal
constexpr std::uint64_t operators = 0x4f505321ULL;
} // namespace stream

// SplitMix64 stream: integer arithmetic only, so the draw sequence is the same
// on every platform. All distributions below are implemented here rather than
// through <random> distributions, whose algorithms are implementation-defined.
class RngStream {
public:
  explicit constexpr RngStream(std::uint64_t seed) : state_(seed) {}
  constexpr RngStream(std::uint64_t seed, std::uint64_t label) : state_(derive_seed(seed, label)) {}

  constexpr std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  // Uniform integer in [0, bound), bound >= 1. Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t bound) {
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(next()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool coin() { return (next() >> 63) != 0; }

private:
  std::uint64_t state_;
};

} // namespace cplab
