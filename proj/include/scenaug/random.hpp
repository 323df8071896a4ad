// Deterministic random streams with platform-independent output.
//
// std::mt19937 is portable but the std distributions are not; every draw here
// is defined arithmetically so that identical (seed, label) pairs produce
// identical selections on any platform and at any parallelism degree.
#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace scenaug {

// splitmix64 counter generator.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Exp(1) variate.
  double next_exponential() { return -std::log1p(-next_double()); }

 private:
  std::uint64_t state_;
};

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

// Stream derived from (seed, label). Used with labels like "scene:<id>" so
// per-scene draws are independent of scene order and worker scheduling.
inline RandomStream derive_stream(std::uint64_t seed, std::string_view label) {
  RandomStream mix(seed ^ (fnv1a64(label) * 0x9E3779B97F4A7C15ULL));
  mix.next_u64();
  return RandomStream(mix.next_u64());
}

}  // namespace scenaug
