#pragma once

#include <cstdint>

namespace dimlab {

// Counter-based splittable generator. Word i of stream `seed` is
// splitmix64(seed + i * GOLDEN), so any word can be generated without
// sequencing, and outputs are identical across platforms and runs.
struct CounterRng {
  static constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ull;
  static constexpr uint64_t kMixA = 0xBF58476D1CE4E5B9ull;
  static constexpr uint64_t kMixB = 0x94D049BB133111EBull;

  uint64_t seed = 0;
  uint64_t counter = 0;

  explicit CounterRng(uint64_t s = 0) : seed(s) {}

  static uint64_t word(uint64_t seed, uint64_t index) {
    uint64_t z = seed + index * kGolden;
    z = (z ^ (z >> 30)) * kMixA;
    z = (z ^ (z >> 27)) * kMixB;
    return z ^ (z >> 31);
  }

  uint64_t next() { return word(seed, counter++); }

  // Uniform in [0, bound) by rejection; bound >= 1.
  uint64_t next_below(uint64_t bound) {
    const uint64_t limit = bound * (UINT64_MAX / bound);
    for (;;) {
      uint64_t w = next();
      if (w < limit) return w % bound;
    }
  }

  // Child stream independent of the parent's future output.
  CounterRng split() { return CounterRng(next() ^ kMixB); }
};

}  // namespace dimlab
