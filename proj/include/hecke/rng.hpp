#pragma once

#include <cstdint>

namespace hecke {

// splitmix64; the per-chunk seeding below keeps Monte Carlo aggregation
// independent of how chunks are distributed over workers.
struct SplitMix64 {
  uint64_t state;

  explicit SplitMix64(uint64_t seed) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double u01() { return (next() >> 11) * 0x1.0p-53; }
};

inline SplitMix64 chunk_rng(uint64_t seed, uint64_t chunk) {
  SplitMix64 mix(seed ^ (0xD1B54A32D192ED03ULL * (chunk + 1)));
  mix.next();
  return mix;
}

}  // namespace hecke
