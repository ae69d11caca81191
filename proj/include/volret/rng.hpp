#pragma once

#include <cstdint>
#include <random>

namespace volret {

using Engine = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seed of the independent substream `stream` of a run seeded with `seed`.
// Batch jobs draw path i from substream i, so results do not depend on the
// order in which paths are scheduled.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
}

inline Engine make_engine(std::uint64_t seed, std::uint64_t stream = 0) {
  return Engine{substream_seed(seed, stream)};
}

}  // namespace volret
