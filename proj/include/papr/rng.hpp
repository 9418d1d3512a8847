#pragma once

#include <cstdint>

namespace papr {

// splitmix64 finalizer; decorrelates consecutive inputs.
inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Per-block seed for deterministic parallel Monte Carlo: the result only
// depends on (master_seed, block_index), never on the worker layout.
inline std::uint64_t block_seed(std::uint64_t master_seed,
                                std::uint64_t block_index) {
  return splitmix64(master_seed ^ splitmix64(block_index));
}

}  // namespace papr
