#pragma once

// Seed derivation. Every random draw in the library comes from an engine seeded
// by derive_seed(master, domain, index); streams for different domains never
// share a seed, and a trial's draws depend only on (master, trial index).

#include <cstdint>
#include <random>

namespace prradar {

enum class SeedDomain : std::uint64_t {
  trial = 0x7a1,
  sequence = 0x5e9,
  shifts = 0x5f1,
  attenuations = 0xa77,
  noise = 0x401,
  oracle = 0x0c1,
  oracle_vectors = 0x0c2,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, SeedDomain domain,
                                 std::uint64_t index = 0) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ static_cast<std::uint64_t>(domain));
  return splitmix64(h ^ splitmix64(index));
}

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t master, SeedDomain domain,
                          std::uint64_t index = 0) {
  return Engine{derive_seed(master, domain, index)};
}

}  // namespace prradar
