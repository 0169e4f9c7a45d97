#pragma once

#include <cstdint>
#include <random>

namespace exrings {

// splitmix64 finalizer; good avalanche behaviour for seed derivation.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Splittable seed: realization seeds depend only on (base, point, realization),
// never on execution order, so ensembles are reproducible under any schedule.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t point,
                              std::uint64_t realization = 0) {
  std::uint64_t s = splitmix64(base);
  s = splitmix64(s ^ point);
  return splitmix64(s ^ realization);
}

inline std::mt19937_64 make_engine(std::uint64_t seed) {
  return std::mt19937_64(splitmix64(seed));
}

}  // namespace exrings
