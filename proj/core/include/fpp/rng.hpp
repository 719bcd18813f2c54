#ifndef FPP_RNG_HPP
#define FPP_RNG_HPP

#include <cstdint>

#include "fpp/lattice.hpp"

namespace fpp {

// Stateless counter-based hashing. Weight queries are keyed by (seed, edge),
// so environments can be evaluated lazily, out of order, and from any number
// of threads with identical results.
namespace rng {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t combine(std::uint64_t h, std::uint64_t v) {
  return mix64(h ^ (v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2)));
}

std::uint64_t hash_edge(std::uint64_t seed, const EdgeId& e);
std::uint64_t hash_point(std::uint64_t seed, const Point& p);

inline std::uint64_t hash_counter(std::uint64_t seed, std::uint64_t counter) {
  return mix64(combine(mix64(seed), counter));
}

// Uniform in the open interval (0,1).
inline double to_unit(std::uint64_t h) {
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace rng
}  // namespace fpp

#endif
