#include "fpp/rng.hpp"

namespace fpp::rng {

std::uint64_t hash_edge(std::uint64_t seed, const EdgeId& e) {
  std::uint64_t h = mix64(seed);
  h = combine(h, 0xE6D6E6D600000000ULL + static_cast<std::uint64_t>(e.axis));
  for (Coord x : e.base.c) h = combine(h, static_cast<std::uint64_t>(x));
  return h;
}

std::uint64_t hash_point(std::uint64_t seed, const Point& p) {
  std::uint64_t h = mix64(seed ^ 0xA5A5A5A5A5A5A5A5ULL);
  for (Coord x : p.c) h = combine(h, static_cast<std::uint64_t>(x));
  return h;
}

}  // namespace fpp::rng
