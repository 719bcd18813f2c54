#include "fpp/constants.hpp"

#include <cmath>
#include <cstring>

namespace fpp::constants {

std::optional<double> bond_pc(int d) {
  switch (d) {
    case 2: return 0.5;        // exact, Kesten 1980
    case 3: return 0.2488126;  // Lorenz & Ziff 1998
    default: return std::nullopt;
  }
}

std::optional<double> oriented_pc(int d) {
  switch (d) {
    case 2: return 0.6447;  // numerical, Durrett 1984 era estimates
    default: return std::nullopt;
  }
}

double animal_cover_c3(int d) { return 10.0 * d * std::pow(9.0, d); }

double barrier_segment_cap(int d) {
  return 13.0 * (1609.0 + std::pow(104.0, d - 1)) + 10.0;
}

double barrier_time_budget(int d, double rho, double mbar) {
  return barrier_segment_cap(d) * rho * d * mbar;
}

double barrier_length_budget(int d) { return barrier_segment_cap(d); }

std::uint64_t table_hash() {
  const double vals[] = {0.5, 0.2488126, 0.6447};
  std::uint64_t h = 1469598103934665603ULL;
  auto feed = [&h](const void* p, size_t n) {
    const unsigned char* b = static_cast<const unsigned char*>(p);
    for (size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 1099511628211ULL;
    }
  };
  feed(vals, sizeof(vals));
  for (int d = 2; d <= 4; ++d) {
    double c3 = animal_cover_c3(d);
    double cap = barrier_segment_cap(d);
    feed(&c3, sizeof(c3));
    feed(&cap, sizeof(cap));
  }
  return h;
}

}  // namespace fpp::constants
