#ifndef FPP_CONSTANTS_HPP
#define FPP_CONSTANTS_HPP

#include <cstdint>
#include <optional>
#include <string>

namespace fpp::constants {

// Critical probability for Bernoulli bond percolation on Z^d.
// d=2 is exact (Kesten 1980); d=3 is the standard numerical estimate
// (Lorenz & Ziff 1998). Higher dimensions are not shipped.
std::optional<double> bond_pc(int d);

// Critical probability for oriented bond percolation on Z^d.
// d=2: numerical estimate ~0.6447 (Durrett 1984 and later refinements).
std::optional<double> oriented_pc(int d);

// Covering-chain constant for the greedy-lattice-animal tail bound:
// an edge-count bound of the form  #edges <= C3 * n * p^(1/d - 1)
// obtained from covering a connected n-set by at most 5*n*p^(1/d)
// boxes B(2l), l = ceil(p^(-1/d)), each contributing 2d*(4l+1)^d edges:
//   (4l+1)^d <= (4 p^(-1/d) + 5)^d <= 9^d / p  for p in (0,1],
// hence C3 = 5 * 2d * 9^d = 10 d 9^d.
double animal_cover_c3(int d);

// Barrier budget constants. cap_path_segments = 13*(1609 + 104^(d-1)) + 10
// bounds both the per-unit length budget and, multiplied by rho*d*Mbar, the
// per-unit passage-time budget of barrier connector paths.
double barrier_segment_cap(int d);
double barrier_time_budget(int d, double rho, double mbar);   // Lbar
double barrier_length_budget(int d);                          // Cd

// FNV-1a hash of the shipped constants, for report provenance.
std::uint64_t table_hash();

}  // namespace fpp::constants

#endif
