#ifndef FPP_DIRECTED_PATHS_HPP
#define FPP_DIRECTED_PATHS_HPP

#include <string>
#include <vector>

#include "fpp/lattice.hpp"

namespace fpp {

// Axis-parallel hyperplane {h : h . e_axis = c}. Sources live on the closed
// side (>= c), targets strictly on the open side (> c).
struct HalfSpace {
  int axis = 1;  // 1-based
  double c = 0.0;
};

// One directed segment: a * v with v = s_i e_i + s_j e_j (i != j, signs +-1).
struct Segment {
  long long a = 0;
  Point v;
};

struct SegmentDecomposition {
  Point y_star;
  std::vector<Segment> segments;

  std::size_t K() const { return segments.size(); }
};

// Decomposes the displacement from x to a parity-adjusted target y* near y
// into at most 1609 + 104^(d-1) diagonal segments, each of magnitude in
// [m/1000, m/10], whose prefix positions stay inside the l-infinity ball of
// radius 2m around y and strictly on the far side of H.
// Preconditions: m >= 1000, |x-y|_1 <= m, x.e_axis >= c, y.e_axis > c, d >= 2.
SegmentDecomposition connect_in_halfspace(const Point& x, const Point& y,
                                          const HalfSpace& H, int m);

enum class SegmentClause {
  Pass,
  VectorForm,   // some v is not of the form +-e_i +- e_j
  Magnitude,    // some |a_k| outside [m/1000, m/10]
  Ball,         // some prefix leaves the 2m ball around y
  HalfSpaceSide,// some prefix position has (x + prefix) . e_axis <= c
  Endpoint,     // sum of segments != y_star - x
  TargetShift,  // |y - y_star|_inf > 1, y_star . e_axis <= c, or odd parity
  Count         // K > 1609 + 104^(d-1)
};

std::string to_string(SegmentClause c);

// Re-checks every clause independently of the constructor; returns the first
// violated clause, or Pass.
SegmentClause verify_segments(const Point& x, const SegmentDecomposition& dec,
                              const Point& y, const HalfSpace& H, int m);

// The segment-count cap 1609 + 104^(d-1).
long long segment_count_cap(int d);

}  // namespace fpp

#endif
