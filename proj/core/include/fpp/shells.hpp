#ifndef FPP_SHELLS_HPP
#define FPP_SHELLS_HPP

#include <vector>

#include "fpp/lattice.hpp"
#include "fpp/weights.hpp"

namespace fpp {

// The l-infinity sphere of radius h around an edge's canonical vertex,
// together with the lattice edges lying inside it. h = 0 degenerates to the
// two endpoints of the edge and the edge itself.
struct ShellSpec {
  EdgeId e;
  int h = 0;
  std::vector<Point> vertices;  // sorted lexicographically
  std::vector<EdgeId> edges;    // sorted, both endpoints in `vertices`
};

ShellSpec shell(const EdgeId& e, int h);

// max over vertex pairs u,v of the passage time restricted to shell edges.
// h = 0 returns the weight of e itself.
double restricted_passage_max(const Environment& env, const EdgeId& e, int h);

// True iff at every radius h = 0..k the shell-restricted passage time
// reaches M somewhere (h = 0 meaning tau_e >= M).
bool is_kM_large(const Environment& env, const EdgeId& e, int k, double M);

// Closed-form upper bound on P(e is (k,M)-large):
//   C^(dk) * (10k)^(10kd) * P(tau >= M/C)^(k(d-1)),  clipped to [0,1],
// with C = the maximum shell edge count over radii h <= k (an upper bound on
// the length of any path inside one shell).
double klarge_bound(const DistributionSpec& dist, int k, double M, int d);

// The constant C used by klarge_bound, exposed for reporting.
double klarge_path_constant(int k, int d);

}  // namespace fpp

#endif
