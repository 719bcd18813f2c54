#ifndef FPP_ANIMALS_HPP
#define FPP_ANIMALS_HPP

#include <functional>
#include <optional>
#include <vector>

#include "fpp/lattice.hpp"

namespace fpp {

// A 0/1 edge field plus the walk length n; the walk starts at the origin.
struct AnimalInstance {
  std::function<int(const EdgeId&)> field;
  int n = 1;
  int d = 2;
};

// Greedy lattice animal value: maximum of sum X_e over vertex self-avoiding
// paths of n edges from 0, by DFS with branch-and-bound (prune when the
// current sum plus the remaining step count cannot beat the incumbent).
// Rejects n above `exact_limit`.
int exact_Nn(const AnimalInstance& inst, int exact_limit = 14);

// Tail bound exp{-(n p^(1/d)/(k+1)) (s/C3 - d(k+1) log 3)} clipped to [0,1];
// C3 defaults to the covering-chain constant 10 d 9^d but can be overridden
// (unit tests exercise the formula shape with small constants).
double animal_tail_bound(int n, double p, double s, int d, int k,
                         std::optional<double> c3_override = std::nullopt);

// Concentration bounds for a sum of n (m+1)-dependent Bernoulli(p) terms
// exceeding its mean by t:
//   first:  exp{-(np/((m+1)(1-p))) phi(4t/(5np))},  phi(y)=(1+y)log(1+y)-y
//   second: exp{-2 t^2/((m+1) n)}
std::pair<double, double> kdep_bernoulli_bounds(int n, double p, int m, double t);

// Coarse covering of a connected vertex set alpha containing 0: points
// x_0..x_r with x_0 = 0, r = floor(2n/l), |x_{i+1}-x_i|_inf <= 1 and
// alpha contained in the union of boxes l*x_i + B(2l). Built from a
// depth-first closed walk on a spanning tree of alpha sampled every l-th
// vertex, coordinates floor-divided by l.
std::vector<Point> cover_connected(const std::vector<Point>& alpha, int l);

}  // namespace fpp

#endif
