#ifndef FPP_EMPIRICAL_HPP
#define FPP_EMPIRICAL_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fpp/geodesics.hpp"
#include "fpp/weights.hpp"

namespace fpp {

// Finite union of intervals on [0, inf) with individually open or closed
// endpoints, plus single points as degenerate closed intervals. Covers every
// set the experiments query ([M,inf), [r,r+eps], (c,h], {0}); general Borel
// sets are out of scope.
struct IntervalSet {
  struct Piece {
    double lo = 0.0, hi = 0.0;
    bool lo_closed = true, hi_closed = false;
  };
  std::vector<Piece> pieces;  // normalized: disjoint, sorted, non-mergeable

  static IntervalSet interval(double lo, double hi, bool lo_closed, bool hi_closed);
  static IntervalSet atom(double v);
  static IntervalSet everything();  // [0, inf)

  // Literal grammar: pieces joined by "∪" (or ASCII "U"); each piece is
  // "{x}" or "[a,b)", "(a,b]", "[a,b]", "(a,b)" with "inf" allowed as the
  // upper endpoint. Example: "[0,0.5) U {2} U [3,inf)".
  static IntervalSet parse(const std::string& text);
  std::string to_string() const;

  bool contains(double t) const;
  IntervalSet unite(const IntervalSet& other) const;

  // mu(B) under the given marginal.
  double mass(const DistributionSpec& dist) const;

 private:
  void normalize();
};

// Fraction of edges of p whose weight lies in B. When trunc_k = k is given,
// the first and last (2k)^d edges are dropped and the denominator is the
// retained count; otherwise the denominator is |p|.
double measure(const Environment& env, const PathRec& p, const IntervalSet& B,
               std::optional<int> trunc_k = std::nullopt);

// (1/len) * sum of tau_e^ell over retained edges, same retention rule.
double moment(const Environment& env, const PathRec& p, int ell,
              std::optional<int> trunc_k = std::nullopt);

// Variants taking the number of edges to drop from each end directly.
double measure_dropped(const Environment& env, const PathRec& p,
                       const IntervalSet& B, std::size_t drop);
double moment_dropped(const Environment& env, const PathRec& p, int ell,
                      std::size_t drop);

struct McResult {
  double mean = 0.0;
  double stderr_ = 0.0;  // unbiased sample s.d. / sqrt(n)
  std::vector<double> values;        // per successful replica, index order
  std::vector<std::size_t> failed;   // replica indices whose sampler threw
};

// Evaluates sampler(replica_seed) for replica_seed = hash(master_seed, i),
// i = 0..replicas-1, fanning out over `workers` threads. Results are stored
// by replica index and reduced in index order, so the output is
// bit-identical for any worker count.
McResult mc_mean(const std::function<double(std::uint64_t)>& sampler,
                 std::size_t replicas, std::uint64_t master_seed, int workers = 1);

// Mean / stderr of an explicit value vector (index-order reduction).
std::pair<double, double> mean_stderr(const std::vector<double>& values);

}  // namespace fpp

#endif
