#ifndef FPP_WEIGHTS_HPP
#define FPP_WEIGHTS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fpp/lattice.hpp"

namespace fpp {

// Edge-weight marginal. Supported variants cover everything the experiment
// suite needs; there is deliberately no general distribution DSL.
struct DistributionSpec {
  enum class Kind { Atoms, BernoulliShift, Exponential, Pareto, Uniform };

  Kind kind = Kind::Exponential;
  // Atoms: sorted (value, probability), probabilities summing to 1.
  std::vector<std::pair<double, double>> atoms;
  double a = 0.0, b = 1.0, p = 0.5;  // bernoulli_shift: P(tau=a)=1-p, P(tau=b)=p
  double rate = 1.0;                 // exponential
  double alpha = 2.0, xmin = 1.0;    // pareto
  double lo = 0.0, hi = 1.0;         // uniform

  static DistributionSpec make_atoms(std::vector<std::pair<double, double>> atoms);
  static DistributionSpec bernoulli_shift(double a, double b, double p);
  static DistributionSpec exponential(double rate);
  static DistributionSpec pareto(double alpha, double xmin);
  static DistributionSpec uniform(double lo, double hi);

  // Parse "exponential(1)", "pareto(2,1)", "uniform(0,1)",
  // "bernoulli(0,1,0.3)", "atoms((1,0.5);(10,0.5))".
  static DistributionSpec parse(const std::string& text);
  std::string to_string() const;

  double infimum() const;               // essential infimum r
  double cdf(double t) const;           // F(t) = mu[0,t]
  double tail(double t) const;          // mu[t, inf)
  double atom_mass(double t) const;     // mu{t}
  double quantile(double q) const;      // inf{t : F(t) >= q}; q in [0,1]
  bool continuous() const;

  void validate() const;
};

// Deterministic seeded weight field: weight(e) is a pure function of
// (seed, dist, e, overrides). Immutable after construction.
struct Environment {
  std::uint64_t seed = 0;
  DistributionSpec dist;
  int d = 2;
  std::map<EdgeId, double> overrides;

  Environment() = default;
  Environment(std::uint64_t seed_, DistributionSpec dist_, int d_)
      : seed(seed_), dist(std::move(dist_)), d(d_) {}

  double weight(const EdgeId& e) const;
  Environment with_override(const EdgeId& e, double w) const;
};

enum class UsefulCheck { Ok, Violated };

// The standing assumption on the weight distribution: F(r) < p_c(d) when
// r = 0 and F(r) < vec_p_c(d) when r > 0. Throws if the needed critical
// probability is not in the constants table.
UsefulCheck check_useful(const DistributionSpec& dist, int d);

// k-dependent Bernoulli(p) edge field. Z^d is partitioned into k-aligned
// blocks; all edges whose canonical vertex shares a block share one uniform,
// so variables at canonical-vertex distance >= k in l-infinity are
// independent.
struct KDependentField {
  std::uint64_t seed = 0;
  int k = 1;
  double p = 0.5;
  int d = 2;

  int value(const EdgeId& e) const;  // 0 or 1
};

// Resampling operator: returns an environment agreeing with env off `edges`
// and carrying fresh i.i.d. mu draws keyed by (seed2, e) on `edges`.
Environment resample(const Environment& env, const std::vector<EdgeId>& edges,
                     std::uint64_t seed2);

}  // namespace fpp

#endif
