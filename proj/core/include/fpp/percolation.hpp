#ifndef FPP_PERCOLATION_HPP
#define FPP_PERCOLATION_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "fpp/constants.hpp"
#include "fpp/geodesics.hpp"
#include "fpp/lattice.hpp"
#include "fpp/weights.hpp"

namespace fpp {

// Thresholded 0/1 field: an edge is open iff its weight is <= threshold.
struct OpenField {
  Environment env;
  double threshold = 0.0;

  bool open(const EdgeId& e) const { return env.weight(e) <= threshold; }
};

OpenField open_field(const Environment& env, double threshold);

// Minimal number of open edges on a path from u to v inside `window`;
// nullopt when no such path exists. When `restrict` is given, only edges
// with at least one endpoint in it are usable (the restricted variant is
// never shorter).
std::optional<std::int64_t> chemical_distance(const OpenField& field, const Point& u,
                                              const Point& v, const LatticeBox& window,
                                              const std::set<Point>* restrict_to = nullptr);

// Exact minimum passage time over monotone paths (steps +e1/+e2) from (0,0)
// to (n,n). d = 2 only.
double oriented_min_passage(const Environment& env, int n);

// Level-by-level reachability through open edges on the rotated lattice
// {(m,n) : m+n even, n >= 0} with steps (m-1,n+1) and (m+1,n+1). The rotated
// point (m,n) sits at ((m+n)/2, (n-m)/2) in Z^2; the step (m+1,n+1) uses that
// point's +e1 edge and (m-1,n+1) its +e2 edge.
struct OrientedLevels {
  std::vector<Coord> r;      // rightmost reachable m per level, while alive
  std::vector<Coord> l;      // leftmost reachable m per level
  std::vector<char> alive;   // alive[i]: reachable set at level i nonempty
  int levels_survived = 0;   // last level with a nonempty reachable set
};

OrientedLevels oriented_edge_processes(const OpenField& field,
                                       const std::vector<Coord>& init_m, int levels);

// ----------------------------------------------------------------------------
// Box geometry
// ----------------------------------------------------------------------------

// Scale parameters of the m-box machinery. m-cubes S(l;m) partition Z^d; the
// surrounding boxes B^j live inside the 3m-box R. m1 is the scaffold pitch.
struct BoxParams {
  Point l;     // cube index
  int m = 1;   // cube side
  int j = 1;   // signed axis in {+-1 .. +-d}
  int m1 = 1;  // sublattice pitch, m1 < m

  // m = floor(K*M), m1 = floor(s*K*M).
  static BoxParams from_scales(Point l, int j, double K, double M, double s);
};

struct BoxGeometry {
  LatticeBox S, R, Bj;                  // inclusive boxes
  LatticeBox Bcheck_plus, Bcheck_minus; // B^j shrunk / inflated by rho*m1
  bool degenerate = false;              // scaffold unavailable at this scale
  std::vector<Point> D;                 // m1-sublattice well inside Bcheck_plus
  std::vector<Point> C;                 // axes through D clipped to Bcheck_plus
  std::vector<EdgeId> Ctilde;           // NN edges within C
  std::vector<EdgeId> Etilde1;          // edges of Etilde touching the Bcheck_plus boundary
  std::vector<EdgeId> Etilde2;          // the rest of Etilde
};

BoxGeometry box_geometry(const BoxParams& params, int rho);

// Boundary vertices of an inclusive box (those with a neighbor outside).
std::vector<Point> box_boundary(const LatticeBox& b);

// ----------------------------------------------------------------------------
// Clusters, shells, barriers
// ----------------------------------------------------------------------------

// Black = closed edges (weight above threshold); white = open edges.
enum class ClusterColor { Black, White };

struct ClusterResult {
  std::vector<Point> cluster;            // sorted
  std::vector<Point> exterior_boundary;  // sorted; L-neighbors (|.|_inf = 1)
                                         // of the cluster reachable from the
                                         // window boundary outside the cluster
  bool truncated = false;                // cluster reached the window boundary
};

ClusterResult cluster_and_boundary(const OpenField& field, const std::vector<Point>& A,
                                   ClusterColor color, const LatticeBox& window);

struct KestenShell {
  std::vector<Point> shell;  // S_v, sorted
  int n_v = 0;
  bool truncated = false;
};

// n_v = minimal k such that some vertex of the cube D_k(v) lies in a white
// cluster reaching the window boundary (the finite proxy for an infinite
// cluster); the shell is the exterior boundary of the black cluster of
// D_{n_v}(v). Throws when no qualifying vertex exists within the window.
KestenShell kesten_shell(const OpenField& field, const Point& v,
                         const LatticeBox& window);

// Barrier/coloring configuration.
struct PercConfig {
  int rho = 2;          // chemical-distance stretch constant
  double delta = 0.1;   // strict-passage margin of condition B1
  double Mbar = 1.0;    // open threshold
  bool strict_diameter = false;  // barrier clause (i): strict uses m1/10000;
                                 // lenient (default) uses max(1, m1)

  double time_budget(int d) const {            // Lbar
    return constants::barrier_time_budget(d, rho, Mbar);
  }
  double length_budget(int d) const {          // Cd
    return constants::barrier_length_budget(d);
  }
};

struct BarrierResult {
  bool success = false;
  int failure_clause = 0;           // 0 none, 1 diameter, 2 connector budget
  std::optional<Point> offending;   // vertex at which the clause failed
  std::vector<Point> G;             // union of shells, sorted
  std::vector<PathRec> witnesses;   // one connector path per G vertex
  std::vector<double> witness_times;
};

// Builds the barrier G (union of Kesten shells over all x within l-infinity
// distance 1 of the boundary of B^j) and audits both quantitative clauses:
// (i) every shell diameter below the configured cap, (ii) from every barrier
// vertex an annulus-confined path to C cap boundary(Bcheck_plus) within the
// time and length budgets.
BarrierResult good_barrier(const Environment& env, const BoxParams& params,
                           const PercConfig& cfg);

// Condition B1: T(v,w) >= (r + delta) |v-w|_1 for pairs in B^j at l1
// distance >= m, Dijkstra restricted to R. Exhaustive under `pair_budget`
// source vertices, otherwise a deterministic subsample that always includes
// the extreme corners.
bool check_B1(const Environment& env, const BoxParams& params, double delta,
              std::int64_t pair_budget = 200000);

bool is_black(const Environment& env, const BoxParams& params, const PercConfig& cfg);

// An m-cube is black iff all 2d surrounding boxes are black.
bool is_cube_black(const Environment& env, const Point& l, int m, int m1,
                   const PercConfig& cfg);

struct BoxVisit {
  Point l;
  int j = 0;        // 0 for a cube-visit record, signed axis for a crossing
  bool black = false;
};

struct BlackCubeStats {
  int visited_black_cubes = 0;   // distinct black m-cubes containing a vertex
  int crossed_black_boxes = 0;   // distinct black B^j crossed thin-wise
  std::vector<BoxVisit> per_box;
};

BlackCubeStats black_cube_stats(const Environment& env, const PathRec& geodesic,
                                int m, int m1, const PercConfig& cfg);

// True iff some edge of the geodesic with both endpoints inside B^j(l;m) has
// weight >= M, or inside [range->first, range->second] when given.
bool is_x_good(const Environment& env, const PathRec& geodesic, const BoxParams& params,
               double M, std::optional<std::pair<double, double>> range = std::nullopt);

enum class QVariant { Q, Qtilde };

// Weight-pattern predicate on the scaffold edges:
//   Q        — Etilde1 in [M, gamma*M]; Etilde2 >= M; Ctilde \ Etilde <= r+c.
//   Qtilde(i)— Etilde1 and Etilde2 in [gamma^i M, gamma^{i+1} M);
//              Ctilde \ Etilde <= r+c.
bool check_Q(const Environment& env, const BoxParams& params, int rho, double c,
             double gamma, double M, QVariant variant, int i = 0);

}  // namespace fpp

#endif
