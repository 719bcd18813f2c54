#ifndef FPP_GEODESICS_HPP
#define FPP_GEODESICS_HPP

#include <optional>
#include <vector>

#include "fpp/lattice.hpp"
#include "fpp/weights.hpp"

namespace fpp {

// Vertex self-avoiding nearest-neighbor path, stored as its vertex sequence.
struct PathRec {
  std::vector<Point> vertices;

  PathRec() = default;
  explicit PathRec(std::vector<Point> vs);

  std::size_t length() const { return vertices.empty() ? 0 : vertices.size() - 1; }
  std::vector<EdgeId> edges() const;
  void validate() const;  // adjacency + self-avoidance
};

double passage_time(const Environment& env, const PathRec& p);

struct GeodesicResult {
  double T = 0.0;
  PathRec geodesic;
  LatticeBox search_box;
  bool boundary_touched = false;
};

// Edge weights of a box, materialized once so Dijkstra passes share them.
struct BoxWeights {
  BoxIndexer ix;
  int d;
  std::vector<double> w;  // (vertex index)*d + axis, +inf where edge leaves box

  BoxWeights(const Environment& env, const LatticeBox& box);
  double at(std::int64_t vidx, int axis) const { return w[static_cast<size_t>(vidx * d + axis)]; }
};

// All-targets Dijkstra from `source` over the box. Returns distances and the
// predecessor tree (pred[i] = -1 at the source / unreached vertices).
void dijkstra(const BoxWeights& bw, std::int64_t source, std::vector<double>& dist,
              std::vector<std::int64_t>* pred = nullptr);

// Minimal passage time between x and y over paths inside `box`, with the
// selected geodesic chosen as the lexicographically smallest tight vertex
// sequence starting from x. Deterministic for a fixed environment.
GeodesicResult shortest_passage_in_box(const Environment& env, const Point& x,
                                       const Point& y, const LatticeBox& box);

// Same, over the hull of {x,y} inflated by ceil(padding * |x-y|_1) in every
// direction. padding >= 1.
GeodesicResult shortest_passage(const Environment& env, const Point& x,
                                const Point& y, double padding = 1.0);

struct GeodesicSet {
  std::vector<PathRec> paths;
  bool partial = false;  // cap exceeded
};

// All geodesics between x and y inside the padded box, via the tight-edge
// DAG. Requires weights bounded away from zero (r=0 with F(0)>0 is
// rejected: the DAG orientation would be ambiguous).
GeodesicSet enumerate_geodesics(const Environment& env, const Point& x,
                                const Point& y, double padding, std::size_t cap);
GeodesicSet enumerate_geodesics_in_box(const Environment& env, const Point& x,
                                       const Point& y, const LatticeBox& box,
                                       std::size_t cap);

}  // namespace fpp

#endif
