#ifndef FPP_LATTICE_HPP
#define FPP_LATTICE_HPP

#include <cstdint>
#include <compare>
#include <stdexcept>
#include <string>
#include <vector>

namespace fpp {

using Coord = std::int64_t;

// A site of the d-dimensional integer lattice. Dimension is carried at
// runtime; all algorithms are d-generic.
struct Point {
  std::vector<Coord> c;

  Point() = default;
  explicit Point(std::vector<Coord> coords) : c(std::move(coords)) {}
  Point(std::initializer_list<Coord> coords) : c(coords) {}

  int dim() const { return static_cast<int>(c.size()); }
  Coord operator[](int i) const { return c[static_cast<size_t>(i)]; }
  Coord& operator[](int i) { return c[static_cast<size_t>(i)]; }

  Coord l1() const {
    Coord s = 0;
    for (Coord x : c) s += x < 0 ? -x : x;
    return s;
  }
  Coord linf() const {
    Coord m = 0;
    for (Coord x : c) {
      Coord a = x < 0 ? -x : x;
      if (a > m) m = a;
    }
    return m;
  }

  friend Point operator+(const Point& a, const Point& b) {
    Point r = a;
    for (int i = 0; i < a.dim(); ++i) r.c[static_cast<size_t>(i)] += b[i];
    return r;
  }
  friend Point operator-(const Point& a, const Point& b) {
    Point r = a;
    for (int i = 0; i < a.dim(); ++i) r.c[static_cast<size_t>(i)] -= b[i];
    return r;
  }
  friend bool operator==(const Point& a, const Point& b) { return a.c == b.c; }
  friend auto operator<=>(const Point& a, const Point& b) {
    return a.c <=> b.c;
  }

  // Point shifted by +1 or -1 along a zero-based axis.
  Point step(int axis, int dir) const {
    Point r = *this;
    r.c[static_cast<size_t>(axis)] += dir;
    return r;
  }

  std::string to_string() const;
};

Coord l1_dist(const Point& a, const Point& b);
Coord linf_dist(const Point& a, const Point& b);

// Canonical id of an unordered nearest-neighbor edge {base, base+e_axis}.
// axis is 1-based, matching the usual coordinate-vector numbering.
struct EdgeId {
  Point base;
  int axis = 1;

  Point other() const { return base.step(axis - 1, +1); }

  friend bool operator==(const EdgeId& a, const EdgeId& b) {
    return a.axis == b.axis && a.base == b.base;
  }
  friend auto operator<=>(const EdgeId& a, const EdgeId& b) {
    if (auto c = a.base <=> b.base; c != 0) return c;
    return a.axis <=> b.axis;
  }

  std::string to_string() const;
};

// Canonicalize an unordered pair of adjacent sites. Throws on non-adjacent
// input.
EdgeId make_edge(const Point& u, const Point& v);

// The endpoint of e with strictly smaller l1 norm. Unique because the two
// endpoint norms differ by exactly one.
Point edge_vertex(const EdgeId& e);

// Inclusive axis-aligned box [lo, hi].
struct LatticeBox {
  Point lo;
  Point hi;

  LatticeBox() = default;
  LatticeBox(Point lo_, Point hi_);

  int dim() const { return lo.dim(); }
  bool contains(const Point& p) const;
  // Number of lattice points; throws if it would overflow 64 bits.
  std::int64_t vertex_count() const;
  Coord side(int axis) const { return hi[axis] - lo[axis] + 1; }
  bool on_boundary(const Point& p) const;
  LatticeBox inflated(Coord pad) const;

  // Smallest box containing both points.
  static LatticeBox hull(const Point& a, const Point& b);
};

// All edges with both endpoints in b, sorted lexicographically by (base,
// axis), duplicate-free.
std::vector<EdgeId> edges_in_box(const LatticeBox& b);

// Flat indexing of box vertices in lexicographic coordinate order.
struct BoxIndexer {
  LatticeBox box;
  std::vector<std::int64_t> strides;
  std::int64_t count = 0;

  explicit BoxIndexer(const LatticeBox& b);
  std::int64_t index(const Point& p) const;
  Point point(std::int64_t idx) const;
};

}  // namespace fpp

#endif
