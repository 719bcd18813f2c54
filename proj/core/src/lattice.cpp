#include "fpp/lattice.hpp"

#include <limits>
#include <sstream>

namespace fpp {

std::string Point::to_string() const {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < dim(); ++i) {
    if (i) os << ',';
    os << c[static_cast<size_t>(i)];
  }
  os << ')';
  return os.str();
}

Coord l1_dist(const Point& a, const Point& b) {
  Coord s = 0;
  for (int i = 0; i < a.dim(); ++i) {
    Coord d = a[i] - b[i];
    s += d < 0 ? -d : d;
  }
  return s;
}

Coord linf_dist(const Point& a, const Point& b) {
  Coord m = 0;
  for (int i = 0; i < a.dim(); ++i) {
    Coord d = a[i] - b[i];
    if (d < 0) d = -d;
    if (d > m) m = d;
  }
  return m;
}

std::string EdgeId::to_string() const {
  return base.to_string() + "+e" + std::to_string(axis);
}

EdgeId make_edge(const Point& u, const Point& v) {
  if (u.dim() != v.dim()) throw std::invalid_argument("make_edge: dimension mismatch");
  if (l1_dist(u, v) != 1)
    throw std::invalid_argument("make_edge: endpoints are not nearest neighbors: " +
                                u.to_string() + " " + v.to_string());
  for (int i = 0; i < u.dim(); ++i) {
    if (u[i] != v[i]) {
      EdgeId e;
      e.base = u[i] < v[i] ? u : v;
      e.axis = i + 1;
      return e;
    }
  }
  throw std::logic_error("make_edge: unreachable");
}

Point edge_vertex(const EdgeId& e) {
  Point a = e.base;
  Point b = e.other();
  return a.l1() < b.l1() ? a : b;
}

LatticeBox::LatticeBox(Point lo_, Point hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
  if (lo.dim() != hi.dim()) throw std::invalid_argument("LatticeBox: dimension mismatch");
  if (lo.dim() < 1) throw std::invalid_argument("LatticeBox: empty dimension");
  for (int i = 0; i < lo.dim(); ++i)
    if (lo[i] > hi[i]) throw std::invalid_argument("LatticeBox: lo > hi on axis " + std::to_string(i + 1));
}

bool LatticeBox::contains(const Point& p) const {
  for (int i = 0; i < dim(); ++i)
    if (p[i] < lo[i] || p[i] > hi[i]) return false;
  return true;
}

std::int64_t LatticeBox::vertex_count() const {
  std::int64_t n = 1;
  for (int i = 0; i < dim(); ++i) {
    Coord s = side(i);
    if (n > std::numeric_limits<std::int64_t>::max() / s)
      throw std::overflow_error("LatticeBox: vertex count overflow");
    n *= s;
  }
  return n;
}

bool LatticeBox::on_boundary(const Point& p) const {
  if (!contains(p)) return false;
  for (int i = 0; i < dim(); ++i)
    if (p[i] == lo[i] || p[i] == hi[i]) return true;
  return false;
}

LatticeBox LatticeBox::inflated(Coord pad) const {
  Point a = lo, b = hi;
  for (int i = 0; i < dim(); ++i) {
    a[i] -= pad;
    b[i] += pad;
  }
  return LatticeBox(a, b);
}

LatticeBox LatticeBox::hull(const Point& a, const Point& b) {
  Point lo = a, hi = a;
  for (int i = 0; i < a.dim(); ++i) {
    if (b[i] < lo[i]) lo[i] = b[i];
    if (b[i] > hi[i]) hi[i] = b[i];
  }
  return LatticeBox(lo, hi);
}

std::vector<EdgeId> edges_in_box(const LatticeBox& b) {
  std::vector<EdgeId> out;
  BoxIndexer ix(b);
  for (std::int64_t i = 0; i < ix.count; ++i) {
    Point p = ix.point(i);
    for (int axis = 0; axis < b.dim(); ++axis) {
      if (p[axis] + 1 > b.hi[axis]) continue;
      EdgeId e;
      e.base = p;
      e.axis = axis + 1;
      out.push_back(std::move(e));
    }
  }
  return out;  // lexicographic by construction
}

BoxIndexer::BoxIndexer(const LatticeBox& b) : box(b) {
  const int d = b.dim();
  strides.assign(static_cast<size_t>(d), 1);
  // lexicographic order: last axis varies fastest
  for (int i = d - 2; i >= 0; --i)
    strides[static_cast<size_t>(i)] =
        strides[static_cast<size_t>(i + 1)] * b.side(i + 1);
  count = b.vertex_count();
}

std::int64_t BoxIndexer::index(const Point& p) const {
  std::int64_t idx = 0;
  for (int i = 0; i < box.dim(); ++i)
    idx += (p[i] - box.lo[i]) * strides[static_cast<size_t>(i)];
  return idx;
}

Point BoxIndexer::point(std::int64_t idx) const {
  Point p = box.lo;
  for (int i = 0; i < box.dim(); ++i) {
    p[i] += idx / strides[static_cast<size_t>(i)];
    idx %= strides[static_cast<size_t>(i)];
  }
  return p;
}

}  // namespace fpp
