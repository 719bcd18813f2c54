#include "fpp/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <unordered_set>

namespace fpp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative slack accepted when testing whether an edge lies on some geodesic.
// Dijkstra accumulates O(path length) ulp-sized rounding errors, so exact
// equality is wrong; 1e-9 relative is far above the noise floor and far below
// any genuine gap produced by the supported distributions.
double tight_tol(double T) { return 1e-9 * std::max(T, 1.0); }

}  // namespace

PathRec::PathRec(std::vector<Point> vs) : vertices(std::move(vs)) { validate(); }

std::vector<EdgeId> PathRec::edges() const {
  std::vector<EdgeId> out;
  out.reserve(length());
  for (size_t i = 0; i + 1 < vertices.size(); ++i)
    out.push_back(make_edge(vertices[i], vertices[i + 1]));
  return out;
}

void PathRec::validate() const {
  if (vertices.empty()) throw std::invalid_argument("PathRec: empty vertex sequence");
  for (size_t i = 0; i + 1 < vertices.size(); ++i)
    if (l1_dist(vertices[i], vertices[i + 1]) != 1)
      throw std::invalid_argument("PathRec: consecutive vertices not adjacent at step " +
                                  std::to_string(i));
  std::vector<Point> sorted = vertices;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("PathRec: vertex repeats (path must be self-avoiding)");
}

double passage_time(const Environment& env, const PathRec& p) {
  double t = 0.0;
  for (size_t i = 0; i + 1 < p.vertices.size(); ++i)
    t += env.weight(make_edge(p.vertices[i], p.vertices[i + 1]));
  return t;
}

BoxWeights::BoxWeights(const Environment& env, const LatticeBox& box)
    : ix(box), d(box.dim()) {
  w.assign(static_cast<size_t>(ix.count) * static_cast<size_t>(d), kInf);
  for (std::int64_t i = 0; i < ix.count; ++i) {
    Point p = ix.point(i);
    for (int a = 0; a < d; ++a) {
      if (p[a] + 1 > box.hi[a]) continue;
      EdgeId e;
      e.base = p;
      e.axis = a + 1;
      w[static_cast<size_t>(i * d + a)] = env.weight(e);
    }
  }
}

void dijkstra(const BoxWeights& bw, std::int64_t source, std::vector<double>& dist,
              std::vector<std::int64_t>* pred) {
  const std::int64_t n = bw.ix.count;
  dist.assign(static_cast<size_t>(n), kInf);
  if (pred) pred->assign(static_cast<size_t>(n), -1);
  dist[static_cast<size_t>(source)] = 0.0;
  using Item = std::pair<double, std::int64_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  pq.emplace(0.0, source);
  const int d = bw.d;
  const LatticeBox& box = bw.ix.box;
  while (!pq.empty()) {
    auto [du, u] = pq.top();
    pq.pop();
    if (du > dist[static_cast<size_t>(u)]) continue;
    Point pu = bw.ix.point(u);
    for (int a = 0; a < d; ++a) {
      // forward neighbor
      if (pu[a] < box.hi[a]) {
        double w = bw.at(u, a);
        std::int64_t v = u + bw.ix.strides[static_cast<size_t>(a)];
        if (du + w < dist[static_cast<size_t>(v)]) {
          dist[static_cast<size_t>(v)] = du + w;
          if (pred) (*pred)[static_cast<size_t>(v)] = u;
          pq.emplace(du + w, v);
        }
      }
      // backward neighbor
      if (pu[a] > box.lo[a]) {
        std::int64_t v = u - bw.ix.strides[static_cast<size_t>(a)];
        double w = bw.at(v, a);
        if (du + w < dist[static_cast<size_t>(v)]) {
          dist[static_cast<size_t>(v)] = du + w;
          if (pred) (*pred)[static_cast<size_t>(v)] = u;
          pq.emplace(du + w, v);
        }
      }
    }
  }
}

namespace {

// Neighbors of idx inside the box, in increasing lexicographic point order,
// paired with the connecting edge weight.
void for_neighbors(const BoxWeights& bw, std::int64_t idx,
                   const std::function<void(std::int64_t, double)>& fn) {
  const LatticeBox& box = bw.ix.box;
  Point p = bw.ix.point(idx);
  const int d = bw.d;
  // Lexicographically smaller neighbors first: p - e_1, ..., p - e_d sorted by
  // point order is exactly "decrement earlier axes give smaller points", and
  // all decremented points are smaller than all incremented points. Among the
  // decremented ones, smaller axis index => smaller point; among incremented
  // ones, larger axis index => smaller point.
  for (int a = 0; a < d; ++a) {
    if (p[a] > box.lo[a]) {
      std::int64_t v = idx - bw.ix.strides[static_cast<size_t>(a)];
      fn(v, bw.at(v, a));
    }
  }
  for (int a = d - 1; a >= 0; --a) {
    if (p[a] < box.hi[a]) {
      std::int64_t v = idx + bw.ix.strides[static_cast<size_t>(a)];
      fn(v, bw.at(idx, a));
    }
  }
}

}  // namespace

GeodesicResult shortest_passage_in_box(const Environment& env, const Point& x,
                                       const Point& y, const LatticeBox& box) {
  if (x.dim() != env.d || y.dim() != env.d || box.dim() != env.d)
    throw std::invalid_argument("shortest_passage: dimension mismatch");
  if (!box.contains(x) || !box.contains(y))
    throw std::invalid_argument("shortest_passage: endpoint outside search box");
  GeodesicResult res;
  res.search_box = box;
  if (x == y) {
    res.T = 0.0;
    res.geodesic.vertices = {x};
    res.boundary_touched = box.on_boundary(x);
    return res;
  }
  BoxWeights bw(env, box);
  const std::int64_t sx = bw.ix.index(x);
  const std::int64_t sy = bw.ix.index(y);
  std::vector<double> df, db;
  std::vector<std::int64_t> predb;
  dijkstra(bw, sx, df);
  dijkstra(bw, sy, db, &predb);
  const double T = df[static_cast<size_t>(sy)];
  if (!std::isfinite(T)) throw std::runtime_error("shortest_passage: target unreachable");
  res.T = T;
  // Selected geodesic: walk tight edges from x, always taking the
  // lexicographically smallest admissible next vertex. With strictly positive
  // weights the forward distance strictly increases along tight edges, so the
  // walk cannot revisit a vertex and greedily produces the lexicographically
  // smallest tight vertex sequence. Zero-weight edges can create tight cycles;
  // the visited set breaks them and a dead end falls back to the predecessor
  // chain of the reverse Dijkstra run.
  const double tol = 1e-12 * std::max(T, 1.0);
  std::vector<char> visited(static_cast<size_t>(bw.ix.count), 0);
  std::vector<std::int64_t> walk{sx};
  visited[static_cast<size_t>(sx)] = 1;
  bool dead_end = false;
  while (walk.back() != sy) {
    std::int64_t u = walk.back();
    std::int64_t next = -1;
    for_neighbors(bw, u, [&](std::int64_t v, double w) {
      if (next != -1 || visited[static_cast<size_t>(v)]) return;
      if (df[static_cast<size_t>(u)] + w + db[static_cast<size_t>(v)] <= T + tol)
        next = v;
    });
    if (next == -1) {
      dead_end = true;
      break;
    }
    visited[static_cast<size_t>(next)] = 1;
    walk.push_back(next);
  }
  if (dead_end) {
    walk.assign(1, sx);
    for (std::int64_t v = predb[static_cast<size_t>(sx)]; v != -1;
         v = predb[static_cast<size_t>(v)])
      walk.push_back(v);
    if (walk.back() != sy)
      throw std::logic_error("shortest_passage: broken predecessor chain");
  }
  res.geodesic.vertices.reserve(walk.size());
  for (std::int64_t idx : walk) res.geodesic.vertices.push_back(bw.ix.point(idx));
  res.geodesic.validate();
  res.boundary_touched = false;
  for (const Point& p : res.geodesic.vertices)
    if (box.on_boundary(p)) res.boundary_touched = true;
  return res;
}

namespace {

LatticeBox padded_box(const Point& x, const Point& y, double padding) {
  if (!(padding >= 1.0))
    throw std::invalid_argument("shortest_passage: padding must be >= 1");
  Coord pad = static_cast<Coord>(std::ceil(padding * static_cast<double>(l1_dist(x, y))));
  if (pad < 1) pad = 1;
  return LatticeBox::hull(x, y).inflated(pad);
}

}  // namespace

GeodesicResult shortest_passage(const Environment& env, const Point& x,
                                const Point& y, double padding) {
  return shortest_passage_in_box(env, x, y, padded_box(x, y, padding));
}

GeodesicSet enumerate_geodesics_in_box(const Environment& env, const Point& x,
                                       const Point& y, const LatticeBox& box,
                                       std::size_t cap) {
  if (env.dist.infimum() <= 0.0 && env.dist.cdf(0.0) > 0.0)
    throw std::invalid_argument(
        "enumerate_geodesics: weights with an atom at zero are not supported");
  GeodesicResult base = shortest_passage_in_box(env, x, y, box);
  GeodesicSet out;
  if (x == y) {
    out.paths.push_back(base.geodesic);
    return out;
  }
  BoxWeights bw(env, box);
  const std::int64_t sx = bw.ix.index(x);
  const std::int64_t sy = bw.ix.index(y);
  std::vector<double> df, db;
  dijkstra(bw, sx, df);
  dijkstra(bw, sy, db);
  const double T = base.T;
  const double tol = tight_tol(T);
  // Tight edges oriented by strictly increasing forward distance form a DAG;
  // every x-y geodesic is a source-to-sink path of it and vice versa.
  std::vector<std::vector<std::int64_t>> next(static_cast<size_t>(bw.ix.count));
  for (std::int64_t u = 0; u < bw.ix.count; ++u) {
    for_neighbors(bw, u, [&](std::int64_t v, double w) {
      if (w <= 0.0)
        throw std::invalid_argument("enumerate_geodesics: nonpositive edge weight");
      if (df[static_cast<size_t>(u)] + w + db[static_cast<size_t>(v)] <= T + tol &&
          df[static_cast<size_t>(v)] > df[static_cast<size_t>(u)])
        next[static_cast<size_t>(u)].push_back(v);
    });
  }
  // DFS over the DAG (neighbors are already in lexicographic point order, so
  // paths come out lexicographically sorted).
  std::vector<std::int64_t> stack{sx};
  std::vector<size_t> cursor{0};
  while (!stack.empty()) {
    if (stack.back() == sy) {
      if (out.paths.size() == cap) {
        out.partial = true;
        break;
      }
      PathRec p;
      p.vertices.reserve(stack.size());
      for (std::int64_t idx : stack) p.vertices.push_back(bw.ix.point(idx));
      out.paths.push_back(std::move(p));
      stack.pop_back();
      cursor.pop_back();
      continue;
    }
    auto& succ = next[static_cast<size_t>(stack.back())];
    if (cursor.back() < succ.size()) {
      std::int64_t v = succ[cursor.back()++];
      stack.push_back(v);
      cursor.push_back(0);
    } else {
      stack.pop_back();
      cursor.pop_back();
    }
  }
  if (out.paths.empty())
    throw std::logic_error("enumerate_geodesics: no tight path found");
  return out;
}

GeodesicSet enumerate_geodesics(const Environment& env, const Point& x,
                                const Point& y, double padding, std::size_t cap) {
  return enumerate_geodesics_in_box(env, x, y, padded_box(x, y, padding), cap);
}

}  // namespace fpp
