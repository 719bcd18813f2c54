#include "fpp/shells.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <stdexcept>

namespace fpp {

ShellSpec shell(const EdgeId& e, int h) {
  if (h < 0) throw std::invalid_argument("shell: radius must be >= 0");
  ShellSpec s;
  s.e = e;
  s.h = h;
  if (h == 0) {
    s.vertices = {e.base, e.other()};
    std::sort(s.vertices.begin(), s.vertices.end());
    s.edges = {e};
    return s;
  }
  const Point v = edge_vertex(e);
  const int d = v.dim();
  LatticeBox cube(v, v);
  cube = cube.inflated(h);
  BoxIndexer ix(cube);
  for (std::int64_t i = 0; i < ix.count; ++i) {
    Point p = ix.point(i);
    if (linf_dist(p, v) == h) s.vertices.push_back(p);
  }
  // vertices come out sorted because BoxIndexer iterates lexicographically
  for (const Point& p : s.vertices) {
    for (int a = 0; a < d; ++a) {
      Point q = p.step(a, +1);
      if (linf_dist(q, v) == h) {
        EdgeId ed;
        ed.base = p;
        ed.axis = a + 1;
        s.edges.push_back(ed);
      }
    }
  }
  return s;
}

double restricted_passage_max(const Environment& env, const EdgeId& e, int h) {
  if (h == 0) return env.weight(e);
  ShellSpec s = shell(e, h);
  std::map<Point, int> idx;
  for (size_t i = 0; i < s.vertices.size(); ++i)
    idx[s.vertices[i]] = static_cast<int>(i);
  const int n = static_cast<int>(s.vertices.size());
  std::vector<std::vector<std::pair<int, double>>> adj(static_cast<size_t>(n));
  for (const EdgeId& ed : s.edges) {
    int u = idx.at(ed.base);
    int v = idx.at(ed.other());
    double w = env.weight(ed);
    adj[static_cast<size_t>(u)].emplace_back(v, w);
    adj[static_cast<size_t>(v)].emplace_back(u, w);
  }
  double best = 0.0;
  std::vector<double> dist(static_cast<size_t>(n));
  using Item = std::pair<double, int>;
  for (int src = 0; src < n; ++src) {
    std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
    dist[static_cast<size_t>(src)] = 0.0;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    pq.emplace(0.0, src);
    while (!pq.empty()) {
      auto [du, u] = pq.top();
      pq.pop();
      if (du > dist[static_cast<size_t>(u)]) continue;
      for (auto [v, w] : adj[static_cast<size_t>(u)]) {
        if (du + w < dist[static_cast<size_t>(v)]) {
          dist[static_cast<size_t>(v)] = du + w;
          pq.emplace(du + w, v);
        }
      }
    }
    for (double dv : dist)
      if (std::isfinite(dv) && dv > best) best = dv;
  }
  return best;
}

bool is_kM_large(const Environment& env, const EdgeId& e, int k, double M) {
  if (k < 0) throw std::invalid_argument("is_kM_large: k must be >= 0");
  if (!(M > 0)) throw std::invalid_argument("is_kM_large: M must be positive");
  for (int h = 0; h <= k; ++h)
    if (restricted_passage_max(env, e, h) < M) return false;
  return true;
}

double klarge_path_constant(int k, int d) {
  EdgeId e;
  e.base = Point(std::vector<Coord>(static_cast<size_t>(d), 0));
  e.axis = 1;
  size_t c = 1;
  for (int h = 0; h <= k; ++h) c = std::max(c, shell(e, h).edges.size());
  return static_cast<double>(c);
}

double klarge_bound(const DistributionSpec& dist, int k, double M, int d) {
  if (k < 1) throw std::invalid_argument("klarge_bound: k must be >= 1");
  const double C = klarge_path_constant(k, d);
  const double tail = dist.tail(M / C);
  if (tail <= 0.0) return 0.0;
  // evaluated in logs: the combinatorial prefactor is astronomically large
  double log_bound = d * k * std::log(C) + 10.0 * k * d * std::log(10.0 * k) +
                     k * (d - 1) * std::log(tail);
  if (log_bound >= 0.0) return 1.0;
  return std::exp(log_bound);
}

}  // namespace fpp
