#include "fpp/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <stdexcept>

namespace fpp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Point scaled(const Point& l, int m) {
  Point p = l;
  for (int i = 0; i < p.dim(); ++i) p[i] *= m;
  return p;
}

// S(l;m) = [m*l, m*l + m - 1] per axis.
LatticeBox cube_box(const Point& l, int m) {
  Point lo = scaled(l, m);
  Point hi = lo;
  for (int i = 0; i < hi.dim(); ++i) hi[i] += m - 1;
  return LatticeBox(lo, hi);
}

// R(l;m) = [m(l-1), m(l+2) - 1] per axis.
LatticeBox big_box(const Point& l, int m) {
  Point lo = scaled(l, m);
  Point hi = lo;
  for (int i = 0; i < lo.dim(); ++i) {
    lo[i] -= m;
    hi[i] += 2 * m - 1;
  }
  return LatticeBox(lo, hi);
}

std::optional<LatticeBox> intersect(const LatticeBox& a, const LatticeBox& b) {
  Point lo = a.lo, hi = a.hi;
  for (int i = 0; i < a.dim(); ++i) {
    lo[i] = std::max(lo[i], b.lo[i]);
    hi[i] = std::min(hi[i], b.hi[i]);
    if (lo[i] > hi[i]) return std::nullopt;
  }
  return LatticeBox(lo, hi);
}

Coord floor_div(Coord a, Coord b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

}  // namespace

OpenField open_field(const Environment& env, double threshold) {
  if (threshold < 0) throw std::invalid_argument("open_field: threshold must be >= 0");
  return OpenField{env, threshold};
}

std::optional<std::int64_t> chemical_distance(const OpenField& field, const Point& u,
                                              const Point& v, const LatticeBox& window,
                                              const std::set<Point>* restrict_to) {
  if (!window.contains(u) || !window.contains(v))
    throw std::invalid_argument("chemical_distance: endpoint outside window");
  BoxIndexer ix(window);
  std::vector<std::int64_t> dist(static_cast<size_t>(ix.count), -1);
  std::deque<std::int64_t> q;
  dist[static_cast<size_t>(ix.index(u))] = 0;
  q.push_back(ix.index(u));
  const std::int64_t target = ix.index(v);
  const int d = window.dim();
  while (!q.empty()) {
    std::int64_t cur = q.front();
    q.pop_front();
    if (cur == target) return dist[static_cast<size_t>(cur)];
    Point p = ix.point(cur);
    for (int a = 0; a < d; ++a) {
      for (int dir : {+1, -1}) {
        Point np = p.step(a, dir);
        if (!window.contains(np)) continue;
        std::int64_t ni = ix.index(np);
        if (dist[static_cast<size_t>(ni)] >= 0) continue;
        EdgeId e = make_edge(p, np);
        if (!field.open(e)) continue;
        if (restrict_to && !restrict_to->count(p) && !restrict_to->count(np)) continue;
        dist[static_cast<size_t>(ni)] = dist[static_cast<size_t>(cur)] + 1;
        q.push_back(ni);
      }
    }
  }
  return std::nullopt;
}

double oriented_min_passage(const Environment& env, int n) {
  if (env.d != 2)
    throw std::invalid_argument("oriented_min_passage: defined for d = 2 only");
  if (n < 1) throw std::invalid_argument("oriented_min_passage: n must be >= 1");
  const size_t side = static_cast<size_t>(n) + 1;
  std::vector<double> T(side * side, kInf);
  T[0] = 0.0;
  for (Coord i = 0; i <= n; ++i) {
    for (Coord j = 0; j <= n; ++j) {
      size_t at = static_cast<size_t>(i) * side + static_cast<size_t>(j);
      if (i > 0) {
        EdgeId e{Point{i - 1, j}, 1};
        T[at] = std::min(T[at], T[at - side] + env.weight(e));
      }
      if (j > 0) {
        EdgeId e{Point{i, j - 1}, 2};
        T[at] = std::min(T[at], T[at - 1] + env.weight(e));
      }
    }
  }
  return T[side * side - 1];
}

OrientedLevels oriented_edge_processes(const OpenField& field,
                                       const std::vector<Coord>& init_m, int levels) {
  if (field.env.d != 2)
    throw std::invalid_argument("oriented_edge_processes: defined for d = 2 only");
  if (init_m.empty())
    throw std::invalid_argument("oriented_edge_processes: empty initial set");
  for (Coord m : init_m)
    if (m % 2 != 0)
      throw std::invalid_argument("oriented_edge_processes: initial points must be even");
  OrientedLevels out;
  std::set<Coord> cur(init_m.begin(), init_m.end());
  out.r.push_back(*cur.rbegin());
  out.l.push_back(*cur.begin());
  out.alive.push_back(1);
  for (int level = 0; level < levels; ++level) {
    std::set<Coord> nxt;
    for (Coord m : cur) {
      // rotated point (m, level) maps to ((m+level)/2, (level-m)/2)
      Point x{(m + level) / 2, (level - m) / 2};
      if (field.open(EdgeId{x, 1})) nxt.insert(m + 1);
      if (field.open(EdgeId{x, 2})) nxt.insert(m - 1);
    }
    if (nxt.empty()) {
      out.alive.push_back(0);
      break;
    }
    out.r.push_back(*nxt.rbegin());
    out.l.push_back(*nxt.begin());
    out.alive.push_back(1);
    out.levels_survived = level + 1;
    cur = std::move(nxt);
  }
  return out;
}

BoxParams BoxParams::from_scales(Point l, int j, double K, double M, double s) {
  BoxParams p;
  p.l = std::move(l);
  p.j = j;
  p.m = static_cast<int>(std::floor(K * M));
  p.m1 = static_cast<int>(std::floor(s * K * M));
  if (p.m < 1 || p.m1 < 1 || p.m1 >= p.m)
    throw std::invalid_argument("BoxParams: need 1 <= m1 < m at these scales");
  return p;
}

std::vector<Point> box_boundary(const LatticeBox& b) {
  std::vector<Point> out;
  BoxIndexer ix(b);
  for (std::int64_t i = 0; i < ix.count; ++i) {
    Point p = ix.point(i);
    if (b.on_boundary(p)) out.push_back(std::move(p));
  }
  return out;
}

BoxGeometry box_geometry(const BoxParams& params, int rho) {
  if (rho < 1) throw std::invalid_argument("box_geometry: rho must be >= 1");
  const int d = params.l.dim();
  const int axis = std::abs(params.j);
  if (axis < 1 || axis > d)
    throw std::invalid_argument("box_geometry: |j| must be in 1..d");
  if (params.m < 1 || params.m1 < 1 || params.m1 >= params.m)
    throw std::invalid_argument("box_geometry: need 1 <= m1 < m");
  BoxGeometry g;
  g.S = cube_box(params.l, params.m);
  g.R = big_box(params.l, params.m);
  Point shifted = params.l;
  shifted[axis - 1] += params.j > 0 ? 2 : -2;
  auto bj = intersect(g.R, big_box(shifted, params.m));
  if (!bj) throw std::logic_error("box_geometry: empty B^j");
  g.Bj = *bj;

  const Coord pad = static_cast<Coord>(rho) * params.m1;
  g.Bcheck_minus = g.Bj.inflated(pad);
  // shrink; degenerate when any side collapses
  Point lo = g.Bj.lo, hi = g.Bj.hi;
  for (int i = 0; i < d; ++i) {
    lo[i] += pad;
    hi[i] -= pad;
    if (lo[i] > hi[i]) {
      g.degenerate = true;
      return g;
    }
  }
  g.Bcheck_plus = LatticeBox(lo, hi);

  // D: m1-multiples at l-infinity distance > m1 from the complement
  std::vector<std::vector<Coord>> axes_vals(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) {
    Coord a = lo[i] + params.m1, b = hi[i] - params.m1;
    for (Coord k = floor_div(a + params.m1 - 1, params.m1); k * params.m1 <= b; ++k)
      axes_vals[static_cast<size_t>(i)].push_back(k * params.m1);
    if (axes_vals[static_cast<size_t>(i)].empty()) {
      g.degenerate = true;
      return g;
    }
  }
  std::vector<size_t> counter(static_cast<size_t>(d), 0);
  for (;;) {
    Point p(std::vector<Coord>(static_cast<size_t>(d), 0));
    for (int i = 0; i < d; ++i) p[i] = axes_vals[static_cast<size_t>(i)][counter[static_cast<size_t>(i)]];
    g.D.push_back(std::move(p));
    int i = d - 1;
    while (i >= 0 && ++counter[static_cast<size_t>(i)] == axes_vals[static_cast<size_t>(i)].size()) {
      counter[static_cast<size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
  }

  // C: full axis lines through D, clipped to Bcheck_plus
  std::set<Point> cset;
  for (const Point& v : g.D) {
    for (int i = 0; i < d; ++i) {
      Point p = v;
      for (Coord t = g.Bcheck_plus.lo[i]; t <= g.Bcheck_plus.hi[i]; ++t) {
        p[i] = t;
        cset.insert(p);
      }
    }
  }
  g.C.assign(cset.begin(), cset.end());

  auto on_check_boundary = [&](const Point& p) {
    return g.Bcheck_plus.contains(p) && g.Bcheck_plus.on_boundary(p);
  };

  std::set<EdgeId> ctilde, etilde1, etilde2;
  for (const Point& v : g.C) {
    for (int a = 0; a < d; ++a) {
      for (int dir : {+1, -1}) {
        Point w = v.step(a, dir);
        EdgeId e = make_edge(v, w);
        bool w_in_c = cset.count(w) != 0;
        if (w_in_c && dir == +1) ctilde.insert(e);
        // Etilde: w not in C \ boundary(Bcheck_plus)
        if (!w_in_c || on_check_boundary(w)) {
          if (on_check_boundary(v) || on_check_boundary(w))
            etilde1.insert(e);
          else
            etilde2.insert(e);
        }
      }
    }
  }
  g.Ctilde.assign(ctilde.begin(), ctilde.end());
  g.Etilde1.assign(etilde1.begin(), etilde1.end());
  g.Etilde2.assign(etilde2.begin(), etilde2.end());
  return g;
}

namespace {

bool edge_has_color(const OpenField& field, const EdgeId& e, ClusterColor color) {
  bool open = field.open(e);
  return color == ClusterColor::White ? open : !open;
}

}  // namespace

ClusterResult cluster_and_boundary(const OpenField& field, const std::vector<Point>& A,
                                   ClusterColor color, const LatticeBox& window) {
  if (A.empty()) throw std::invalid_argument("cluster_and_boundary: empty seed set");
  for (const Point& p : A)
    if (!window.contains(p))
      throw std::invalid_argument("cluster_and_boundary: seed outside window");
  const int d = window.dim();
  BoxIndexer ix(window);
  std::vector<char> in_cluster(static_cast<size_t>(ix.count), 0);
  std::vector<std::int64_t> queue;
  for (const Point& p : A) {
    std::int64_t i = ix.index(p);
    if (!in_cluster[static_cast<size_t>(i)]) {
      in_cluster[static_cast<size_t>(i)] = 1;
      queue.push_back(i);
    }
  }
  ClusterResult res;
  for (size_t head = 0; head < queue.size(); ++head) {
    Point p = ix.point(queue[head]);
    if (window.on_boundary(p)) res.truncated = true;
    for (int a = 0; a < d; ++a) {
      for (int dir : {+1, -1}) {
        Point np = p.step(a, dir);
        if (!window.contains(np)) continue;
        std::int64_t ni = ix.index(np);
        if (in_cluster[static_cast<size_t>(ni)]) continue;
        if (!edge_has_color(field, make_edge(p, np), color)) continue;
        in_cluster[static_cast<size_t>(ni)] = 1;
        queue.push_back(ni);
      }
    }
  }
  for (std::int64_t i : queue) res.cluster.push_back(ix.point(i));
  std::sort(res.cluster.begin(), res.cluster.end());

  // outside-in reachability over Z^d edges, ignoring weights
  std::vector<char> reached(static_cast<size_t>(ix.count), 0);
  std::vector<std::int64_t> q2;
  for (std::int64_t i = 0; i < ix.count; ++i) {
    if (in_cluster[static_cast<size_t>(i)]) continue;
    if (window.on_boundary(ix.point(i))) {
      reached[static_cast<size_t>(i)] = 1;
      q2.push_back(i);
    }
  }
  for (size_t head = 0; head < q2.size(); ++head) {
    Point p = ix.point(q2[head]);
    for (int a = 0; a < d; ++a) {
      for (int dir : {+1, -1}) {
        Point np = p.step(a, dir);
        if (!window.contains(np)) continue;
        std::int64_t ni = ix.index(np);
        if (reached[static_cast<size_t>(ni)] || in_cluster[static_cast<size_t>(ni)]) continue;
        reached[static_cast<size_t>(ni)] = 1;
        q2.push_back(ni);
      }
    }
  }
  // boundary = reached vertices L-adjacent (|.|_inf = 1) to the cluster
  std::set<Point> cluster_set(res.cluster.begin(), res.cluster.end());
  for (std::int64_t i : q2) {
    Point p = ix.point(i);
    bool adjacent = false;
    std::vector<Coord> off(static_cast<size_t>(d), -1);
    for (;;) {
      Point np = p;
      bool all_zero = true;
      for (int a = 0; a < d; ++a) {
        np[a] += off[static_cast<size_t>(a)];
        if (off[static_cast<size_t>(a)] != 0) all_zero = false;
      }
      if (!all_zero && cluster_set.count(np)) {
        adjacent = true;
        break;
      }
      int a = d - 1;
      while (a >= 0 && ++off[static_cast<size_t>(a)] == 2) {
        off[static_cast<size_t>(a)] = -1;
        --a;
      }
      if (a < 0) break;
    }
    if (adjacent) res.exterior_boundary.push_back(p);
  }
  std::sort(res.exterior_boundary.begin(), res.exterior_boundary.end());
  return res;
}

namespace {

// Shared machinery for Kesten shells: white components of the window labeled
// once, components touching the window boundary flagged as the finite proxy
// for infinite clusters.
struct ShellEngine {
  const OpenField& field;
  LatticeBox window;
  BoxIndexer ix;
  std::vector<std::int32_t> label;
  std::vector<char> comp_infinite;

  ShellEngine(const OpenField& f, const LatticeBox& w)
      : field(f), window(w), ix(w), label(static_cast<size_t>(ix.count), -1) {
    const int d = window.dim();
    std::int32_t next = 0;
    std::vector<std::int64_t> stack;
    for (std::int64_t s = 0; s < ix.count; ++s) {
      if (label[static_cast<size_t>(s)] >= 0) continue;
      std::int32_t id = next++;
      comp_infinite.push_back(0);
      label[static_cast<size_t>(s)] = id;
      stack.assign(1, s);
      while (!stack.empty()) {
        std::int64_t cur = stack.back();
        stack.pop_back();
        Point p = ix.point(cur);
        if (window.on_boundary(p)) comp_infinite[static_cast<size_t>(id)] = 1;
        for (int a = 0; a < d; ++a) {
          for (int dir : {+1, -1}) {
            Point np = p.step(a, dir);
            if (!window.contains(np)) continue;
            std::int64_t ni = ix.index(np);
            if (label[static_cast<size_t>(ni)] >= 0) continue;
            if (!field.open(make_edge(p, np))) continue;
            label[static_cast<size_t>(ni)] = id;
            stack.push_back(ni);
          }
        }
      }
    }
  }

  bool infinite_white(const Point& p) const {
    return comp_infinite[static_cast<size_t>(label[static_cast<size_t>(ix.index(p))])];
  }

  KestenShell shell(const Point& v) const {
    if (!window.contains(v))
      throw std::invalid_argument("kesten_shell: vertex outside window");
    const int d = window.dim();
    // n(v): grow the cube D_k(v) until it contains a proxy-infinite vertex
    int n = -1;
    for (int k = 0;; ++k) {
      LatticeBox dk = LatticeBox(v, v).inflated(k);
      bool inside = true;
      for (int a = 0; a < d; ++a)
        if (dk.lo[a] < window.lo[a] || dk.hi[a] > window.hi[a]) inside = false;
      if (!inside)
        throw std::runtime_error(
            "kesten_shell: no vertex with boundary-reaching white cluster near " +
            v.to_string());
      bool found = false;
      BoxIndexer dix(dk);
      for (std::int64_t i = 0; i < dix.count && !found; ++i) {
        Point u = dix.point(i);
        if (linf_dist(u, v) == k && infinite_white(u)) found = true;
      }
      if (k == 0 && found) {
        n = 0;
        break;
      }
      if (found) {
        n = k;
        break;
      }
    }
    // black cluster of D_n(v) inside a local window, grown on truncation
    LatticeBox dn = LatticeBox(v, v).inflated(n);
    std::vector<Point> A;
    BoxIndexer dix(dn);
    for (std::int64_t i = 0; i < dix.count; ++i) A.push_back(dix.point(i));
    KestenShell out;
    out.n_v = n;
    Coord pad = 4;
    for (;;) {
      auto local = intersect(dn.inflated(pad), window);
      if (!local) throw std::logic_error("kesten_shell: empty local window");
      ClusterResult res =
          cluster_and_boundary(field, A, ClusterColor::Black, *local);
      bool at_full_window = true;
      for (int a = 0; a < d; ++a)
        if (local->lo[a] > window.lo[a] || local->hi[a] < window.hi[a])
          at_full_window = false;
      if (!res.truncated || at_full_window) {
        out.shell = std::move(res.exterior_boundary);
        out.truncated = res.truncated;
        return out;
      }
      pad *= 2;
    }
  }
};

Coord l1_diameter(const std::vector<Point>& pts) {
  Coord best = 0;
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j)
      best = std::max(best, l1_dist(pts[i], pts[j]));
  return best;
}

}  // namespace

KestenShell kesten_shell(const OpenField& field, const Point& v,
                         const LatticeBox& window) {
  ShellEngine engine(field, window);
  return engine.shell(v);
}

BarrierResult good_barrier(const Environment& env, const BoxParams& params,
                           const PercConfig& cfg) {
  const int d = env.d;
  BoxGeometry geom = box_geometry(params, cfg.rho);
  if (geom.degenerate)
    throw std::invalid_argument("good_barrier: degenerate box geometry");
  OpenField field = open_field(env, cfg.Mbar);
  const LatticeBox window = geom.Bj.inflated(6 * params.m);
  ShellEngine engine(field, window);

  // all x within l-infinity distance 1 of the B^j boundary
  std::set<Point> xs;
  for (const Point& v : box_boundary(geom.Bj)) {
    LatticeBox nb = LatticeBox(v, v).inflated(1);
    BoxIndexer nix(nb);
    for (std::int64_t i = 0; i < nix.count; ++i) xs.insert(nix.point(i));
  }

  BarrierResult res;
  const double diam_cap = cfg.strict_diameter
                              ? static_cast<double>(params.m1) / 10000.0
                              : std::max(1.0, static_cast<double>(params.m1));
  std::set<Point> gset;
  for (const Point& x : xs) {
    KestenShell sh = engine.shell(x);
    if (static_cast<double>(l1_diameter(sh.shell)) >= diam_cap || sh.truncated) {
      res.failure_clause = 1;
      res.offending = x;
      return res;
    }
    gset.insert(sh.shell.begin(), sh.shell.end());
  }
  res.G.assign(gset.begin(), gset.end());

  // clause (ii): annulus-confined connectors to C on the Bcheck_plus boundary
  const LatticeBox& outer = geom.Bcheck_minus;
  BoxIndexer oix(outer);
  auto in_plus = [&](const Point& p) { return geom.Bcheck_plus.contains(p); };
  std::vector<char> target(static_cast<size_t>(oix.count), 0);
  bool any_target = false;
  for (const Point& p : geom.C) {
    if (geom.Bcheck_plus.on_boundary(p)) {
      target[static_cast<size_t>(oix.index(p))] = 1;
      any_target = true;
    }
  }
  if (!any_target) throw std::invalid_argument("good_barrier: no connector targets");

  // multi-source Dijkstra (time) and BFS (length) backwards from the targets,
  // relaxing only into annulus vertices so interior vertices of any witness
  // stay inside the annulus
  std::vector<double> dt(static_cast<size_t>(oix.count), kInf);
  std::vector<std::int64_t> pt(static_cast<size_t>(oix.count), -1);
  std::vector<std::int64_t> dl(static_cast<size_t>(oix.count), -1);
  std::vector<std::int64_t> pl(static_cast<size_t>(oix.count), -1);
  using Item = std::pair<double, std::int64_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  std::deque<std::int64_t> bfs;
  for (std::int64_t i = 0; i < oix.count; ++i) {
    if (target[static_cast<size_t>(i)]) {
      dt[static_cast<size_t>(i)] = 0.0;
      pq.emplace(0.0, i);
      dl[static_cast<size_t>(i)] = 0;
      bfs.push_back(i);
    }
  }
  auto relax_ok = [&](const Point& np) {
    return outer.contains(np) && !in_plus(np);  // annulus only
  };
  while (!pq.empty()) {
    auto [du, u] = pq.top();
    pq.pop();
    if (du > dt[static_cast<size_t>(u)]) continue;
    Point p = oix.point(u);
    for (int a = 0; a < d; ++a) {
      for (int dir : {+1, -1}) {
        Point np = p.step(a, dir);
        if (!relax_ok(np)) continue;
        std::int64_t ni = oix.index(np);
        double w = env.weight(make_edge(p, np));
        if (du + w < dt[static_cast<size_t>(ni)]) {
          dt[static_cast<size_t>(ni)] = du + w;
          pt[static_cast<size_t>(ni)] = u;
          pq.emplace(du + w, ni);
        }
      }
    }
  }
  while (!bfs.empty()) {
    std::int64_t u = bfs.front();
    bfs.pop_front();
    Point p = oix.point(u);
    for (int a = 0; a < d; ++a) {
      for (int dir : {+1, -1}) {
        Point np = p.step(a, dir);
        if (!relax_ok(np)) continue;
        std::int64_t ni = oix.index(np);
        if (dl[static_cast<size_t>(ni)] >= 0) continue;
        dl[static_cast<size_t>(ni)] = dl[static_cast<size_t>(u)] + 1;
        pl[static_cast<size_t>(ni)] = u;
        bfs.push_back(ni);
      }
    }
  }

  const double time_cap = cfg.time_budget(d) * params.m1;
  const double len_cap = cfg.length_budget(d) * params.m1;
  auto chain = [&](const std::vector<std::int64_t>& pred, std::int64_t from) {
    PathRec path;
    for (std::int64_t v = from; v != -1; v = pred[static_cast<size_t>(v)])
      path.vertices.push_back(oix.point(v));
    return path;
  };
  auto path_time = [&](const PathRec& p) {
    double t = 0;
    for (size_t i = 0; i + 1 < p.vertices.size(); ++i)
      t += env.weight(make_edge(p.vertices[i], p.vertices[i + 1]));
    return t;
  };
  for (const Point& u : res.G) {
    if (!outer.contains(u) || in_plus(u)) {
      res.failure_clause = 2;
      res.offending = u;
      return res;
    }
    std::int64_t ui = oix.index(u);
    PathRec witness;
    double wt = kInf;
    // prefer the min-time connector; fall back to the min-length one when its
    // hop count exceeds the length budget
    if (dt[static_cast<size_t>(ui)] <= time_cap) {
      PathRec p = chain(pt, ui);
      if (static_cast<double>(p.length()) <= len_cap) {
        witness = std::move(p);
        wt = dt[static_cast<size_t>(ui)];
      }
    }
    if (witness.vertices.empty() && dl[static_cast<size_t>(ui)] >= 0 &&
        static_cast<double>(dl[static_cast<size_t>(ui)]) <= len_cap) {
      PathRec p = chain(pl, ui);
      double t = path_time(p);
      if (t <= time_cap) {
        witness = std::move(p);
        wt = t;
      }
    }
    if (witness.vertices.empty()) {
      res.failure_clause = 2;
      res.offending = u;
      return res;
    }
    res.witnesses.push_back(std::move(witness));
    res.witness_times.push_back(wt);
  }
  res.success = true;
  return res;
}

bool check_B1(const Environment& env, const BoxParams& params, double delta,
              std::int64_t pair_budget) {
  if (!(delta > 0)) throw std::invalid_argument("check_B1: delta must be positive");
  BoxGeometry geom = box_geometry(params, 1);
  const double r = env.dist.infimum();
  BoxIndexer bix(geom.Bj);
  std::vector<Point> all;
  all.reserve(static_cast<size_t>(bix.count));
  for (std::int64_t i = 0; i < bix.count; ++i) all.push_back(bix.point(i));

  // choose source vertices so that sources * |Bj| stays under budget
  std::vector<Point> sources;
  std::int64_t max_sources = std::max<std::int64_t>(1, pair_budget / bix.count);
  if (bix.count <= max_sources) {
    sources = all;
  } else {
    // always include the corners of Bj, then stride-sample the rest
    const int d = env.d;
    for (std::int64_t mask = 0; mask < (std::int64_t{1} << d); ++mask) {
      Point c = geom.Bj.lo;
      for (int a = 0; a < d; ++a)
        if (mask & (std::int64_t{1} << a)) c[a] = geom.Bj.hi[a];
      sources.push_back(c);
    }
    std::int64_t stride = std::max<std::int64_t>(
        1, bix.count / std::max<std::int64_t>(1, max_sources - static_cast<std::int64_t>(sources.size())));
    for (std::int64_t i = 0; i < bix.count; i += stride) sources.push_back(bix.point(i));
  }

  BoxWeights bw(env, geom.R);
  std::vector<double> dist;
  for (const Point& v : sources) {
    dijkstra(bw, bw.ix.index(v), dist);
    for (const Point& w : all) {
      Coord l1 = l1_dist(v, w);
      if (l1 < params.m) continue;
      if (dist[static_cast<size_t>(bw.ix.index(w))] <
          (r + delta) * static_cast<double>(l1))
        return false;
    }
  }
  return true;
}

bool is_black(const Environment& env, const BoxParams& params, const PercConfig& cfg) {
  if (!check_B1(env, params, cfg.delta)) return false;
  return good_barrier(env, params, cfg).success;
}

bool is_cube_black(const Environment& env, const Point& l, int m, int m1,
                   const PercConfig& cfg) {
  const int d = env.d;
  for (int a = 1; a <= d; ++a) {
    for (int sgn : {+1, -1}) {
      BoxParams p;
      p.l = l;
      p.m = m;
      p.m1 = m1;
      p.j = sgn * a;
      if (!is_black(env, p, cfg)) return false;
    }
  }
  return true;
}

namespace {

Point cube_index_of(const Point& v, int m) {
  Point l = v;
  for (int i = 0; i < v.dim(); ++i) l[i] = floor_div(v[i], m);
  return l;
}

// Does the path cross Bj between its two thin-direction faces?
bool crosses_thin(const PathRec& path, const LatticeBox& bj, int axis0) {
  size_t i = 0;
  const auto& vs = path.vertices;
  while (i < vs.size()) {
    if (!bj.contains(vs[i])) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j + 1 < vs.size() && bj.contains(vs[j + 1])) ++j;
    Coord first = vs[i][axis0], last = vs[j][axis0];
    if ((first == bj.lo[axis0] && last == bj.hi[axis0]) ||
        (first == bj.hi[axis0] && last == bj.lo[axis0]))
      return true;
    i = j + 1;
  }
  return false;
}

}  // namespace

BlackCubeStats black_cube_stats(const Environment& env, const PathRec& geodesic,
                                int m, int m1, const PercConfig& cfg) {
  BlackCubeStats stats;
  std::map<Point, bool> cube_cache;
  std::map<std::pair<Point, int>, bool> box_cache;

  std::set<Point> cubes;
  for (const Point& v : geodesic.vertices) cubes.insert(cube_index_of(v, m));
  for (const Point& l : cubes) {
    bool black = is_cube_black(env, l, m, m1, cfg);
    cube_cache[l] = black;
    stats.per_box.push_back(BoxVisit{l, 0, black});
    if (black) ++stats.visited_black_cubes;
  }

  // candidate boxes: B^j(l') for cube indices l' near any visited cube
  const int d = env.d;
  std::set<std::pair<Point, int>> candidates;
  for (const Point& c : cubes) {
    LatticeBox nb = LatticeBox(c, c).inflated(2);
    BoxIndexer nix(nb);
    for (std::int64_t i = 0; i < nix.count; ++i) {
      Point l = nix.point(i);
      for (int a = 1; a <= d; ++a)
        for (int sgn : {+1, -1}) candidates.emplace(l, sgn * a);
    }
  }
  for (const auto& [l, j] : candidates) {
    BoxParams p;
    p.l = l;
    p.m = m;
    p.m1 = m1;
    p.j = j;
    BoxGeometry geom = box_geometry(p, cfg.rho);
    if (!crosses_thin(geodesic, geom.Bj, std::abs(j) - 1)) continue;
    auto key = std::make_pair(l, j);
    auto it = box_cache.find(key);
    bool black = it != box_cache.end() ? it->second : is_black(env, p, cfg);
    box_cache[key] = black;
    stats.per_box.push_back(BoxVisit{l, j, black});
    if (black) ++stats.crossed_black_boxes;
  }
  return stats;
}

bool is_x_good(const Environment& env, const PathRec& geodesic, const BoxParams& params,
               double M, std::optional<std::pair<double, double>> range) {
  BoxGeometry geom = box_geometry(params, 1);
  for (size_t i = 0; i + 1 < geodesic.vertices.size(); ++i) {
    const Point& u = geodesic.vertices[i];
    const Point& v = geodesic.vertices[i + 1];
    if (!geom.Bj.contains(u) || !geom.Bj.contains(v)) continue;
    double w = env.weight(make_edge(u, v));
    if (range) {
      if (w >= range->first && w <= range->second) return true;
    } else if (w >= M) {
      return true;
    }
  }
  return false;
}

bool check_Q(const Environment& env, const BoxParams& params, int rho, double c,
             double gamma, double M, QVariant variant, int i) {
  if (!(gamma > 1.0)) throw std::invalid_argument("check_Q: gamma must exceed 1");
  BoxGeometry geom = box_geometry(params, rho);
  if (geom.degenerate) throw std::invalid_argument("check_Q: degenerate box geometry");
  const double r = env.dist.infimum();
  std::set<EdgeId> etilde(geom.Etilde1.begin(), geom.Etilde1.end());
  etilde.insert(geom.Etilde2.begin(), geom.Etilde2.end());
  if (variant == QVariant::Q) {
    for (const EdgeId& e : geom.Etilde1) {
      double w = env.weight(e);
      if (w < M || w > gamma * M) return false;
    }
    for (const EdgeId& e : geom.Etilde2)
      if (env.weight(e) < M) return false;
  } else {
    const double lo = std::pow(gamma, i) * M;
    const double hi = std::pow(gamma, i + 1) * M;
    for (const EdgeId& e : etilde) {
      double w = env.weight(e);
      if (w < lo || w >= hi) return false;
    }
  }
  for (const EdgeId& e : geom.Ctilde)
    if (!etilde.count(e) && env.weight(e) > r + c) return false;
  return true;
}

}  // namespace fpp
