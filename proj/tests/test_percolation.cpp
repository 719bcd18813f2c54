#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "fpp/percolation.hpp"
#include "fpp/rng.hpp"
#include "support/oracles.hpp"

using namespace fpp;

namespace {

Environment const_env(double v, int d = 2) {
  return Environment(0, DistributionSpec::make_atoms({{v, 1}}), d);
}

Environment exp_env(std::uint64_t seed, int d = 2) {
  return Environment(seed, DistributionSpec::exponential(1), d);
}

// weights 2 with a rare cheap atom: passage times stay well above the
// distribution infimum, so the strict-passage condition holds
Environment sparse_cheap_env(std::uint64_t seed) {
  return Environment(seed, DistributionSpec::make_atoms({{1, 0.05}, {2, 0.95}}), 2);
}

}  // namespace

TEST_CASE("open field thresholding") {
  OpenField f = open_field(const_env(0.5), 1.0);
  CHECK(f.open(EdgeId{Point{0, 0}, 1}));
  OpenField g = open_field(exp_env(1), 0.0);
  CHECK(!g.open(EdgeId{Point{0, 0}, 1}));  // a.s. positive weight
  CHECK_THROWS(open_field(exp_env(1), -1.0));

  // open fraction tracks F(threshold)
  double thr = 0.7;
  OpenField h = open_field(exp_env(5), thr);
  int open = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i)
    if (h.open(EdgeId{Point{i % 100, i / 100}, 1})) ++open;
  double expect = 1 - std::exp(-thr);
  CHECK(static_cast<double>(open) / n == doctest::Approx(expect).epsilon(0.04));
}

TEST_CASE("chemical distance corridor and disconnection") {
  Environment env = const_env(10.0);
  for (int i = 0; i < 5; ++i) env.overrides[EdgeId{Point{i, 0}, 1}] = 0.1;
  OpenField f = open_field(env, 1.0);
  LatticeBox w(Point{-2, -2}, Point{8, 8});
  auto d1 = chemical_distance(f, Point{0, 0}, Point{5, 0}, w);
  REQUIRE(d1.has_value());
  CHECK(*d1 == 5);
  auto d2 = chemical_distance(f, Point{0, 0}, Point{0, 5}, w);
  CHECK(!d2.has_value());
  CHECK_THROWS(chemical_distance(f, Point{0, 0}, Point{100, 0}, w));
}

TEST_CASE("chemical distance dominates l1 and restriction never helps") {
  LatticeBox w(Point{-5, -5}, Point{15, 15});
  std::set<Point> tube;
  for (Coord x = -5; x <= 15; ++x)
    for (Coord y = -2; y <= 4; ++y) tube.insert(Point{x, y});
  int compared = 0;
  for (int s = 0; s < 200; ++s) {
    OpenField f = open_field(exp_env(static_cast<std::uint64_t>(s)), 1.6);
    Point u{0, 0}, v{8, 2};
    auto base = chemical_distance(f, u, v, w);
    auto restr = chemical_distance(f, u, v, w, &tube);
    if (base) {
      CHECK(*base >= l1_dist(u, v));
      if (restr) {
        CHECK(*restr >= *base);
        ++compared;
      }
    }
  }
  CHECK(compared > 50);  // the comparison actually exercised
}

TEST_CASE("oriented passage extremes and oracle") {
  CHECK(oriented_min_passage(const_env(1), 4) == doctest::Approx(8.0));
  CHECK(oriented_min_passage(const_env(0), 4) == doctest::Approx(0.0));
  for (int s = 0; s < 25; ++s) {
    Environment env = exp_env(static_cast<std::uint64_t>(40 + s));
    CHECK(oriented_min_passage(env, 3) ==
          doctest::Approx(oracle::brute_oriented(env, 3)));
  }
}

TEST_CASE("oriented passage is compatible with superadditivity") {
  for (int s = 0; s < 20; ++s) {
    Environment env = exp_env(static_cast<std::uint64_t>(80 + s));
    double whole = oriented_min_passage(env, 6);
    double first = oriented_min_passage(env, 3);
    // second leg: best monotone path from (3,3) to (6,6), by enumeration
    double second = std::numeric_limits<double>::infinity();
    std::vector<int> steps = {0, 0, 0, 1, 1, 1};
    do {
      Point cur{3, 3};
      double cost = 0;
      for (int st : steps) {
        EdgeId e{cur, st == 0 ? 1 : 2};
        cost += env.weight(e);
        cur = e.other();
      }
      second = std::min(second, cost);
    } while (std::next_permutation(steps.begin(), steps.end()));
    CHECK(whole <= first + second + 1e-9);
  }
}

TEST_CASE("oriented level processes") {
  OpenField all_open = open_field(const_env(0.0), 1.0);
  OrientedLevels lv = oriented_edge_processes(all_open, {0}, 6);
  CHECK(lv.levels_survived == 6);
  for (int i = 1; i <= 6; ++i) {
    CHECK(lv.alive[static_cast<size_t>(i)]);
    CHECK(lv.r[static_cast<size_t>(i)] == i);
    CHECK(lv.l[static_cast<size_t>(i)] == -i);
  }
  OpenField all_closed = open_field(const_env(5.0), 1.0);
  OrientedLevels dead = oriented_edge_processes(all_closed, {0}, 6);
  CHECK(dead.levels_survived == 0);
  CHECK(!dead.alive.back());

  CHECK_THROWS(oriented_edge_processes(all_open, {1}, 3));  // odd start
  CHECK_THROWS(oriented_edge_processes(all_open, {}, 3));

  // supercritical: most starts survive and the right edge drifts right
  int survived = 0;
  double rsum = 0;
  const int reps = 100, levels = 120;
  for (int s = 0; s < reps; ++s) {
    Environment env(static_cast<std::uint64_t>(s),
                    DistributionSpec::bernoulli_shift(0, 1, 0.2), 2);
    OpenField f = open_field(env, 0.5);  // open with probability 0.8
    OrientedLevels x = oriented_edge_processes(f, {0}, levels);
    if (x.levels_survived == levels) {
      ++survived;
      rsum += static_cast<double>(x.r.back()) / levels;
    }
  }
  CHECK(survived > reps / 2);
  CHECK(rsum / survived > 0.05);
}

TEST_CASE("box geometry counts and nesting") {
  BoxParams params{Point{0, 0}, 30, 1, 4};
  BoxGeometry g = box_geometry(params, 2);
  REQUIRE(!g.degenerate);
  CHECK(g.S.vertex_count() == 30 * 30);
  CHECK(g.R.vertex_count() == 90 * 90);
  // thin along the box axis, long across
  CHECK(g.Bj.side(0) == 30);
  CHECK(g.Bj.side(1) == 90);
  // nesting
  for (const Point& p : box_boundary(g.Bcheck_plus)) CHECK(g.Bj.contains(p));
  CHECK(g.Bcheck_minus.contains(g.Bj.lo));
  CHECK(g.Bcheck_minus.contains(g.Bj.hi));
  // the scaffold exists and its two exit classes are disjoint
  CHECK(!g.D.empty());
  CHECK(!g.Ctilde.empty());
  CHECK(!g.Etilde1.empty());
  std::set<EdgeId> e1(g.Etilde1.begin(), g.Etilde1.end());
  for (const EdgeId& e : g.Etilde2) CHECK(!e1.count(e));
  // every scaffold point lies on an axis line through some anchor
  for (const Point& p : g.C) {
    bool aligned = false;
    for (const Point& v : g.D)
      if (p[0] == v[0] || p[1] == v[1]) aligned = true;
    CHECK(aligned);
  }
}

TEST_CASE("scaffold size grows linearly in m") {
  double per_m[3];
  int idx = 0;
  for (int m : {30, 60, 120}) {
    BoxParams params{Point{0, 0}, m, 1, std::max(2, m / 8)};
    BoxGeometry g = box_geometry(params, 2);
    REQUIRE(!g.degenerate);
    per_m[idx++] = static_cast<double>(g.Ctilde.size()) / m;
  }
  CHECK(per_m[1] == doctest::Approx(per_m[0]).epsilon(0.75));
  CHECK(per_m[2] == doctest::Approx(per_m[1]).epsilon(0.75));
}

TEST_CASE("degenerate scale flagged") {
  BoxParams params{Point{0, 0}, 12, 1, 3};
  BoxGeometry g = box_geometry(params, 2);  // pad 6 collapses the thin side
  CHECK(g.degenerate);
  CHECK_THROWS(box_geometry(BoxParams{Point{0, 0}, 3, 1, 4}, 2));  // m1 >= m
}

TEST_CASE("scale helper") {
  BoxParams p = BoxParams::from_scales(Point{1, -1}, -2, 10.0, 4.0, 0.1);
  CHECK(p.m == 40);
  CHECK(p.m1 == 4);
  CHECK(p.j == -2);
  CHECK_THROWS(BoxParams::from_scales(Point{0, 0}, 1, 1.0, 1.0, 2.0));  // m1 >= m
}

TEST_CASE("cluster and exterior boundary of a singleton") {
  // every edge open (white): the black cluster of {v} is just {v}
  OpenField f = open_field(const_env(0.0), 1.0);
  LatticeBox w(Point{-6, -6}, Point{6, 6});
  ClusterResult r = cluster_and_boundary(f, {Point{0, 0}}, ClusterColor::Black, w);
  CHECK(r.cluster == std::vector<Point>{Point{0, 0}});
  CHECK(r.exterior_boundary.size() == 8);
  CHECK(!r.truncated);
  CHECK_THROWS(cluster_and_boundary(f, {}, ClusterColor::Black, w));
  CHECK_THROWS(cluster_and_boundary(f, {Point{9, 9}}, ClusterColor::Black, w));
}

TEST_CASE("exterior boundary separates the cluster from the window edge") {
  for (int s = 0; s < 30; ++s) {
    Environment env(static_cast<std::uint64_t>(s),
                    DistributionSpec::bernoulli_shift(0, 1, 0.45), 2);
    OpenField f = open_field(env, 0.5);
    LatticeBox w(Point{-8, -8}, Point{8, 8});
    ClusterResult r =
        cluster_and_boundary(f, {Point{0, 0}}, ClusterColor::Black, w);
    if (r.truncated) continue;
    std::set<Point> bdry(r.exterior_boundary.begin(), r.exterior_boundary.end());
    // a straight probe from the seed to the window edge must pass through the
    // boundary set: its tail beyond the last cluster vertex reaches the window
    // edge outside the cluster
    for (int axis = 0; axis < 2; ++axis) {
      for (int dir : {-1, +1}) {
        Point p{0, 0};
        bool crossed = false;
        while (w.contains(p)) {
          if (bdry.count(p)) crossed = true;
          p = p.step(axis, dir);
        }
        CHECK(crossed);
      }
    }
  }
}

TEST_CASE("shell of a vertex in an all-white environment") {
  OpenField f = open_field(const_env(0.0), 1.0);
  LatticeBox w(Point{-10, -10}, Point{10, 10});
  KestenShell s = kesten_shell(f, Point{0, 0}, w);
  CHECK(s.n_v == 0);
  CHECK(s.shell.size() == 8);  // ring around the singleton black cluster
  CHECK(!s.truncated);
}

TEST_CASE("shell radius is small at high open probability") {
  int counts[3] = {0, 0, 0};
  const int reps = 150;
  for (int s = 0; s < reps; ++s) {
    Environment env(static_cast<std::uint64_t>(s),
                    DistributionSpec::bernoulli_shift(0, 1, 0.03), 2);
    OpenField f = open_field(env, 0.5);  // open with probability 0.97
    LatticeBox w(Point{-20, -20}, Point{20, 20});
    KestenShell sh = kesten_shell(f, Point{0, 0}, w);
    counts[std::min(sh.n_v, 2)]++;
  }
  CHECK(counts[0] > counts[1] + counts[2]);
}

TEST_CASE("strict-passage condition extremes") {
  BoxParams params{Point{0, 0}, 12, 1, 2};
  // point mass: passage time grows exactly at the infimum rate, no margin
  CHECK(!check_B1(const_env(1.0), params, 0.1));
  // rare cheap atom: the margin survives
  CHECK(check_B1(sparse_cheap_env(3), params, 0.1));
  CHECK_THROWS(check_B1(const_env(1.0), params, 0.0));
}

TEST_CASE("subsampled strict-passage check never contradicts the full one") {
  BoxParams params{Point{0, 0}, 12, 1, 2};
  int agreements = 0;
  for (int s = 0; s < 50; ++s) {
    Environment env = exp_env(static_cast<std::uint64_t>(s));
    bool full = check_B1(env, params, 0.1, 1000000000);
    bool sub = check_B1(env, params, 0.1, 500);
    if (full) CHECK(sub);  // a subsample can only miss violations
    if (full == sub) ++agreements;
  }
  CHECK(agreements >= 45);
}

TEST_CASE("barrier succeeds in a tame environment") {
  Environment env(7, DistributionSpec::uniform(0.2, 0.9), 2);
  BoxParams params{Point{0, 0}, 40, 1, 5};
  PercConfig cfg;
  cfg.Mbar = 1.0;  // every edge open
  BarrierResult r = good_barrier(env, params, cfg);
  REQUIRE(r.success);
  CHECK(r.failure_clause == 0);
  CHECK(!r.G.empty());
  REQUIRE(r.witnesses.size() == r.G.size());
  REQUIRE(r.witness_times.size() == r.G.size());
  const double tb = cfg.time_budget(2) * params.m1;
  const double lb = cfg.length_budget(2) * params.m1;
  BoxGeometry g = box_geometry(params, cfg.rho);
  for (size_t i = 0; i < r.witnesses.size(); ++i) {
    CHECK(r.witness_times[i] <= tb + 1e-9);
    CHECK(static_cast<double>(r.witnesses[i].length()) <= lb + 1e-9);
    CHECK(r.witnesses[i].vertices.front() == r.G[i]);
    // connector ends on the scaffold at the inner-box boundary
    const Point& end = r.witnesses[i].vertices.back();
    CHECK(g.Bcheck_plus.on_boundary(end));
    CHECK(std::find(g.C.begin(), g.C.end(), end) != g.C.end());
    // recompute the witness time independently
    double t = 0;
    for (size_t k = 0; k + 1 < r.witnesses[i].vertices.size(); ++k)
      t += env.weight(make_edge(r.witnesses[i].vertices[k],
                                r.witnesses[i].vertices[k + 1]));
    CHECK(t == doctest::Approx(r.witness_times[i]));
  }
}

TEST_CASE("strict diameter cap trips the barrier") {
  Environment env(7, DistributionSpec::uniform(0.2, 0.9), 2);
  BoxParams params{Point{0, 0}, 40, 1, 5};
  PercConfig cfg;
  cfg.Mbar = 1.0;
  cfg.strict_diameter = true;  // cap m1/10000 is below any nonempty shell
  BarrierResult r = good_barrier(env, params, cfg);
  CHECK(!r.success);
  CHECK(r.failure_clause == 1);
  CHECK(r.offending.has_value());
}

TEST_CASE("blackness is the conjunction of its two clauses") {
  BoxParams params{Point{0, 0}, 40, 1, 5};
  PercConfig cfg;
  cfg.Mbar = 3.0;
  Environment tame = sparse_cheap_env(7);
  CHECK(check_B1(tame, params, cfg.delta));
  CHECK(good_barrier(tame, params, cfg).success);
  CHECK(is_black(tame, params, cfg));
  // break the strict-passage clause only
  Environment flat = const_env(0.5);
  CHECK(!check_B1(flat, params, cfg.delta));
  CHECK(!is_black(flat, params, cfg));
}

TEST_CASE("geodesic edge inspection inside a box") {
  BoxParams params{Point{0, 0}, 8, 1, 2};
  BoxGeometry g = box_geometry(params, 1);
  for (int s = 0; s < 20; ++s) {
    Environment e2 = exp_env(static_cast<std::uint64_t>(600 + s));
    auto r2 = shortest_passage(e2, Point{0, 0}, Point{10, 4});
    // independent re-scan of the geodesic edges
    bool direct = false;
    for (const EdgeId& ed : r2.geodesic.edges()) {
      if (g.Bj.contains(ed.base) && g.Bj.contains(ed.other()) &&
          e2.weight(ed) >= 1.5)
        direct = true;
    }
    CHECK(is_x_good(e2, r2.geodesic, params, 1.5) == direct);
    // an explicit range behaves like a band filter
    bool banded = false;
    for (const EdgeId& ed : r2.geodesic.edges()) {
      double wv = e2.weight(ed);
      if (g.Bj.contains(ed.base) && g.Bj.contains(ed.other()) && wv >= 0.5 &&
          wv <= 2.0)
        banded = true;
    }
    CHECK(is_x_good(e2, r2.geodesic, params, 0.0, std::make_pair(0.5, 2.0)) ==
          banded);
  }
}

TEST_CASE("weight-pattern predicates on the scaffold") {
  BoxParams params{Point{0, 0}, 30, 1, 4};
  BoxGeometry g = box_geometry(params, 2);
  REQUIRE(!g.degenerate);
  const double M = 5.0, gamma = 2.0, c = 0.1;

  // construct an environment satisfying every clause
  Environment env = const_env(0.05);
  for (const EdgeId& e : g.Ctilde) env.overrides[e] = 0.05;
  for (const EdgeId& e : g.Etilde2) env.overrides[e] = M + 1;
  for (const EdgeId& e : g.Etilde1) env.overrides[e] = M + 1;
  CHECK(check_Q(env, params, 2, c, gamma, M, QVariant::Q));

  // one boundary-exit edge above gamma*M breaks the band clause
  Environment bad = env;
  REQUIRE(!g.Etilde1.empty());
  bad.overrides[g.Etilde1.front()] = gamma * M + 1;
  CHECK(!check_Q(bad, params, 2, c, gamma, M, QVariant::Q));

  // a cheap-core edge above r + c breaks the last clause
  std::set<EdgeId> etilde(g.Etilde1.begin(), g.Etilde1.end());
  etilde.insert(g.Etilde2.begin(), g.Etilde2.end());
  Environment core = env;
  for (const EdgeId& e : g.Ctilde) {
    if (!etilde.count(e)) {
      core.overrides[e] = 1.0;  // above 0.05 + c
      break;
    }
  }
  CHECK(!check_Q(core, params, 2, c, gamma, M, QVariant::Q));

  // the banded variant puts every exit edge in one geometric window
  Environment band = const_env(0.05);
  for (const EdgeId& e : g.Ctilde) band.overrides[e] = 0.05;
  for (const EdgeId& e : g.Etilde1) band.overrides[e] = 2.5 * M;
  for (const EdgeId& e : g.Etilde2) band.overrides[e] = 2.5 * M;
  CHECK(check_Q(band, params, 2, c, gamma, M, QVariant::Qtilde, 1));
  CHECK(!check_Q(band, params, 2, c, gamma, M, QVariant::Qtilde, 0));
  CHECK_THROWS(check_Q(band, params, 2, c, 1.0, M, QVariant::Q));
}

TEST_CASE("resampled pattern probability matches the independent product") {
  BoxParams params{Point{0, 0}, 20, 1, 3};
  BoxGeometry g = box_geometry(params, 2);
  REQUIRE(!g.degenerate);
  // rare cheap atom; huge gamma and c neutralize the band upper limits, so
  // the event factorizes into one clause per exit edge
  auto dist = DistributionSpec::make_atoms({{0.05, 0.005}, {1.0, 0.995}});
  const double M = 0.5, gamma = 1e6, c = 1e6;

  std::set<EdgeId> e1(g.Etilde1.begin(), g.Etilde1.end());
  std::set<EdgeId> e2(g.Etilde2.begin(), g.Etilde2.end());
  double logp = 0;
  for (size_t i = 0; i < e1.size(); ++i)
    logp += std::log(dist.cdf(gamma * M) - dist.cdf(M) + dist.atom_mass(M));
  for (const EdgeId& e : e2) {
    if (e1.count(e)) continue;
    logp += std::log(dist.tail(M));
  }
  for (const EdgeId& e : g.Ctilde)
    if (!e1.count(e) && !e2.count(e))
      logp += std::log(dist.cdf(dist.infimum() + c));
  const double product = std::exp(logp);
  REQUIRE(product > 0.01);  // the comparison below has statistical power

  std::vector<EdgeId> all(g.Ctilde.begin(), g.Ctilde.end());
  all.insert(all.end(), g.Etilde1.begin(), g.Etilde1.end());
  all.insert(all.end(), g.Etilde2.begin(), g.Etilde2.end());
  Environment base(1, dist, 2);
  int hits = 0;
  const int reps = 10000;
  for (int s = 0; s < reps; ++s) {
    Environment re = resample(base, all, static_cast<std::uint64_t>(s));
    if (check_Q(re, params, 2, c, gamma, M, QVariant::Q)) ++hits;
  }
  double emp = static_cast<double>(hits) / reps;
  double se = std::sqrt(std::max(product * (1 - product), 1e-12) / reps);
  CHECK(std::abs(emp - product) <= 3 * se + 1e-6);
}

TEST_CASE("black cube statistics on a straight path") {
  Environment tame = sparse_cheap_env(7);
  PercConfig cfg;
  cfg.Mbar = 3.0;  // every edge open
  const int m = 40, m1 = 5;
  std::vector<Point> vs;
  for (Coord x = -2; x <= m + 1; ++x) vs.push_back(Point{x, 10});
  PathRec straight(vs);
  BlackCubeStats st = black_cube_stats(tame, straight, m, m1, cfg);
  CHECK(st.visited_black_cubes >= 1);
  CHECK(st.crossed_black_boxes >= 1);
  CHECK(!st.per_box.empty());
  // record consistency: black counters match the per-record flags
  int cubes = 0, crossings = 0;
  for (const BoxVisit& v : st.per_box) {
    if (v.black && v.j == 0) ++cubes;
    if (v.black && v.j != 0) ++crossings;
  }
  CHECK(cubes == st.visited_black_cubes);
  CHECK(crossings == st.crossed_black_boxes);
}
