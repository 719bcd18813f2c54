#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "fpp/constants.hpp"
#include "fpp/lattice.hpp"
#include "fpp/rng.hpp"

using namespace fpp;

TEST_CASE("point arithmetic and norms") {
  Point a{3, -4}, b{1, 1};
  CHECK(a.l1() == 7);
  CHECK(a.linf() == 4);
  CHECK((a + b) == Point{4, -3});
  CHECK((a - b) == Point{2, -5});
  CHECK(l1_dist(a, b) == 7);
  CHECK(linf_dist(a, b) == 5);
  CHECK(a.step(1, +1) == Point{3, -3});
}

TEST_CASE("edge canonicalization") {
  Point u{2, 5}, v{2, 6};
  EdgeId e = make_edge(u, v);
  CHECK(e.base == u);
  CHECK(e.axis == 2);
  CHECK(make_edge(v, u) == e);
  CHECK(e.other() == v);
  CHECK_THROWS(make_edge(u, Point{3, 6}));        // diagonal
  CHECK_THROWS(make_edge(u, u));                  // equal
  CHECK_THROWS(make_edge(u, Point{2, 8}));        // distance 2
}

TEST_CASE("edge_vertex is the smaller-l1 endpoint") {
  CHECK(edge_vertex(EdgeId{Point{0, 0}, 1}) == Point{0, 0});
  CHECK(edge_vertex(EdgeId{Point{-1, 0}, 1}) == Point{0, 0});
  CHECK(edge_vertex(EdgeId{Point{2, -3}, 2}) == Point{2, -2});
}

TEST_CASE("lattice box basics") {
  LatticeBox b(Point{0, 0}, Point{3, 2});
  CHECK(b.vertex_count() == 12);
  CHECK(b.side(0) == 4);
  CHECK(b.contains(Point{3, 2}));
  CHECK(!b.contains(Point{4, 2}));
  CHECK(b.on_boundary(Point{0, 1}));
  CHECK(!b.on_boundary(Point{1, 1}));
  LatticeBox h = LatticeBox::hull(Point{2, -1}, Point{0, 5});
  CHECK(h.lo == Point{0, -1});
  CHECK(h.hi == Point{2, 5});
  LatticeBox inf = b.inflated(2);
  CHECK(inf.lo == Point{-2, -2});
  CHECK(inf.hi == Point{5, 4});
}

TEST_CASE("edges_in_box count and ordering") {
  LatticeBox b(Point{0, 0}, Point{3, 3});
  auto es = edges_in_box(b);
  CHECK(es.size() == 24);  // 2 * 4 * 3 per direction
  CHECK(std::is_sorted(es.begin(), es.end()));
  CHECK(std::set<EdgeId>(es.begin(), es.end()).size() == es.size());
}

TEST_CASE("box indexer round-trips") {
  LatticeBox b(Point{-2, 1, 0}, Point{1, 3, 2});
  BoxIndexer ix(b);
  CHECK(ix.count == b.vertex_count());
  for (std::int64_t i = 0; i < ix.count; ++i)
    CHECK(ix.index(ix.point(i)) == i);
}

TEST_CASE("hash determinism and unit mapping") {
  EdgeId e{Point{5, -3}, 2};
  CHECK(rng::hash_edge(42, e) == rng::hash_edge(42, e));
  CHECK(rng::hash_edge(42, e) != rng::hash_edge(43, e));
  for (std::uint64_t i = 0; i < 1000; ++i) {
    double u = rng::to_unit(rng::hash_counter(7, i));
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("hash avalanche sanity") {
  // flipping one input bit should flip about half of the 64 output bits
  double total = 0;
  int trials = 0;
  for (std::uint64_t s = 1; s <= 200; ++s) {
    for (int bit = 0; bit < 64; bit += 7) {
      std::uint64_t a = rng::mix64(s);
      std::uint64_t b = rng::mix64(s ^ (1ull << bit));
      total += __builtin_popcountll(a ^ b);
      ++trials;
    }
  }
  double mean = total / trials;
  CHECK(mean > 28.0);
  CHECK(mean < 36.0);
}

TEST_CASE("shipped constants") {
  CHECK(constants::bond_pc(2).value() == doctest::Approx(0.5));
  CHECK(constants::bond_pc(3).value() == doctest::Approx(0.2488126));
  CHECK(!constants::bond_pc(7).has_value());
  CHECK(constants::oriented_pc(2).value() == doctest::Approx(0.6447));
  CHECK(constants::animal_cover_c3(2) == doctest::Approx(10 * 2 * 81));
  CHECK(constants::barrier_segment_cap(2) ==
        doctest::Approx(13 * (1609 + 104) + 10));
  CHECK(constants::table_hash() == constants::table_hash());
}
