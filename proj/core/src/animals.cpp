#include "fpp/animals.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "fpp/constants.hpp"

namespace fpp {

namespace {

struct NnSearch {
  const AnimalInstance& inst;
  int best = 0;
  std::set<Point> visited;

  explicit NnSearch(const AnimalInstance& i) : inst(i) {}

  void dfs(const Point& at, int depth, int sum) {
    if (depth == inst.n) {
      if (sum > best) best = sum;
      return;
    }
    if (sum + (inst.n - depth) <= best) return;  // cannot beat incumbent
    for (int a = 0; a < inst.d; ++a) {
      for (int dir : {+1, -1}) {
        Point nxt = at.step(a, dir);
        if (visited.count(nxt)) continue;
        EdgeId e = make_edge(at, nxt);
        int x = inst.field(e);
        if (x != 0 && x != 1)
          throw std::invalid_argument("exact_Nn: field values must be 0 or 1");
        visited.insert(nxt);
        dfs(nxt, depth + 1, sum + x);
        visited.erase(nxt);
      }
    }
  }
};

}  // namespace

int exact_Nn(const AnimalInstance& inst, int exact_limit) {
  if (inst.n < 1) throw std::invalid_argument("exact_Nn: n must be >= 1");
  if (inst.n > exact_limit)
    throw std::invalid_argument("exact_Nn: n exceeds the exact-solver limit " +
                                std::to_string(exact_limit));
  if (!inst.field) throw std::invalid_argument("exact_Nn: missing field");
  NnSearch s(inst);
  Point origin(std::vector<Coord>(static_cast<size_t>(inst.d), 0));
  s.visited.insert(origin);
  s.dfs(origin, 0, 0);
  return s.best;
}

double animal_tail_bound(int n, double p, double s, int d, int k,
                         std::optional<double> c3_override) {
  if (n < 1) throw std::invalid_argument("animal_tail_bound: n must be >= 1");
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("animal_tail_bound: p must be in (0,1)");
  if (k < 0) throw std::invalid_argument("animal_tail_bound: k must be >= 0");
  const double c3 = c3_override.value_or(constants::animal_cover_c3(d));
  const double rate = n * std::pow(p, 1.0 / d) / (k + 1);
  const double exponent = -rate * (s / c3 - d * (k + 1) * std::log(3.0));
  if (exponent >= 0.0) return 1.0;  // at or below the vacuous threshold
  return std::exp(exponent);
}

std::pair<double, double> kdep_bernoulli_bounds(int n, double p, int m, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("kdep_bernoulli_bounds: t must be positive");
  if (m < 0) throw std::invalid_argument("kdep_bernoulli_bounds: m must be >= 0");
  if (n < 1) throw std::invalid_argument("kdep_bernoulli_bounds: n must be >= 1");
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("kdep_bernoulli_bounds: p must be in (0,1)");
  auto phi = [](double y) { return (1.0 + y) * std::log1p(y) - y; };
  const double np = static_cast<double>(n) * p;
  double bound_phi =
      std::exp(-(np / ((m + 1) * (1.0 - p))) * phi(4.0 * t / (5.0 * np)));
  double bound_hoeffding = std::exp(-2.0 * t * t / ((m + 1) * static_cast<double>(n)));
  return {std::min(1.0, bound_phi), std::min(1.0, bound_hoeffding)};
}

std::vector<Point> cover_connected(const std::vector<Point>& alpha, int l) {
  if (alpha.empty()) throw std::invalid_argument("cover_connected: empty set");
  const int d = alpha.front().dim();
  Point origin(std::vector<Coord>(static_cast<size_t>(d), 0));
  std::map<Point, int> idx;
  for (size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i].dim() != d)
      throw std::invalid_argument("cover_connected: mixed dimensions");
    idx.emplace(alpha[i], static_cast<int>(i));
  }
  if (!idx.count(origin))
    throw std::invalid_argument("cover_connected: set must contain the origin");
  const int n = static_cast<int>(idx.size());
  if (l < 1 || l > n)
    throw std::invalid_argument("cover_connected: need 1 <= l <= #alpha");

  // BFS spanning tree rooted at 0 (also the connectivity check).
  std::map<Point, std::vector<Point>> children;
  std::set<Point> seen{origin};
  std::vector<Point> queue{origin};
  for (size_t head = 0; head < queue.size(); ++head) {
    Point u = queue[head];
    for (int a = 0; a < d; ++a) {
      for (int dir : {+1, -1}) {
        Point v = u.step(a, dir);
        if (!idx.count(v) || seen.count(v)) continue;
        seen.insert(v);
        children[u].push_back(v);
        queue.push_back(v);
      }
    }
  }
  if (static_cast<int>(seen.size()) != n)
    throw std::invalid_argument("cover_connected: set is not connected");

  // Depth-first closed walk on the tree: 2(n-1) unit steps, returns to 0.
  std::vector<Point> walk;
  std::function<void(const Point&)> tour = [&](const Point& u) {
    walk.push_back(u);
    auto it = children.find(u);
    if (it != children.end()) {
      for (const Point& c : it->second) {
        tour(c);
        walk.push_back(u);
      }
    }
  };
  tour(origin);

  const int r = (2 * n) / l;
  std::vector<Point> out;
  out.reserve(static_cast<size_t>(r + 1));
  for (int i = 0; i <= r; ++i) {
    size_t wi = std::min(static_cast<size_t>(i) * static_cast<size_t>(l),
                         walk.size() - 1);
    Point x = walk[wi];
    for (int a = 0; a < d; ++a) {
      Coord v = x[a];
      x[a] = v >= 0 ? v / l : -((-v + l - 1) / l);  // floor division
    }
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace fpp
