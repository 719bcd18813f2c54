#include "fpp/empirical.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "fpp/rng.hpp"

namespace fpp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool piece_empty(const IntervalSet::Piece& p) {
  if (p.lo > p.hi) return true;
  if (p.lo == p.hi) return !(p.lo_closed && p.hi_closed);
  return false;
}

}  // namespace

IntervalSet IntervalSet::interval(double lo, double hi, bool lo_closed, bool hi_closed) {
  if (std::isnan(lo) || std::isnan(hi))
    throw std::invalid_argument("IntervalSet: NaN endpoint");
  IntervalSet s;
  Piece p{lo, hi, lo_closed, hi_closed};
  if (!piece_empty(p)) s.pieces.push_back(p);
  s.normalize();
  return s;
}

IntervalSet IntervalSet::atom(double v) { return interval(v, v, true, true); }

IntervalSet IntervalSet::everything() { return interval(0.0, kInf, true, false); }

void IntervalSet::normalize() {
  std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) {
    if (a.lo != b.lo) return a.lo < b.lo;
    return a.lo_closed && !b.lo_closed;
  });
  std::vector<Piece> out;
  for (const Piece& p : pieces) {
    if (piece_empty(p)) continue;
    if (!out.empty()) {
      Piece& q = out.back();
      // merge when p starts inside q or exactly abuts it
      bool overlaps = p.lo < q.hi || (p.lo == q.hi && (p.lo_closed || q.hi_closed));
      if (overlaps) {
        if (p.hi > q.hi) {
          q.hi = p.hi;
          q.hi_closed = p.hi_closed;
        } else if (p.hi == q.hi) {
          q.hi_closed = q.hi_closed || p.hi_closed;
        }
        continue;
      }
    }
    out.push_back(p);
  }
  pieces = std::move(out);
}

IntervalSet IntervalSet::unite(const IntervalSet& other) const {
  IntervalSet s = *this;
  s.pieces.insert(s.pieces.end(), other.pieces.begin(), other.pieces.end());
  s.normalize();
  return s;
}

bool IntervalSet::contains(double t) const {
  for (const Piece& p : pieces) {
    if (t < p.lo || (t == p.lo && !p.lo_closed)) continue;
    if (t > p.hi || (t == p.hi && !p.hi_closed)) continue;
    return true;
  }
  return false;
}

double IntervalSet::mass(const DistributionSpec& dist) const {
  double s = 0.0;
  for (const Piece& p : pieces) {
    double hi_mass = std::isinf(p.hi)
                         ? 1.0
                         : (p.hi_closed ? dist.cdf(p.hi)
                                        : dist.cdf(p.hi) - dist.atom_mass(p.hi));
    double lo_mass = p.lo_closed ? dist.cdf(p.lo) - dist.atom_mass(p.lo) : dist.cdf(p.lo);
    s += std::max(0.0, hi_mass - lo_mass);
  }
  return std::min(1.0, s);
}

namespace {

std::string trimmed(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  size_t e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

double parse_endpoint(const std::string& s) {
  std::string t = trimmed(s);
  if (t == "inf" || t == "+inf" || t == "\xE2\x88\x9E") return kInf;
  size_t pos = 0;
  double v;
  try {
    v = std::stod(t, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("interval set: bad number '" + t + "'");
  }
  if (pos != t.size()) throw std::invalid_argument("interval set: bad number '" + t + "'");
  return v;
}

}  // namespace

IntervalSet IntervalSet::parse(const std::string& text) {
  // split on "∪" (UTF-8 E2 88 AA) or a standalone ASCII 'U'/'u'
  std::vector<std::string> parts;
  std::string cur;
  for (size_t i = 0; i < text.size();) {
    if (text.compare(i, 3, "\xE2\x88\xAA") == 0) {
      parts.push_back(cur);
      cur.clear();
      i += 3;
    } else if ((text[i] == 'U' || text[i] == 'u') &&
               (i == 0 || std::isspace(static_cast<unsigned char>(text[i - 1]))) &&
               (i + 1 == text.size() || std::isspace(static_cast<unsigned char>(text[i + 1])))) {
      parts.push_back(cur);
      cur.clear();
      ++i;
    } else {
      cur.push_back(text[i]);
      ++i;
    }
  }
  parts.push_back(cur);

  IntervalSet out;
  for (std::string& raw : parts) {
    std::string p = trimmed(raw);
    if (p.empty()) throw std::invalid_argument("interval set: empty piece in '" + text + "'");
    if (p.front() == '{') {
      if (p.back() != '}')
        throw std::invalid_argument("interval set: unterminated atom '" + p + "'");
      out = out.unite(atom(parse_endpoint(p.substr(1, p.size() - 2))));
      continue;
    }
    if ((p.front() != '[' && p.front() != '(') || (p.back() != ']' && p.back() != ')'))
      throw std::invalid_argument("interval set: expected bracketed interval, got '" + p + "'");
    std::string inner = p.substr(1, p.size() - 2);
    size_t comma = inner.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("interval set: missing comma in '" + p + "'");
    double lo = parse_endpoint(inner.substr(0, comma));
    double hi = parse_endpoint(inner.substr(comma + 1));
    if (lo > hi)
      throw std::invalid_argument("interval set: inverted interval '" + p + "'");
    out = out.unite(interval(lo, hi, p.front() == '[', p.back() == ']'));
  }
  return out;
}

std::string IntervalSet::to_string() const {
  if (pieces.empty()) return "{}";
  std::ostringstream os;
  os.precision(17);
  for (size_t i = 0; i < pieces.size(); ++i) {
    const Piece& p = pieces[i];
    if (i) os << " U ";
    if (p.lo == p.hi) {
      os << '{' << p.lo << '}';
      continue;
    }
    os << (p.lo_closed ? '[' : '(') << p.lo << ',';
    if (std::isinf(p.hi))
      os << "inf";
    else
      os << p.hi;
    os << (p.hi_closed ? ']' : ')');
  }
  return os.str();
}

namespace {

// Retained edge weights of p after dropping `drop` edges from each end.
std::vector<double> retained_weights(const Environment& env, const PathRec& p,
                                     std::size_t drop) {
  const size_t len = p.length();
  if (len < 1) throw std::invalid_argument("measure: path must have at least one edge");
  if (drop > 0 && len <= 2 * drop)
    throw std::invalid_argument("measure: path too short for requested truncation");
  std::vector<double> w;
  w.reserve(len - 2 * drop);
  for (size_t i = drop; i < len - drop; ++i)
    w.push_back(env.weight(make_edge(p.vertices[i], p.vertices[i + 1])));
  return w;
}

// Drop count implied by the truncation level k in dimension d: (2k)^d.
std::size_t truncation_drop(int d, int k) {
  if (k < 1) throw std::invalid_argument("measure: trunc_k must be >= 1");
  double dd = std::pow(2.0 * k, d);
  if (dd > 1e18) throw std::invalid_argument("measure: truncation count overflows");
  return static_cast<std::size_t>(dd);
}

}  // namespace

double measure_dropped(const Environment& env, const PathRec& p,
                       const IntervalSet& B, std::size_t drop) {
  std::vector<double> w = retained_weights(env, p, drop);
  size_t hits = 0;
  for (double t : w)
    if (B.contains(t)) ++hits;
  return static_cast<double>(hits) / static_cast<double>(w.size());
}

double moment_dropped(const Environment& env, const PathRec& p, int ell,
                      std::size_t drop) {
  if (ell < 1) throw std::invalid_argument("moment: ell must be >= 1");
  std::vector<double> w = retained_weights(env, p, drop);
  double s = 0.0;
  for (double t : w) s += std::pow(t, ell);
  return s / static_cast<double>(w.size());
}

double measure(const Environment& env, const PathRec& p, const IntervalSet& B,
               std::optional<int> trunc_k) {
  return measure_dropped(env, p, B, trunc_k ? truncation_drop(env.d, *trunc_k) : 0);
}

double moment(const Environment& env, const PathRec& p, int ell,
              std::optional<int> trunc_k) {
  return moment_dropped(env, p, ell, trunc_k ? truncation_drop(env.d, *trunc_k) : 0);
}

std::pair<double, double> mean_stderr(const std::vector<double>& values) {
  const size_t n = values.size();
  if (n == 0) return {std::numeric_limits<double>::quiet_NaN(),
                      std::numeric_limits<double>::quiet_NaN()};
  double s = 0.0;
  for (double v : values) s += v;
  double mean = s / static_cast<double>(n);
  if (n < 2) return {mean, std::numeric_limits<double>::quiet_NaN()};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  double var = ss / static_cast<double>(n - 1);
  return {mean, std::sqrt(var / static_cast<double>(n))};
}

McResult mc_mean(const std::function<double(std::uint64_t)>& sampler,
                 std::size_t replicas, std::uint64_t master_seed, int workers) {
  if (replicas < 2) throw std::invalid_argument("mc_mean: need at least 2 replicas");
  if (workers < 1) workers = 1;
  std::vector<double> raw(replicas, 0.0);
  std::vector<char> ok(replicas, 0);
  auto body = [&](std::size_t i) {
    std::uint64_t seed_i = rng::hash_counter(master_seed, static_cast<std::uint64_t>(i));
    try {
      raw[i] = sampler(seed_i);
      ok[i] = 1;
    } catch (const std::exception&) {
      ok[i] = 0;
    }
  };
  if (workers == 1 || replicas < 2 * static_cast<size_t>(workers)) {
    for (std::size_t i = 0; i < replicas; ++i) body(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (;;) {
          std::size_t i = next.fetch_add(1);
          if (i >= replicas) return;
          body(i);
        }
      });
    for (auto& t : pool) t.join();
  }
  McResult res;
  for (std::size_t i = 0; i < replicas; ++i) {
    if (ok[i])
      res.values.push_back(raw[i]);
    else
      res.failed.push_back(i);
  }
  auto [m, se] = mean_stderr(res.values);
  res.mean = m;
  res.stderr_ = se;
  return res;
}

}  // namespace fpp
