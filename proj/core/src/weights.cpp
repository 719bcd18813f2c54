#include "fpp/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "fpp/constants.hpp"
#include "fpp/rng.hpp"

namespace fpp {

namespace {

std::vector<std::pair<double, double>> atom_view(const DistributionSpec& d) {
  if (d.kind == DistributionSpec::Kind::Atoms) return d.atoms;
  // bernoulli_shift
  if (d.a <= d.b) return {{d.a, 1.0 - d.p}, {d.b, d.p}};
  return {{d.b, d.p}, {d.a, 1.0 - d.p}};
}

double parse_num(const std::string& s) {
  size_t pos = 0;
  double v = std::stod(s, &pos);
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  if (pos != s.size()) throw std::invalid_argument("bad number: '" + s + "'");
  return v;
}

}  // namespace

DistributionSpec DistributionSpec::make_atoms(std::vector<std::pair<double, double>> atoms) {
  DistributionSpec d;
  d.kind = Kind::Atoms;
  std::sort(atoms.begin(), atoms.end());
  d.atoms = std::move(atoms);
  d.validate();
  return d;
}

DistributionSpec DistributionSpec::bernoulli_shift(double a, double b, double p) {
  DistributionSpec d;
  d.kind = Kind::BernoulliShift;
  d.a = a;
  d.b = b;
  d.p = p;
  d.validate();
  return d;
}

DistributionSpec DistributionSpec::exponential(double rate) {
  DistributionSpec d;
  d.kind = Kind::Exponential;
  d.rate = rate;
  d.validate();
  return d;
}

DistributionSpec DistributionSpec::pareto(double alpha, double xmin) {
  DistributionSpec d;
  d.kind = Kind::Pareto;
  d.alpha = alpha;
  d.xmin = xmin;
  d.validate();
  return d;
}

DistributionSpec DistributionSpec::uniform(double lo, double hi) {
  DistributionSpec d;
  d.kind = Kind::Uniform;
  d.lo = lo;
  d.hi = hi;
  d.validate();
  return d;
}

void DistributionSpec::validate() const {
  switch (kind) {
    case Kind::Atoms: {
      if (atoms.empty()) throw std::invalid_argument("atoms: empty support");
      double total = 0;
      for (auto& [v, q] : atoms) {
        if (v < 0) throw std::invalid_argument("atoms: negative support value");
        if (q < 0) throw std::invalid_argument("atoms: negative probability");
        total += q;
      }
      if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("atoms: probabilities do not sum to 1");
      break;
    }
    case Kind::BernoulliShift:
      if (a < 0 || b < 0) throw std::invalid_argument("bernoulli: negative support");
      if (p < 0 || p > 1) throw std::invalid_argument("bernoulli: p outside [0,1]");
      break;
    case Kind::Exponential:
      if (rate <= 0) throw std::invalid_argument("exponential: rate must be positive");
      break;
    case Kind::Pareto:
      if (alpha <= 0 || xmin <= 0) throw std::invalid_argument("pareto: parameters must be positive");
      break;
    case Kind::Uniform:
      if (lo < 0 || hi < lo) throw std::invalid_argument("uniform: need 0 <= lo <= hi");
      break;
  }
}

DistributionSpec DistributionSpec::parse(const std::string& text) {
  auto open = text.find('(');
  auto close = text.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open)
    throw std::invalid_argument("distribution: expected name(args): '" + text + "'");
  std::string name = text.substr(0, open);
  std::string args = text.substr(open + 1, close - open - 1);
  // trim
  auto trim = [](std::string s) {
    size_t b = s.find_first_not_of(" \t");
    size_t e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  name = trim(name);
  if (name == "atoms") {
    std::vector<std::pair<double, double>> atoms;
    std::stringstream ss(args);
    std::string part;
    while (std::getline(ss, part, ';')) {
      part = trim(part);
      if (part.empty()) continue;
      if (part.front() != '(' || part.back() != ')')
        throw std::invalid_argument("atoms: expected (value,prob): '" + part + "'");
      std::string inner = part.substr(1, part.size() - 2);
      auto comma = inner.find(',');
      if (comma == std::string::npos)
        throw std::invalid_argument("atoms: expected (value,prob): '" + part + "'");
      atoms.emplace_back(parse_num(trim(inner.substr(0, comma))),
                         parse_num(trim(inner.substr(comma + 1))));
    }
    return make_atoms(std::move(atoms));
  }
  std::vector<double> nums;
  std::stringstream ss(args);
  std::string part;
  while (std::getline(ss, part, ',')) nums.push_back(parse_num(trim(part)));
  auto need = [&](size_t n) {
    if (nums.size() != n)
      throw std::invalid_argument("distribution '" + name + "': expected " +
                                  std::to_string(n) + " arguments");
  };
  if (name == "exponential") {
    need(1);
    return exponential(nums[0]);
  }
  if (name == "pareto") {
    need(2);
    return pareto(nums[0], nums[1]);
  }
  if (name == "uniform") {
    need(2);
    return uniform(nums[0], nums[1]);
  }
  if (name == "bernoulli") {
    need(3);
    return bernoulli_shift(nums[0], nums[1], nums[2]);
  }
  throw std::invalid_argument("unknown distribution '" + name + "'");
}

std::string DistributionSpec::to_string() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case Kind::Atoms: {
      os << "atoms(";
      for (size_t i = 0; i < atoms.size(); ++i) {
        if (i) os << ';';
        os << '(' << atoms[i].first << ',' << atoms[i].second << ')';
      }
      os << ')';
      break;
    }
    case Kind::BernoulliShift:
      os << "bernoulli(" << a << ',' << b << ',' << p << ')';
      break;
    case Kind::Exponential:
      os << "exponential(" << rate << ')';
      break;
    case Kind::Pareto:
      os << "pareto(" << alpha << ',' << xmin << ')';
      break;
    case Kind::Uniform:
      os << "uniform(" << lo << ',' << hi << ')';
      break;
  }
  return os.str();
}

bool DistributionSpec::continuous() const {
  return kind == Kind::Exponential || kind == Kind::Pareto ||
         (kind == Kind::Uniform && hi > lo);
}

double DistributionSpec::infimum() const {
  switch (kind) {
    case Kind::Atoms: {
      for (auto& [v, q] : atoms)
        if (q > 0) return v;
      return atoms.front().first;
    }
    case Kind::BernoulliShift:
      if (p >= 1.0) return b;
      if (p <= 0.0) return a;
      return std::min(a, b);
    case Kind::Exponential: return 0.0;
    case Kind::Pareto: return xmin;
    case Kind::Uniform: return lo;
  }
  return 0.0;
}

double DistributionSpec::cdf(double t) const {
  switch (kind) {
    case Kind::Atoms:
    case Kind::BernoulliShift: {
      double s = 0;
      for (auto& [v, q] : atom_view(*this))
        if (v <= t) s += q;
      return s;
    }
    case Kind::Exponential:
      return t < 0 ? 0.0 : 1.0 - std::exp(-rate * t);
    case Kind::Pareto:
      return t < xmin ? 0.0 : 1.0 - std::pow(xmin / t, alpha);
    case Kind::Uniform:
      if (t < lo) return 0.0;
      if (t >= hi) return 1.0;
      return (t - lo) / (hi - lo);
  }
  return 0.0;
}

double DistributionSpec::tail(double t) const {
  switch (kind) {
    case Kind::Atoms:
    case Kind::BernoulliShift: {
      double s = 0;
      for (auto& [v, q] : atom_view(*this))
        if (v >= t) s += q;
      return s;
    }
    default:
      return 1.0 - cdf(t) + atom_mass(t);
  }
}

double DistributionSpec::atom_mass(double t) const {
  if (kind == Kind::Atoms || kind == Kind::BernoulliShift) {
    double s = 0;
    for (auto& [v, q] : atom_view(*this))
      if (v == t) s += q;
    return s;
  }
  if (kind == Kind::Uniform && hi == lo) return t == lo ? 1.0 : 0.0;
  return 0.0;
}

double DistributionSpec::quantile(double q) const {
  if (q < 0.0 || q > 1.0) throw std::domain_error("quantile: argument outside [0,1]");
  switch (kind) {
    case Kind::Atoms:
    case Kind::BernoulliShift: {
      double cum = 0;
      auto av = atom_view(*this);
      for (auto& [v, mass] : av) {
        cum += mass;
        if (cum >= q) return v;
      }
      return av.back().first;
    }
    case Kind::Exponential:
      return q >= 1.0 ? std::numeric_limits<double>::infinity()
                      : -std::log1p(-q) / rate;
    case Kind::Pareto:
      return q >= 1.0 ? std::numeric_limits<double>::infinity()
                      : xmin * std::pow(1.0 - q, -1.0 / alpha);
    case Kind::Uniform:
      return lo + q * (hi - lo);
  }
  return 0.0;
}

double Environment::weight(const EdgeId& e) const {
  if (!overrides.empty()) {
    auto it = overrides.find(e);
    if (it != overrides.end()) return it->second;
  }
  return dist.quantile(rng::to_unit(rng::hash_edge(seed, e)));
}

Environment Environment::with_override(const EdgeId& e, double w) const {
  Environment env = *this;
  env.overrides[e] = w;
  return env;
}

UsefulCheck check_useful(const DistributionSpec& dist, int d) {
  const double r = dist.infimum();
  const double fr = dist.cdf(r);
  std::optional<double> crit = r == 0.0 ? constants::bond_pc(d) : constants::oriented_pc(d);
  if (!crit)
    throw std::runtime_error("check_useful: constant unavailable for d=" + std::to_string(d));
  return fr < *crit ? UsefulCheck::Ok : UsefulCheck::Violated;
}

int KDependentField::value(const EdgeId& e) const {
  if (k < 1) throw std::invalid_argument("KDependentField: k must be >= 1");
  Point v = edge_vertex(e);
  Point block = v;
  for (int i = 0; i < v.dim(); ++i) {
    Coord x = v[i];
    // floor division by k
    Coord q = x >= 0 ? x / k : -((-x + k - 1) / k);
    block[i] = q;
  }
  double u = rng::to_unit(rng::hash_point(seed, block));
  return u <= p ? 1 : 0;
}

Environment resample(const Environment& env, const std::vector<EdgeId>& edges,
                     std::uint64_t seed2) {
  Environment out = env;
  for (const EdgeId& e : edges)
    out.overrides[e] = env.dist.quantile(rng::to_unit(rng::hash_edge(seed2, e)));
  return out;
}

}  // namespace fpp
