#include "fpp/directed_paths.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace fpp {

long long segment_count_cap(int d) {
  long long pow104 = 1;
  for (int i = 1; i < d; ++i) pow104 *= 104;
  return 1609 + pow104;
}

namespace {

long long coord_dot(const Point& p, int axis0) { return p[axis0]; }

}  // namespace

SegmentDecomposition connect_in_halfspace(const Point& x, const Point& y,
                                          const HalfSpace& H, int m) {
  const int d = x.dim();
  if (d < 2) throw std::invalid_argument("connect_in_halfspace: need d >= 2");
  if (y.dim() != d) throw std::invalid_argument("connect_in_halfspace: dimension mismatch");
  if (m < 1000) throw std::invalid_argument("connect_in_halfspace: need m >= 1000");
  if (H.axis < 1 || H.axis > d)
    throw std::invalid_argument("connect_in_halfspace: half-space axis out of range");
  if (l1_dist(x, y) > m)
    throw std::invalid_argument("connect_in_halfspace: need |x-y|_1 <= m");
  const int L = H.axis - 1;
  if (static_cast<double>(x[L]) < H.c)
    throw std::invalid_argument("connect_in_halfspace: x not on the closed side of H");
  if (!(static_cast<double>(y[L]) > H.c))
    throw std::invalid_argument("connect_in_halfspace: y not strictly beyond H");

  SegmentDecomposition dec;
  dec.y_star = y;
  for (int i = 0; i < d; ++i) {
    Coord diff = x[i] - y[i];
    if (diff % 2 != 0) dec.y_star[i] += 1;  // parity fix
  }
  if (x == dec.y_star) return dec;  // K = 0 extension

  const Point& ys = dec.y_star;
  Point cur = x;
  Point zero(std::vector<Coord>(static_cast<size_t>(d), 0));
  auto emit = [&](long long a, int ai, int si, int aj, int sj) {
    Segment s;
    s.a = a;
    s.v = zero;
    s.v[ai] = si;
    s.v[aj] = sj;
    for (int i = 0; i < d; ++i) cur[i] += a * s.v[i];
    dec.segments.push_back(std::move(s));
  };

  const int A = (L == 0) ? 1 : 0;  // partner axis of the first matching phase
  const long long f = m / 100;
  // zig-zag step: floor(m/800), raised to ceil(m/1000) when the floor would
  // undercut the m/1000 magnitude clause (possible for m < 4000)
  const long long g = std::max<long long>(m / 800, (m + 999) / 1000);
  auto near300 = [&](long long delta) { return std::llabs(delta) * 300 <= m; };

  // ---- phase 1: match coordinates (A, L) ----------------------------------
  if (!near300(cur[A] - ys[A]) || !near300(cur[L] - ys[L])) {
    // approach: bring the A coordinate within m/300 while the L coordinate
    // oscillates upward between +g and +2g above its start
    if (!near300(cur[A] - ys[A])) {
      const int s1 = cur[A] > ys[A] ? -1 : +1;
      emit(g, A, s1, L, +1);
      bool down = false;
      while (!near300(cur[A] - ys[A])) {
        emit(g, A, s1, L, down ? -1 : +1);
        down = !down;
      }
    }
    // then bring the L coordinate within m/300 with horizontal oscillation
    if (!near300(cur[L] - ys[L])) {
      const int sigma = cur[L] > ys[L] ? -1 : +1;
      const int s1 = cur[A] >= ys[A] ? -1 : +1;
      while (!near300(cur[L] - ys[L])) {
        emit(g, A, s1, L, sigma);
        emit(g, A, -s1, L, sigma);
      }
    }
  }
  {
    // six-segment finish; requires both plane offsets within m/300 and of
    // even sum, both guaranteed above
    const long long D1 = cur[A] - ys[A];
    const long long D2 = cur[L] - ys[L];
    const long long c4 = f + (D2 - D1) / 2;
    const long long c6 = f + (D2 + D1) / 2;
    emit(f, A, +1, L, +1);
    emit(f, A, -1, L, +1);
    emit(f, A, +1, L, +1);
    emit(c4, A, +1, L, -1);
    emit(f, A, -1, L, -1);
    emit(c6, A, -1, L, -1);
  }

  // ---- remaining axes, paired with the half-space axis --------------------
  for (int B = 0; B < d; ++B) {
    if (B == A || B == L) continue;
    long long gap = ys[B] - cur[B];  // even
    if (gap == 0) continue;
    const int sB = gap > 0 ? +1 : -1;
    gap = std::llabs(gap);
    const long long w_lo = (m + 999) / 1000;
    const long long w_hi = m / 10;
    if (gap / 2 < w_lo) {
      // too close to finish: step away once to enter the legal window
      emit(f, L, +1, B, -sB);
      emit(f, L, -1, B, -sB);
      gap += 2 * f;
    }
    while (gap / 2 >= w_hi) {
      emit(f, L, +1, B, sB);
      emit(f, L, -1, B, sB);
      gap -= 2 * f;
    }
    const long long a = gap / 2;
    emit(a, L, +1, B, sB);
    emit(a, L, -1, B, sB);
  }

  if (cur != dec.y_star)
    throw std::logic_error("connect_in_halfspace: endpoint mismatch (internal)");
  if (static_cast<long long>(dec.segments.size()) > segment_count_cap(d))
    throw std::logic_error("connect_in_halfspace: segment cap exceeded (internal)");
  return dec;
}

std::string to_string(SegmentClause c) {
  switch (c) {
    case SegmentClause::Pass: return "pass";
    case SegmentClause::VectorForm: return "vector form clause";
    case SegmentClause::Magnitude: return "magnitude clause";
    case SegmentClause::Ball: return "ball clause";
    case SegmentClause::HalfSpaceSide: return "half-space clause";
    case SegmentClause::Endpoint: return "endpoint clause";
    case SegmentClause::TargetShift: return "target shift clause";
    case SegmentClause::Count: return "count clause";
  }
  return "?";
}

SegmentClause verify_segments(const Point& x, const SegmentDecomposition& dec,
                              const Point& y, const HalfSpace& H, int m) {
  const int d = x.dim();
  const int L = H.axis - 1;
  // target shift: |y - y*|_inf <= 1, strictly beyond H, even displacement
  if (linf_dist(y, dec.y_star) > 1) return SegmentClause::TargetShift;
  if (!(static_cast<double>(dec.y_star[L]) > H.c)) return SegmentClause::TargetShift;
  for (int i = 0; i < d; ++i)
    if ((dec.y_star[i] - x[i]) % 2 != 0) return SegmentClause::TargetShift;
  if (static_cast<long long>(dec.segments.size()) > segment_count_cap(d))
    return SegmentClause::Count;

  Point pos = x;
  for (const Segment& s : dec.segments) {
    if (s.v.dim() != d) return SegmentClause::VectorForm;
    int nonzero = 0;
    for (int i = 0; i < d; ++i) {
      if (s.v[i] == 0) continue;
      if (s.v[i] != 1 && s.v[i] != -1) return SegmentClause::VectorForm;
      ++nonzero;
    }
    if (nonzero != 2) return SegmentClause::VectorForm;
    const long long mag = std::llabs(s.a);
    if (s.a == 0 || 1000 * mag < m || 10 * mag > m) return SegmentClause::Magnitude;
    for (int i = 0; i < d; ++i) pos[i] += s.a * s.v[i];
    if (linf_dist(pos, y) > 2 * static_cast<Coord>(m)) return SegmentClause::Ball;
    if (!(static_cast<double>(coord_dot(pos, L)) > H.c))
      return SegmentClause::HalfSpaceSide;
  }
  if (pos != dec.y_star) return SegmentClause::Endpoint;
  return SegmentClause::Pass;
}

}  // namespace fpp
