#include "zkpol/localcalc.hpp"

#include <span>

namespace zkpol {

std::vector<Point> Trail::padded(std::size_t n) const {
  std::vector<Point> out(points.begin(), points.begin() + static_cast<std::ptrdiff_t>(std::min(declared_len, points.size())));
  const Point last = out.empty() ? Point{} : out.back();
  out.resize(n, last);
  return out;
}

}  // namespace zkpol

namespace zkpol::localcalc {

namespace {

i128 abs128(i128 v) { return v < 0 ? -v : v; }

std::span<const Point> real_points(const Trail& trail) {
  return std::span<const Point>(trail.points).first(std::min(trail.declared_len, trail.points.size()));
}

template <typename Inside>
TrailStats stats(const Trail& trail, Inside inside) {
  TrailStats st;
  const auto pts = real_points(trail);
  if (pts.empty()) return st;
  bool prev_in = inside(pts[0]);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const i128 dx = pts[i].x - pts[i - 1].x;
    const i128 dy = pts[i].y - pts[i - 1].y;
    const i128 d = static_cast<i128>(isqrt(static_cast<u128>(dx * dx + dy * dy)));
    const bool in = inside(pts[i]);
    st.tot += d;
    if (prev_in && in) st.inside += d;
    prev_in = in;
  }
  return st;
}

}  // namespace

i128 area_dbl_sgn(i128 a1, i128 b1, i128 a2, i128 b2, i128 a3, i128 b3) {
  return a1 * b2 - a1 * b3 - a2 * b1 + a2 * b3 + a3 * b1 - a3 * b2;
}

i128 area_dbl_sgn(const Triangle& tri) {
  const auto& v = tri.v;
  return area_dbl_sgn(v[0].x, v[0].y, v[1].x, v[1].y, v[2].x, v[2].y);
}

std::size_t find_triangle(Coord x, Coord y, const TriangleSet& tris) {
  for (std::size_t i = 0; i < tris.triangles.size(); ++i) {
    const auto& v = tris.triangles[i].v;
    const i128 a = abs128(area_dbl_sgn(v[0].x, v[0].y, v[1].x, v[1].y, v[2].x, v[2].y));
    const i128 b = abs128(area_dbl_sgn(v[0].x, v[0].y, v[1].x, v[1].y, x, y));
    const i128 c = abs128(area_dbl_sgn(v[0].x, v[0].y, x, y, v[2].x, v[2].y));
    const i128 d = abs128(area_dbl_sgn(x, y, v[1].x, v[1].y, v[2].x, v[2].y));
    if (a == b + c + d) return i + 1;
  }
  return 1;
}

BaryCoords get_bcoords(i128 x, i128 y, i128 a1, i128 b1, i128 a2, i128 b2, i128 a3, i128 b3) {
  const i128 area = area_dbl_sgn(a1, b1, a2, b2, a3, b3);
  if (area == 0) throw Error(ErrorCode::DegenerateTriangle, "triangle has zero area");
  const i128 sgn = area >= 0 ? 1 : -1;
  BaryCoords bc;
  bc.s = sgn * (b1 * a3 - a1 * b3 + (b3 - b1) * x + (a1 - a3) * y);
  bc.t = sgn * (a1 * b2 - b1 * a2 + (b1 - b2) * x + (a2 - a1) * y);
  return bc;
}

BaryCoords get_bcoords(Point p, const Triangle& tri) {
  const auto& v = tri.v;
  return get_bcoords(p.x, p.y, v[0].x, v[0].y, v[1].x, v[1].y, v[2].x, v[2].y);
}

u128 isqrt(u128 v) {
  if (v < 2) return v;
  // Newton iteration from an over-estimate 2^ceil(bits/2).
  u128 x = u128{1} << ((bit_length(v) + 1) / 2);
  while (true) {
    const u128 y = (x + v / x) / 2;
    if (y >= x) break;
    x = y;
  }
  while (x * x > v) --x;
  while ((x + 1) * (x + 1) <= v) ++x;
  return x;
}

bool in_triangle(Point p, const Triangle& tri) {
  const auto& v = tri.v;
  const i128 e1 = area_dbl_sgn(v[0].x, v[0].y, v[1].x, v[1].y, p.x, p.y);
  const i128 e2 = area_dbl_sgn(v[1].x, v[1].y, v[2].x, v[2].y, p.x, p.y);
  const i128 e3 = area_dbl_sgn(v[2].x, v[2].y, v[0].x, v[0].y, p.x, p.y);
  const bool has_neg = e1 < 0 || e2 < 0 || e3 < 0;
  const bool has_pos = e1 > 0 || e2 > 0 || e3 > 0;
  return !(has_neg && has_pos);
}

bool in_any_triangle(Point p, const TriangleSet& tris) {
  for (const Triangle& t : tris.triangles) {
    if (in_triangle(p, t)) return true;
  }
  return false;
}

bool in_any_circle(Point p, const CircleSet& circles) {
  for (const Circle& c : circles.circles) {
    const i128 dx = p.x - c.u;
    const i128 dy = p.y - c.v;
    if (dx * dx + dy * dy <= static_cast<i128>(c.r) * c.r) return true;
  }
  return false;
}

TrailStats ev_stats(const Trail& trail, const CircleSet& circles) {
  return stats(trail, [&](Point p) { return in_any_circle(p, circles); });
}

TrailStats tax_stats(const Trail& trail, const TriangleSet& tris) {
  return stats(trail, [&](Point p) { return in_any_triangle(p, tris); });
}

bool oracle_ev(const Trail& trail, const CircleSet& circles, const SubsidyPolicy& policy) {
  const TrailStats st = ev_stats(trail, circles);
  return st.tot >= policy.d_req && st.tot * policy.p_req <= st.inside * 100;
}

bool oracle_hwtax(const Trail& trail, const TriangleSet& tris, const TaxPolicy& policy) {
  const TrailStats st = tax_stats(trail, tris);
  return st.tot - st.inside <= policy.d_max;
}

}  // namespace zkpol::localcalc
