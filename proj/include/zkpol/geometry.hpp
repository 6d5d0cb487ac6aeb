#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace zkpol {

using Coord = std::int64_t;

struct Point {
  Coord x = 0;
  Coord y = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

struct Circle {
  Coord u = 0;
  Coord v = 0;
  Coord r = 0;
  friend bool operator==(const Circle&, const Circle&) = default;
};

struct Triangle {
  std::array<Point, 3> v;
  friend bool operator==(const Triangle&, const Triangle&) = default;
};

/// Axis-aligned box, inclusive on all edges.
struct Rect {
  Coord x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  bool contains(Point p) const noexcept { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
  friend bool operator==(const Rect&, const Rect&) = default;
};

/// A coordinate trail. `points` holds either the declared_len real points or
/// an already padded list; padded() repeats the last real point up to n.
struct Trail {
  std::vector<Point> points;
  std::size_t declared_len = 0;

  static Trail from_points(std::vector<Point> pts) {
    Trail t;
    t.declared_len = pts.size();
    t.points = std::move(pts);
    return t;
  }
  std::vector<Point> padded(std::size_t n) const;
  friend bool operator==(const Trail&, const Trail&) = default;
};

struct CircleSet {
  std::vector<Circle> circles;
  friend bool operator==(const CircleSet&, const CircleSet&) = default;
};

struct TriangleSet {
  std::vector<Triangle> triangles;
  friend bool operator==(const TriangleSet&, const TriangleSet&) = default;
};

struct SubsidyPolicy {
  Coord d_req = 0;
  Coord p_req = 0;  // percent, 0..100
  friend bool operator==(const SubsidyPolicy&, const SubsidyPolicy&) = default;
};

struct TaxPolicy {
  Coord d_max = 0;
  friend bool operator==(const TaxPolicy&, const TaxPolicy&) = default;
};

}  // namespace zkpol
