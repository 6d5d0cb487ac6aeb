#pragma once

#include <cstddef>

#include "zkpol/field.hpp"
#include "zkpol/geometry.hpp"

// Computations the Prover performs outside the circuit, and the plaintext
// oracles that statement circuits are cross-checked against. Everything here
// is exact integer arithmetic.
namespace zkpol::localcalc {

/// Unnormalized barycentric coordinates; u = A - s - t is implied.
struct BaryCoords {
  i128 s = 0;
  i128 t = 0;
  friend bool operator==(const BaryCoords&, const BaryCoords&) = default;
};

/// det [[a1 a2 a3] [b1 b2 b3] [1 1 1]]; positive for counterclockwise vertices.
i128 area_dbl_sgn(i128 a1, i128 b1, i128 a2, i128 b2, i128 a3, i128 b3);
i128 area_dbl_sgn(const Triangle& tri);

/// 1-based index of the first triangle containing (x, y), or 1 if none does.
/// Containment uses the area-sum test |T| == |pv2v3| + |v1pv3| + |v1v2p|.
std::size_t find_triangle(Coord x, Coord y, const TriangleSet& tris);

/// Vertex-approach formulas with orientation correction. Throws DegenerateTriangle.
BaryCoords get_bcoords(i128 x, i128 y, i128 a1, i128 b1, i128 a2, i128 b2, i128 a3, i128 b3);
BaryCoords get_bcoords(Point p, const Triangle& tri);

/// floor(sqrt(v)).
u128 isqrt(u128 v);

/// Inside-or-on test via the signs of the three edge areas. Independent of
/// both find_triangle and get_bcoords.
bool in_triangle(Point p, const Triangle& tri);
bool in_any_triangle(Point p, const TriangleSet& tris);
bool in_any_circle(Point p, const CircleSet& circles);

/// Segment lengths floor(|p_i - p_{i-1}|) summed over the trail.
struct TrailStats {
  i128 tot = 0;
  i128 inside = 0;  // segments with both endpoints inside the region
};
TrailStats ev_stats(const Trail& trail, const CircleSet& circles);
TrailStats tax_stats(const Trail& trail, const TriangleSet& tris);

/// tot >= d_req and tot * P_req <= cc * 100.
bool oracle_ev(const Trail& trail, const CircleSet& circles, const SubsidyPolicy& policy);
/// tot - hw <= d_max, hw counting segments with both endpoints inside triangles.
bool oracle_hwtax(const Trail& trail, const TriangleSet& tris, const TaxPolicy& policy);

}  // namespace zkpol::localcalc
