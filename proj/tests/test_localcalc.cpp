#include <random>

#include "doctest.h"
#include "zkpol/localcalc.hpp"

using namespace zkpol;
using namespace zkpol::localcalc;

namespace {

// Square [0,4]^2 split along its diagonal, plus a detached triangle.
TriangleSet three_triangles() {
  TriangleSet ts;
  ts.triangles.push_back(Triangle{{Point{0, 0}, Point{4, 0}, Point{4, 4}}});
  ts.triangles.push_back(Triangle{{Point{0, 0}, Point{4, 4}, Point{0, 4}}});
  ts.triangles.push_back(Triangle{{Point{10, 10}, Point{14, 10}, Point{10, 14}}});
  return ts;
}

Triangle random_triangle(std::mt19937_64& rng, Coord bound) {
  std::uniform_int_distribution<Coord> c(0, bound - 1);
  while (true) {
    Triangle t{{Point{c(rng), c(rng)}, Point{c(rng), c(rng)}, Point{c(rng), c(rng)}}};
    if (area_dbl_sgn(t) != 0) return t;
  }
}

}  // namespace

TEST_CASE("area_dbl_sgn") {
  CHECK(area_dbl_sgn(0, 0, 1, 0, 0, 1) == 1);
  CHECK(area_dbl_sgn(0, 0, 0, 1, 1, 0) == -1);
  CHECK(area_dbl_sgn(0, 0, 1, 1, 2, 2) == 0);
  CHECK(area_dbl_sgn(0, 0, 2, 0, 0, 2) == 4);
}

TEST_CASE("isqrt") {
  CHECK(isqrt(0) == 0);
  CHECK(isqrt(24) == 4);
  CHECK(isqrt(25) == 5);
  CHECK(isqrt(1) == 1);
  const u128 big = (u128(1) << 126) + 12345;
  const u128 r = isqrt(big);
  CHECK(r * r <= big);
  CHECK((r + 1) * (r + 1) > big);
  for (u128 v = 0; v < 100000; ++v) {
    const u128 d = isqrt(v);
    REQUIRE(d * d <= v);
    REQUIRE((d + 1) * (d + 1) > v);
  }
}

TEST_CASE("find_triangle") {
  const TriangleSet ts = three_triangles();
  CHECK(find_triangle(1, 3, ts) == 2);   // strictly inside triangle 2
  CHECK(find_triangle(3, 1, ts) == 1);
  CHECK(find_triangle(11, 11, ts) == 3);
  CHECK(find_triangle(20, 20, ts) == 1);  // nowhere
  CHECK(find_triangle(2, 2, ts) == 1);    // shared diagonal: first match wins
  CHECK(find_triangle(0, 4, ts) == 2);    // vertex of triangle 2 only
}

TEST_CASE("find_triangle agrees with the sign-of-areas oracle on every lattice point") {
  const TriangleSet ts = three_triangles();
  for (Coord x = -2; x <= 16; ++x) {
    for (Coord y = -2; y <= 16; ++y) {
      const Point p{x, y};
      const std::size_t j = find_triangle(x, y, ts);
      std::size_t first = 0;
      for (std::size_t i = 0; i < ts.triangles.size() && first == 0; ++i) {
        if (in_triangle(p, ts.triangles[i])) first = i + 1;
      }
      if (first == 0) {
        CHECK(j == 1);
        CHECK_FALSE(in_any_triangle(p, ts));
      } else {
        CHECK(j == first);
      }
    }
  }
}

TEST_CASE("get_bcoords hand-evaluated examples") {
  // Triangle (0,0),(3,0),(0,3) has doubled area 9.
  CHECK(get_bcoords(1, 1, 0, 0, 3, 0, 0, 3) == BaryCoords{3, 3});
  CHECK(get_bcoords(0, 0, 0, 0, 3, 0, 0, 3) == BaryCoords{0, 0});
  CHECK(get_bcoords(3, 3, 0, 0, 3, 0, 0, 3) == BaryCoords{9, 9});  // u = 9 - 18 = -9
  // Clockwise listing flips the sign back to positive coordinates.
  CHECK(get_bcoords(1, 1, 0, 0, 0, 3, 3, 0) == BaryCoords{3, 3});
  CHECK_THROWS_AS(get_bcoords(1, 1, 0, 0, 1, 1, 2, 2), Error);
}

TEST_CASE("barycentric reconstruction identity and containment") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<Coord> c(0, (1 << 12) - 1);
  for (int i = 0; i < 5000; ++i) {
    const Triangle t = random_triangle(rng, 1 << 12);
    const Point p{c(rng), c(rng)};
    const BaryCoords bc = get_bcoords(p, t);
    const i128 area = area_dbl_sgn(t);
    const i128 a = area < 0 ? -area : area;
    const i128 u = a - bc.s - bc.t;
    const auto& v = t.v;
    REQUIRE(u * v[0].x + bc.s * v[1].x + bc.t * v[2].x == p.x * a);
    REQUIRE(u * v[0].y + bc.s * v[1].y + bc.t * v[2].y == p.y * a);
    REQUIRE((bc.s >= 0 && bc.t >= 0 && u >= 0) == in_triangle(p, t));
  }
}

TEST_CASE("oracle_ev") {
  CircleSet circles{{Circle{0, 0, 20}}};
  SUBCASE("single point, d_req 0") {
    CHECK(oracle_ev(Trail::from_points({{5, 5}}), circles, SubsidyPolicy{0, 80}));
  }
  SUBCASE("straight two-point trail of length 10 inside") {
    CHECK(oracle_ev(Trail::from_points({{0, 0}, {6, 8}}), circles, SubsidyPolicy{10, 100}));
    CHECK_FALSE(oracle_ev(Trail::from_points({{0, 0}, {6, 8}}), circles, SubsidyPolicy{11, 100}));
  }
  SUBCASE("second point outside every circle") {
    CircleSet small{{Circle{0, 0, 5}}};
    CHECK_FALSE(oracle_ev(Trail::from_points({{0, 0}, {6, 8}}), small, SubsidyPolicy{10, 100}));
    CHECK(oracle_ev(Trail::from_points({{0, 0}, {6, 8}}), small, SubsidyPolicy{10, 0}));
  }
  SUBCASE("segment lengths are floored") {
    const auto st = ev_stats(Trail::from_points({{0, 0}, {1, 1}, {2, 2}}), circles);
    CHECK(st.tot == 2);
  }
}

TEST_CASE("oracle_hwtax") {
  TriangleSet ts{{Triangle{{Point{0, 0}, Point{100, 0}, Point{0, 100}}}}};
  CHECK(oracle_hwtax(Trail::from_points({{1, 1}, {10, 1}, {10, 10}}), ts, TaxPolicy{0}));
  const Trail road = Trail::from_points({{50, 49}, {53, 53}});  // second point outside, length 5
  CHECK(tax_stats(road, ts).tot == 5);
  CHECK_FALSE(oracle_hwtax(road, ts, TaxPolicy{4}));
  CHECK(oracle_hwtax(road, ts, TaxPolicy{5}));
}
