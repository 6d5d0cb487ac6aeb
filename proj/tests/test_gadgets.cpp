#include <random>

#include "doctest.h"
#include "zkpol/gadgets.hpp"
#include "zkpol/localcalc.hpp"

using namespace zkpol;
using namespace zkpol::gadgets;

namespace {

const Field kField;

Wire prover(ConstraintSystem& cs, i128 v) { return cs.input(cs.field().from_signed(v), Domain::ProverOnly); }
Wire shared(ConstraintSystem& cs, i128 v) { return cs.input(cs.field().from_signed(v), Domain::Shared); }

bool sat(ConstraintSystem& cs) { return cs.evaluate_and_check().satisfied; }

struct TriangleWires {
  std::array<Wire, 3> a, b;
};

TriangleWires wire_triangle(ConstraintSystem& cs, const Triangle& t) {
  TriangleWires w;
  for (int i = 0; i < 3; ++i) {
    w.a[i] = shared(cs, t.v[i].x);
    w.b[i] = shared(cs, t.v[i].y);
  }
  return w;
}

}  // namespace

TEST_CASE("assert_boolean") {
  for (int v : {0, 1}) {
    ConstraintSystem cs{kField};
    assert_boolean(cs, prover(cs, v));
    CHECK(sat(cs));
  }
  ConstraintSystem cs{kField};
  assert_boolean(cs, prover(cs, 2));
  CHECK_FALSE(sat(cs));
}

TEST_CASE("decompose_bits") {
  SUBCASE("5 over 3 bits") {
    ConstraintSystem cs{kField};
    const auto bv = decompose_bits(cs, prover(cs, 5), 3);
    REQUIRE(bv.bits.size() == 3);
    CHECK(cs.value(bv.bits[0]) == kField.one());
    CHECK(cs.value(bv.bits[1]) == kField.zero());
    CHECK(cs.value(bv.bits[2]) == kField.one());
    CHECK(sat(cs));
  }
  SUBCASE("0 over 4 bits") {
    ConstraintSystem cs{kField};
    const auto bv = decompose_bits(cs, prover(cs, 0), 4);
    for (Wire b : bv.bits) CHECK(cs.value(b) == kField.zero());
    CHECK(sat(cs));
  }
  SUBCASE("2^k does not fit in k bits") {
    for (unsigned k : {1u, 5u, 24u, 60u}) {
      ConstraintSystem cs{kField};
      decompose_bits(cs, prover(cs, i128(1) << k), k);
      CHECK_FALSE(sat(cs));
    }
  }
  SUBCASE("tampering with a bit breaks recomposition") {
    ConstraintSystem cs{kField};
    const auto bv = decompose_bits(cs, prover(cs, 6), 3);
    CHECK(sat(cs));
    cs.set_input(bv.bits[0], kField.one());
    CHECK_FALSE(sat(cs));
  }
}

TEST_CASE("leq and assert_leq examples") {
  auto leq_value = [](i128 a, i128 b, unsigned k) {
    ConstraintSystem cs{kField};
    const Wire r = leq(cs, prover(cs, a), prover(cs, b), k);
    REQUIRE(sat(cs));
    return cs.value(r).value;
  };
  CHECK(leq_value(3, 5, 4) == 1);
  CHECK(leq_value(5, 3, 4) == 0);
  CHECK(leq_value(7, 7, 4) == 1);

  auto assert_sat = [](i128 a, i128 b) {
    ConstraintSystem cs{kField};
    assert_leq(cs, prover(cs, a), prover(cs, b), 8);
    return sat(cs);
  };
  CHECK(assert_sat(0, 0));
  CHECK(assert_sat(10, 12));
  CHECK_FALSE(assert_sat(12, 10));
}

TEST_CASE("leq agrees with integer comparison on random in-range pairs") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10000; ++i) {
    const unsigned k = 1 + rng() % 60;
    const i128 mask = (i128(1) << k) - 1;
    const i128 a = static_cast<i128>(rng()) & mask;
    const i128 b = (rng() % 4 == 0) ? a : static_cast<i128>(rng()) & mask;
    ConstraintSystem cs{kField};
    const Wire r = leq(cs, prover(cs, a), prover(cs, b), k);
    REQUIRE(sat(cs));
    REQUIRE(cs.value(r).value == (a <= b ? 1u : 0u));
  }
}

TEST_CASE("sqrt_floor") {
  SUBCASE("perfect square") {
    ConstraintSystem cs{kField};
    const Wire d = sqrt_floor(cs, prover(cs, 25), 8, SqrtMode::Both);
    CHECK(cs.value(d) == kField.element(5));
    CHECK(sat(cs));
  }
  SUBCASE("rounds down") {
    ConstraintSystem cs{kField};
    const Wire d = sqrt_floor(cs, prover(cs, 24), 8, SqrtMode::Both);
    CHECK(cs.value(d) == kField.element(4));
    CHECK(sat(cs));
  }
  SUBCASE("overstated root is rejected in mode both") {
    ConstraintSystem cs{kField};
    sqrt_floor(cs, prover(cs, 25), 8, SqrtMode::Both, kField.element(6));
    CHECK_FALSE(sat(cs));
  }
  SUBCASE("one-sided modes accept only their side") {
    auto accepts = [](i128 sq, i128 d, SqrtMode mode) {
      ConstraintSystem cs{kField};
      sqrt_floor(cs, prover(cs, sq), 8, mode, kField.from_signed(d));
      return sat(cs);
    };
    CHECK(accepts(30, 3, SqrtMode::LowerOnly));   // understating is allowed
    CHECK_FALSE(accepts(30, 6, SqrtMode::LowerOnly));
    CHECK(accepts(30, 9, SqrtMode::UpperOnly));   // overstating is allowed
    CHECK_FALSE(accepts(30, 4, SqrtMode::UpperOnly));
    CHECK_FALSE(accepts(30, -1, SqrtMode::LowerOnly));  // negative roots fail the range check
    CHECK_FALSE(accepts(30, 256, SqrtMode::UpperOnly));  // as do roots beyond k bits
  }
  SUBCASE("totality on a small sweep") {
    for (i128 v = 0; v < 4096; ++v) {
      ConstraintSystem cs{kField};
      const Wire d = sqrt_floor(cs, prover(cs, v), 6, SqrtMode::Both);
      REQUIRE(sat(cs));
      const i128 r = static_cast<i128>(cs.value(d).value);
      REQUIRE(r * r <= v);
      REQUIRE((r + 1) * (r + 1) > v);
    }
  }
}

TEST_CASE("check_inside examples") {
  const std::vector<Circle> circles{{10, 10, 5}, {100, 100, 20}};
  auto inside = [&](i128 x, i128 y) {
    ConstraintSystem cs{kField};
    std::vector<Wire> u, v, s;
    for (const Circle& c : circles) {
      u.push_back(shared(cs, c.u));
      v.push_back(shared(cs, c.v));
      s.push_back(shared(cs, c.r * c.r));
    }
    const Wire b = check_inside(cs, u, v, s, prover(cs, x), prover(cs, y), 24);
    REQUIRE(sat(cs));
    return cs.value(b).value;
  };
  CHECK(inside(10, 10) == 1);
  CHECK(inside(100, 120) == 1);  // exactly on the boundary
  CHECK(inside(13, 14) == 1);    // 9 + 16 = 25
  CHECK(inside(14, 14) == 0);
  CHECK(inside(50, 50) == 0);
}

TEST_CASE("check_inside agrees with the plaintext circle oracle") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<Coord> coord(0, (1 << 12) - 1);
  for (int trial = 0; trial < 2000; ++trial) {
    CircleSet set;
    const int n = 1 + static_cast<int>(rng() % 8);
    for (int i = 0; i < n; ++i) set.circles.push_back(Circle{coord(rng), coord(rng), 1 + coord(rng) % 600});
    Point p{coord(rng), coord(rng)};
    if (trial % 4 == 0) {
      // Pick a lattice point on or near a circle boundary.
      const Circle& c = set.circles[rng() % set.circles.size()];
      p = Point{c.u + c.r, c.v};
      if (p.x >= (1 << 12)) p.x = c.u - c.r;
      if (p.x < 0) p.x = c.u;
    }
    ConstraintSystem cs{kField};
    std::vector<Wire> u, v, s;
    for (const Circle& c : set.circles) {
      u.push_back(shared(cs, c.u));
      v.push_back(shared(cs, c.v));
      s.push_back(shared(cs, i128(c.r) * c.r));
    }
    const Wire b = check_inside(cs, u, v, s, prover(cs, p.x), prover(cs, p.y), 24);
    REQUIRE(sat(cs));
    REQUIRE((cs.value(b).value == 1) == localcalc::in_any_circle(p, set));
  }
}

TEST_CASE("area_dbl") {
  auto area = [](std::array<Point, 3> v) {
    ConstraintSystem cs{kField};
    const Wire a = area_dbl(cs, shared(cs, v[0].x), shared(cs, v[0].y), shared(cs, v[1].x), shared(cs, v[1].y),
                            shared(cs, v[2].x), shared(cs, v[2].y));
    return kField.to_signed(cs.value(a));
  };
  CHECK(area({Point{0, 0}, Point{1, 0}, Point{0, 1}}) == 1);
  CHECK(area({Point{0, 0}, Point{2, 0}, Point{0, 2}}) == 4);
  CHECK(area({Point{0, 0}, Point{1, 1}, Point{2, 2}}) == 0);
  CHECK(area({Point{0, 0}, Point{0, 1}, Point{1, 0}}) == -1);
}

TEST_CASE("check_inside_triangle hand-evaluated examples") {
  const Triangle tri{{Point{0, 0}, Point{3, 0}, Point{0, 3}}};
  auto run = [&](Point p, localcalc::BaryCoords bc, bool& satisfied) {
    ConstraintSystem cs{kField};
    const auto w = wire_triangle(cs, tri);
    const Wire c = check_inside_triangle(cs, w.a, w.b, prover(cs, p.x), prover(cs, p.y), bc, 24);
    satisfied = sat(cs);
    return cs.value(c).value;
  };
  bool ok = false;
  CHECK(run({1, 1}, {3, 3}, ok) == 1);
  CHECK(ok);
  CHECK(run({0, 0}, {0, 0}, ok) == 1);
  CHECK(ok);
  CHECK(run({3, 3}, {9, 9}, ok) == 0);
  CHECK(ok);
  // Inconsistent coordinates violate the reconstruction assertions.
  run({1, 1}, {3, 4}, ok);
  CHECK_FALSE(ok);
  run({3, 3}, {0, 0}, ok);
  CHECK_FALSE(ok);
}

TEST_CASE("check_inside_triangle agrees with the sign-of-areas oracle") {
  std::mt19937_64 rng(4);
  const Coord bound = 1 << 12;
  std::uniform_int_distribution<Coord> coord(0, bound - 1);
  int boundary = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    Triangle t;
    do {
      t = Triangle{{Point{coord(rng), coord(rng)}, Point{coord(rng), coord(rng)}, Point{coord(rng), coord(rng)}}};
    } while (localcalc::area_dbl_sgn(t) == 0);
    if (localcalc::area_dbl_sgn(t) < 0) std::swap(t.v[1], t.v[2]);
    Point p{coord(rng), coord(rng)};
    if (trial % 5 == 0) {
      p = t.v[rng() % 3];  // vertices are on the boundary
      ++boundary;
    } else if (trial % 5 == 1) {
      // midpoint of an edge when it is a lattice point
      const Point a = t.v[0], b = t.v[1];
      if ((a.x + b.x) % 2 == 0 && (a.y + b.y) % 2 == 0) {
        p = Point{(a.x + b.x) / 2, (a.y + b.y) / 2};
        ++boundary;
      }
    }
    ConstraintSystem cs{kField};
    const auto w = wire_triangle(cs, t);
    const Wire c =
        check_inside_triangle(cs, w.a, w.b, prover(cs, p.x), prover(cs, p.y), localcalc::get_bcoords(p, t), 24);
    REQUIRE(sat(cs));
    REQUIRE((cs.value(c).value == 1) == localcalc::in_triangle(p, t));
  }
  CHECK(boundary > 600);
}

TEST_CASE("lookup") {
  auto table_of = [](ConstraintSystem& cs, const std::vector<std::array<int, 3>>& rows) {
    std::vector<std::vector<Wire>> table;
    for (const auto& r : rows) table.push_back({shared(cs, r[0]), shared(cs, r[1]), shared(cs, r[2])});
    return table;
  };
  const std::vector<std::array<int, 3>> rows{{1, 2, 3}, {4, 5, 6}, {7, 8, 9}};
  for (std::size_t t = 1; t <= 3; ++t) {
    ConstraintSystem cs{kField};
    const auto out = lookup(cs, t, table_of(cs, rows));
    REQUIRE(sat(cs));
    for (std::size_t k = 0; k < 3; ++k) CHECK(cs.value(out[k]) == kField.element(rows[t - 1][k]));
  }
  SUBCASE("two ones") {
    ConstraintSystem cs{kField};
    const std::vector<FieldElement> sel{kField.one(), kField.one(), kField.zero()};
    lookup_with_selector(cs, sel, table_of(cs, rows));
    CHECK_FALSE(sat(cs));
  }
  SUBCASE("index out of range") {
    ConstraintSystem cs{kField};
    lookup(cs, 4, table_of(cs, rows));
    CHECK_FALSE(sat(cs));
  }
  SUBCASE("non-boolean selector summing to one") {
    ConstraintSystem cs{kField};
    const std::vector<FieldElement> sel{kField.element(2), kField.from_signed(-1), kField.zero()};
    lookup_with_selector(cs, sel, table_of(cs, rows));
    CHECK_FALSE(sat(cs));
  }
}

TEST_CASE("lookup returns row t for every t on random tables") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng() % 16;
    std::vector<std::vector<i128>> rows(n, std::vector<i128>(6));
    for (auto& r : rows)
      for (auto& v : r) v = static_cast<i128>(rng() % (1 << 24));
    for (std::size_t t = 1; t <= n; ++t) {
      ConstraintSystem cs{kField};
      std::vector<std::vector<Wire>> table;
      for (const auto& r : rows) {
        std::vector<Wire> wr;
        for (i128 v : r) wr.push_back(shared(cs, v));
        table.push_back(wr);
      }
      const auto out = lookup(cs, t, table);
      REQUIRE(sat(cs));
      for (std::size_t k = 0; k < 6; ++k) REQUIRE(kField.to_signed(cs.value(out[k])) == rows[t - 1][k]);
    }
  }
}
