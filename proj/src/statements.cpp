#include "zkpol/statements.hpp"

#include <string>

#include "zkpol/localcalc.hpp"

namespace zkpol {

const char* statement_kind_name(StatementKind kind) noexcept { return kind == StatementKind::Ev ? "ev" : "tax"; }

StatementKind kind_of(const StatementInstance& inst) noexcept {
  return std::holds_alternative<EvInstance>(inst) ? StatementKind::Ev : StatementKind::Tax;
}

namespace statements {

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::InstanceError, what); }

void check_coord(Coord c, unsigned k, const std::string& what) {
  if (c < 0 || static_cast<u128>(c) >= (u128{1} << k)) {
    fail(what + " = " + std::to_string(c) + " outside [0, 2^" + std::to_string(k) + ")");
  }
}

void check_common(const Field& field, const PoseidonParams& pp, std::size_t n_traj, const Trail& trail) {
  const unsigned k = field.coord_bits();
  if (accumulator_bits(k) + 2 >= field.modulus_bits()) {
    fail("field too small for coord_bits " + std::to_string(k));
  }
  try {
    pp.validate(field);
  } catch (const Error& e) {
    fail(std::string("poseidon parameters: ") + e.what());
  }
  if (n_traj == 0) fail("n_traj must be positive");
  // tot * 100 < n_traj * 2^(k+1) * 2^7 must stay below 2^accumulator_bits
  if (k + 8 < 64 && n_traj > (std::size_t{1} << (k + 8))) fail("n_traj too large for coord_bits");
  if (trail.declared_len == 0 || trail.declared_len > n_traj) {
    fail("trail declared_len " + std::to_string(trail.declared_len) + " outside [1, n_traj]");
  }
  if (trail.points.size() < trail.declared_len || trail.points.size() > n_traj) {
    fail("trail has " + std::to_string(trail.points.size()) + " points, expected between declared_len and n_traj");
  }
  const Point last = trail.points[trail.declared_len - 1];
  for (std::size_t i = 0; i < trail.points.size(); ++i) {
    check_coord(trail.points[i].x, k, "trail[" + std::to_string(i) + "].x");
    check_coord(trail.points[i].y, k, "trail[" + std::to_string(i) + "].y");
    if (i >= trail.declared_len && trail.points[i] != last) fail("padding must repeat the last real point");
  }
}

void check_threshold(Coord v, unsigned k, const std::string& what) {
  const unsigned w = accumulator_bits(k);
  if (v < 0 || static_cast<u128>(v) >= (u128{1} << w)) fail(what + " outside [0, 2^" + std::to_string(w) + ")");
}

struct TrailWires {
  std::vector<Wire> xs, ys;
  Wire digest;
};

TrailWires wire_trail(ConstraintSystem& cs, const PoseidonParams& pp, const Trail& trail, std::size_t n_traj,
                      FieldElement h_ex) {
  const Field& f = cs.field();
  const auto pts = trail.padded(n_traj);
  TrailWires tw;
  for (const Point& p : pts) tw.xs.push_back(cs.input(f.from_signed(p.x), Domain::ProverOnly));
  for (const Point& p : pts) tw.ys.push_back(cs.input(f.from_signed(p.y), Domain::ProverOnly));
  std::vector<Wire> msg = tw.xs;
  msg.insert(msg.end(), tw.ys.begin(), tw.ys.end());
  tw.digest = gadgets::poseidon_hash(cs, msg, pp);
  cs.assert_eq(tw.digest, cs.input(h_ex, Domain::Shared));
  // Coordinates are prover-supplied; bound them so squared distances cannot wrap.
  for (std::size_t i = 0; i < pts.size(); ++i) {
    gadgets::decompose_bits(cs, tw.xs[i], f.coord_bits());
    gadgets::decompose_bits(cs, tw.ys[i], f.coord_bits());
  }
  return tw;
}

Wire segment_distance(ConstraintSystem& cs, const TrailWires& tw, std::size_t i, gadgets::SqrtMode mode,
                      const Options& opts) {
  const Wire dx = cs.sub(tw.xs[i], tw.xs[i - 1]);
  const Wire dy = cs.sub(tw.ys[i], tw.ys[i - 1]);
  const Wire sq = cs.add(cs.mul(dx, dx), cs.mul(dy, dy));
  std::optional<FieldElement> claimed;
  if (i - 1 < opts.distance_override.size()) claimed = opts.distance_override[i - 1];
  return gadgets::sqrt_floor(cs, sq, distance_bits(cs.field().coord_bits()), mode, claimed);
}

}  // namespace

void validate(const EvInstance& inst) {
  check_common(inst.field, inst.pp, inst.n_traj, inst.trail);
  const unsigned k = inst.field.coord_bits();
  if (inst.circles.circles.empty()) fail("at least one circle is required");
  for (std::size_t i = 0; i < inst.circles.circles.size(); ++i) {
    const Circle& c = inst.circles.circles[i];
    const std::string at = "circles[" + std::to_string(i) + "]";
    check_coord(c.u, k, at + ".u");
    check_coord(c.v, k, at + ".v");
    if (c.r <= 0) fail(at + ".r must be positive");
    check_coord(c.r, k, at + ".r");
  }
  if (inst.policy.p_req < 0 || inst.policy.p_req > 100) fail("P_req must be within [0, 100]");
  check_threshold(inst.policy.d_req, k, "d_req");
}

void validate(const TaxInstance& inst) {
  check_common(inst.field, inst.pp, inst.n_traj, inst.trail);
  const unsigned k = inst.field.coord_bits();
  if (inst.triangles.triangles.empty()) fail("at least one triangle is required");
  for (std::size_t i = 0; i < inst.triangles.triangles.size(); ++i) {
    const Triangle& t = inst.triangles.triangles[i];
    const std::string at = "triangles[" + std::to_string(i) + "]";
    for (std::size_t j = 0; j < 3; ++j) {
      check_coord(t.v[j].x, k, at + ".x" + std::to_string(j + 1));
      check_coord(t.v[j].y, k, at + ".y" + std::to_string(j + 1));
    }
    if (localcalc::area_dbl_sgn(t) <= 0) fail(at + " must be counterclockwise and non-degenerate");
  }
  check_threshold(inst.policy.d_max, k, "d_max");
  if (inst.region) {
    for (std::size_t i = 0; i < inst.trail.points.size(); ++i) {
      if (!inst.region->contains(inst.trail.points[i])) {
        fail("trail[" + std::to_string(i) + "] lies outside the triangulated region and road corridor");
      }
    }
  }
}

std::vector<FieldElement> trail_message(const Field& field, const Trail& trail, std::size_t n_traj) {
  const auto pts = trail.padded(n_traj);
  std::vector<FieldElement> msg;
  msg.reserve(2 * pts.size());
  for (const Point& p : pts) msg.push_back(field.from_signed(p.x));
  for (const Point& p : pts) msg.push_back(field.from_signed(p.y));
  return msg;
}

FieldElement trail_hash(const Field& field, const PoseidonParams& pp, const Trail& trail, std::size_t n_traj) {
  return poseidon::hash(field, pp, trail_message(field, trail, n_traj));
}

BuiltStatement build_ev_subsidy(const EvInstance& inst, ConstraintSystem& cs, const Options& opts) {
  validate(inst);
  const Field& f = cs.field();
  const unsigned k = f.coord_bits();
  const auto mode = opts.sqrt_mode.value_or(gadgets::SqrtMode::Both);

  const TrailWires tw = wire_trail(cs, inst.pp, inst.trail, inst.n_traj, inst.h_ex);

  std::vector<Wire> u, v, s;
  for (const Circle& c : inst.circles.circles) {
    u.push_back(cs.input(f.from_signed(c.u), Domain::Shared));
    v.push_back(cs.input(f.from_signed(c.v), Domain::Shared));
  }
  for (const Circle& c : inst.circles.circles) {
    s.push_back(cs.input(f.from_signed(static_cast<i128>(c.r) * c.r), Domain::Shared));
  }

  BuiltStatement out;
  out.tot = cs.constant(f.zero());
  out.inside = out.tot;
  Wire prev_in = gadgets::check_inside(cs, u, v, s, tw.xs[0], tw.ys[0], k);
  for (std::size_t i = 1; i < inst.n_traj; ++i) {
    const Wire in = gadgets::check_inside(cs, u, v, s, tw.xs[i], tw.ys[i], k);
    const Wire d = segment_distance(cs, tw, i, mode, opts);
    out.tot = cs.add(out.tot, d);
    out.inside = cs.oblivious_choice(gadgets::boolean_and(cs, prev_in, in), cs.add(out.inside, d), out.inside);
    out.distances.push_back(d);
    prev_in = in;
  }

  const unsigned w = accumulator_bits(k);
  gadgets::assert_leq(cs, cs.input(f.from_signed(inst.policy.d_req), Domain::Shared), out.tot, w);
  const Wire p_req = cs.input(f.from_signed(inst.policy.p_req), Domain::Shared);
  gadgets::assert_leq(cs, cs.mul(out.tot, p_req), cs.scale(out.inside, f.element(100)), w);

  out.xs = tw.xs;
  out.ys = tw.ys;
  out.digest = tw.digest;
  return out;
}

BuiltStatement build_highway_tax(const TaxInstance& inst, ConstraintSystem& cs, const Options& opts) {
  validate(inst);
  const Field& f = cs.field();
  const unsigned k = f.coord_bits();
  const auto mode = opts.sqrt_mode.value_or(gadgets::SqrtMode::UpperOnly);
  const auto& tris = inst.triangles.triangles;

  const TrailWires tw = wire_trail(cs, inst.pp, inst.trail, inst.n_traj, inst.h_ex);
  const auto pts = inst.trail.padded(inst.n_traj);

  // One row per triangle: X1 X2 X3 Y1 Y2 Y3, selected by a single vector so
  // both coordinate lookups always address the same triangle.
  std::vector<std::vector<Wire>> table;
  table.reserve(tris.size());
  for (const Triangle& t : tris) {
    std::vector<Wire> row;
    for (const Point& p : t.v) row.push_back(cs.input(f.from_signed(p.x), Domain::Shared));
    for (const Point& p : t.v) row.push_back(cs.input(f.from_signed(p.y), Domain::Shared));
    table.push_back(std::move(row));
  }

  std::vector<Wire> inside(inst.n_traj);
  for (std::size_t i = 0; i < inst.n_traj; ++i) {
    std::size_t idx = localcalc::find_triangle(pts[i].x, pts[i].y, inst.triangles);
    if (i < opts.triangle_override.size() && opts.triangle_override[i]) idx = *opts.triangle_override[i];
    const auto row = gadgets::lookup(cs, idx, table);
    localcalc::BaryCoords bc;
    if (idx >= 1 && idx <= tris.size()) bc = localcalc::get_bcoords(pts[i], tris[idx - 1]);
    inside[i] = gadgets::check_inside_triangle(cs, {row[0], row[1], row[2]}, {row[3], row[4], row[5]}, tw.xs[i],
                                               tw.ys[i], bc, k);
  }

  BuiltStatement out;
  out.tot = cs.constant(f.zero());
  out.inside = out.tot;
  for (std::size_t i = 1; i < inst.n_traj; ++i) {
    const Wire d = segment_distance(cs, tw, i, mode, opts);
    out.tot = cs.add(out.tot, d);
    out.inside =
        cs.oblivious_choice(gadgets::boolean_and(cs, inside[i - 1], inside[i]), cs.add(out.inside, d), out.inside);
    out.distances.push_back(d);
  }

  const Wire taxed = cs.sub(out.tot, out.inside);
  gadgets::assert_leq(cs, taxed, cs.input(f.from_signed(inst.policy.d_max), Domain::Shared),
                      accumulator_bits(k));

  out.xs = tw.xs;
  out.ys = tw.ys;
  out.digest = tw.digest;
  return out;
}

BuiltStatement build(const StatementInstance& inst, ConstraintSystem& cs, const Options& opts) {
  return std::visit(
      [&](const auto& i) -> BuiltStatement {
        if constexpr (std::is_same_v<std::decay_t<decltype(i)>, EvInstance>) return build_ev_subsidy(i, cs, opts);
        else return build_highway_tax(i, cs, opts);
      },
      inst);
}

SatisfactionReport check(const StatementInstance& inst, const Options& opts) {
  const Field& field = std::visit([](const auto& i) -> const Field& { return i.field; }, inst);
  ConstraintSystem cs(field);
  build(inst, cs, opts);
  return cs.evaluate_and_check();
}

bool oracle(const StatementInstance& inst) {
  return std::visit(
      [](const auto& i) -> bool {
        if constexpr (std::is_same_v<std::decay_t<decltype(i)>, EvInstance>) {
          return localcalc::oracle_ev(i.trail, i.circles, i.policy);
        } else {
          return localcalc::oracle_hwtax(i.trail, i.triangles, i.policy);
        }
      },
      inst);
}

Counters statement_cost(StatementKind kind, std::size_t n_traj, std::size_t n_geo, const Field& field,
                        const PoseidonParams& pp, const Options& opts) {
  Trail trail = Trail::from_points(std::vector<Point>(n_traj, Point{0, 0}));
  const FieldElement h = trail_hash(field, pp, trail, n_traj);
  ConstraintSystem cs(field);
  if (kind == StatementKind::Ev) {
    EvInstance inst{field, pp, n_traj, h, SubsidyPolicy{}, CircleSet{}, std::move(trail)};
    inst.circles.circles.assign(n_geo, Circle{0, 0, 1});
    build_ev_subsidy(inst, cs, opts);
  } else {
    TaxInstance inst{field, pp, n_traj, h, TaxPolicy{}, TriangleSet{}, std::move(trail), std::nullopt};
    inst.triangles.triangles.assign(n_geo, Triangle{{Point{0, 0}, Point{1, 0}, Point{0, 1}}});
    build_highway_tax(inst, cs, opts);
  }
  return cs.counters();
}

}  // namespace statements

}  // namespace zkpol
