#include "zkpol/appio.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "zkpol/codec.hpp"
#include "zkpol/localcalc.hpp"

namespace zkpol::appio {

using json = nlohmann::ordered_json;

StatementInstance parse_instance(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
  }
  return codec::read_instance(j);
}

StatementInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_instance(buf.str());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::string serialize_instance(const StatementInstance& inst) { return codec::write(inst).dump(2) + "\n"; }

void save_instance(const std::filesystem::path& path, const StatementInstance& inst) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path.string());
  out << serialize_instance(inst);
}

const char* fixture_mode_name(FixtureMode m) noexcept {
  switch (m) {
    case FixtureMode::Compliant: return "compliant";
    case FixtureMode::NonCompliant: return "non_compliant";
    case FixtureMode::Boundary: return "boundary";
  }
  return "?";
}

FixtureSpec parse_fixture_spec(const json& j) {
  FixtureSpec s;
  const auto seed = codec::read_int(codec::member(j, "seed", ""), "/seed");
  if (seed < 0 || seed > i128{std::numeric_limits<std::uint64_t>::max()}) {
    throw Error(ErrorCode::InstanceError, "/seed: out of range");
  }
  s.seed = static_cast<std::uint64_t>(seed);
  const json& kind = codec::member(j, "kind", "");
  if (kind == "ev") {
    s.kind = StatementKind::Ev;
    s.n_geo = codec::read_size(codec::member(j, "n_circ", ""), "/n_circ");
  } else if (kind == "tax") {
    s.kind = StatementKind::Tax;
    s.n_geo = codec::read_size(codec::member(j, "n_tri", ""), "/n_tri");
  } else {
    throw Error(ErrorCode::ParseError, "/kind: expected \"ev\" or \"tax\"");
  }
  s.n_traj = codec::read_size(codec::member(j, "n_traj", ""), "/n_traj");
  if (j.contains("coord_bound")) s.coord_bound = codec::read_coord(j["coord_bound"], "/coord_bound");
  if (j.contains("mode")) {
    const json& m = j["mode"];
    if (m == "compliant") s.mode = FixtureMode::Compliant;
    else if (m == "non_compliant") s.mode = FixtureMode::NonCompliant;
    else if (m == "boundary") s.mode = FixtureMode::Boundary;
    else throw Error(ErrorCode::ParseError, "/mode: expected compliant, non_compliant or boundary");
  }
  if (j.contains("field_params")) s.field_params = codec::read_field_params(j["field_params"], "/field_params");
  if (j.contains("policy")) {
    if (s.kind == StatementKind::Ev) s.subsidy = codec::read_subsidy_policy(j["policy"], "/policy");
    else s.tax = codec::read_tax_policy(j["policy"], "/policy");
  }
  return s;
}

// ---- fixture generation ----

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  // Uniform in [lo, hi]; modulo bias is irrelevant for fixtures.
  Coord range(Coord lo, Coord hi) {
    if (hi <= lo) return lo;
    return lo + static_cast<Coord>(g_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  bool percent(int p) { return static_cast<int>(g_() % 100) < p; }

 private:
  std::mt19937_64 g_;
};

Coord clamp(Coord v, Coord bound) { return std::clamp<Coord>(v, 0, bound - 1); }

Point step_from(Rng& rng, Point p, Coord step, Coord bound) {
  return {clamp(p.x + rng.range(-step, step), bound), clamp(p.y + rng.range(-step, step), bound)};
}

Point point_in_circle(Rng& rng, const Circle& c, Coord bound) {
  for (int i = 0; i < 64; ++i) {
    const Point q{clamp(c.u + rng.range(-c.r, c.r), bound), clamp(c.v + rng.range(-c.r, c.r), bound)};
    const i128 dx = q.x - c.u, dy = q.y - c.v;
    if (dx * dx + dy * dy <= i128{c.r} * c.r) return q;
  }
  return {clamp(c.u, bound), clamp(c.v, bound)};
}

const PoseidonParams& params_for(const Field& field) {
  static const Field default_field;
  static const PoseidonParams default_pp = PoseidonParams::derive(default_field);
  if (field == default_field) return default_pp;
  thread_local std::optional<std::pair<Field, PoseidonParams>> cached;
  if (!cached || !(cached->first == field)) cached.emplace(field, PoseidonParams::derive(field));
  return cached->second;
}

std::size_t trail_length(Rng& rng, std::size_t n_traj) {
  if (n_traj <= 1) return 1;
  return static_cast<std::size_t>(rng.range(static_cast<Coord>(std::max<std::size_t>(2, n_traj / 2)), static_cast<Coord>(n_traj)));
}

Coord floor_percent(i128 part, i128 whole) { return whole == 0 ? 100 : static_cast<Coord>(part * 100 / whole); }

EvInstance gen_ev(Rng& rng, const FixtureSpec& spec, const Field& field) {
  const Coord b = spec.coord_bound;
  CircleSet circles;
  for (std::size_t i = 0; i < spec.n_geo; ++i) {
    circles.circles.push_back({rng.range(0, b - 1), rng.range(0, b - 1), rng.range(std::max<Coord>(1, b / 16), std::max<Coord>(1, b / 6))});
  }
  const Coord step = std::max<Coord>(1, b / 8);
  const std::size_t len = trail_length(rng, spec.n_traj);
  std::vector<Point> pts;
  pts.push_back(point_in_circle(rng, circles.circles[static_cast<std::size_t>(rng.range(0, static_cast<Coord>(spec.n_geo) - 1))], b));
  while (pts.size() < len) {
    Point q = step_from(rng, pts.back(), step, b);
    if (rng.percent(90)) {
      int tries = 0;
      while (!localcalc::in_any_circle(q, circles) && tries++ < 32) q = step_from(rng, pts.back(), step, b);
      if (!localcalc::in_any_circle(q, circles)) {
        q = point_in_circle(rng, circles.circles[static_cast<std::size_t>(rng.range(0, static_cast<Coord>(spec.n_geo) - 1))], b);
      }
    }
    pts.push_back(q);
  }
  EvInstance inst{field, params_for(field), spec.n_traj, {}, {}, std::move(circles), Trail::from_points(std::move(pts))};
  const auto st = localcalc::ev_stats(inst.trail, inst.circles);
  const Coord tot = static_cast<Coord>(st.tot);
  const Coord pct = floor_percent(st.inside, st.tot);
  if (spec.subsidy) {
    inst.policy = *spec.subsidy;
  } else {
    switch (spec.mode) {
      case FixtureMode::Compliant:
        inst.policy = {rng.range(0, tot), std::max<Coord>(0, pct - rng.range(0, 10))};
        break;
      case FixtureMode::Boundary:
        inst.policy = {tot, std::min<Coord>(pct, 100)};
        break;
      case FixtureMode::NonCompliant:
        if (st.inside < st.tot && rng.percent(50)) {
          inst.policy = {rng.range(0, tot), std::min<Coord>(100, pct + 1 + rng.range(0, 5))};
        } else {
          inst.policy = {tot + 1 + rng.range(0, b), rng.range(0, std::min<Coord>(pct, 100))};
        }
        break;
    }
  }
  inst.h_ex = statements::trail_hash(field, inst.pp, inst.trail, inst.n_traj);
  return inst;
}

Triangle random_triangle(Rng& rng, Coord b) {
  for (;;) {
    Triangle t{{Point{rng.range(0, b - 1), rng.range(0, b - 1)}, Point{rng.range(0, b - 1), rng.range(0, b - 1)},
                Point{rng.range(0, b - 1), rng.range(0, b - 1)}}};
    const i128 a = localcalc::area_dbl_sgn(t);
    if (a == 0) continue;
    if (a < 0) std::swap(t.v[1], t.v[2]);
    return t;
  }
}

TaxInstance gen_tax(Rng& rng, const FixtureSpec& spec, const Field& field) {
  const Coord b = spec.coord_bound;
  const Rect bbox{0, 0, b - 1, b - 1};
  const Coord margin = std::max<Coord>(1, b / 32);
  TriangleSet tris;
  std::vector<Point> road;
  if (b > 4 * margin + 2 && spec.n_geo >= 4) {
    const Coord y = rng.range(margin, b - 1 - margin);
    if (spec.n_geo >= 12 && rng.percent(50)) {
      const Coord x = rng.range(margin, b - 1 - margin);
      road = {{0, y}, {x, y}, {x, b - 1}};
    } else {
      road = {{0, y}, {b - 1, y}};
    }
    tris = corridor_triangulate(road, margin, bbox);
  }
  while (tris.triangles.size() < spec.n_geo) tris.triangles.push_back(random_triangle(rng, b));

  const Coord step = std::max<Coord>(1, b / 8);
  const std::size_t len = trail_length(rng, spec.n_traj);
  std::vector<Point> pts{{rng.range(0, b - 1), rng.range(0, b - 1)}};
  while (pts.size() < len) {
    Point q = step_from(rng, pts.back(), step, b);
    if (!road.empty() && rng.percent(15)) {
      // Hop onto the road near the current position.
      const Point& a = road[0];
      q = {clamp(q.x, b), clamp(a.y + rng.range(-margin + 1, margin - 1), b)};
    }
    pts.push_back(q);
  }
  TaxInstance inst{field, params_for(field), spec.n_traj, {}, {}, std::move(tris), Trail::from_points(std::move(pts)), bbox};
  const auto st = localcalc::tax_stats(inst.trail, inst.triangles);
  const Coord taxed = static_cast<Coord>(st.tot - st.inside);
  if (spec.tax) {
    inst.policy = *spec.tax;
  } else {
    switch (spec.mode) {
      case FixtureMode::Compliant:
        inst.policy = {taxed + rng.range(0, static_cast<Coord>(st.tot) - taxed)};
        break;
      case FixtureMode::Boundary:
        inst.policy = {taxed};
        break;
      case FixtureMode::NonCompliant:
        inst.policy = {taxed == 0 ? 0 : rng.range(0, taxed - 1)};
        break;
    }
  }
  inst.h_ex = statements::trail_hash(field, inst.pp, inst.trail, inst.n_traj);
  return inst;
}

}  // namespace

StatementInstance gen_fixture(const FixtureSpec& spec) {
  if (spec.n_traj == 0 || spec.n_traj > kMaxFixtureTraj) {
    throw Error(ErrorCode::InvalidParams, "n_traj must be in [1, " + std::to_string(kMaxFixtureTraj) + "]");
  }
  if (spec.n_geo == 0 || spec.n_geo > 4096) throw Error(ErrorCode::InvalidParams, "geometry count must be in [1, 4096]");
  const Field field(spec.field_params);
  if (spec.coord_bound < 2 || static_cast<u128>(spec.coord_bound) > (u128{1} << field.coord_bits())) {
    throw Error(ErrorCode::InvalidParams, "coord_bound must be in [2, 2^coord_bits]");
  }
  Rng rng(spec.seed);
  const bool want = spec.mode != FixtureMode::NonCompliant;
  for (int attempt = 0; attempt < 64; ++attempt) {
    StatementInstance inst;
    if (spec.kind == StatementKind::Ev) inst = gen_ev(rng, spec, field);
    else inst = gen_tax(rng, spec, field);
    if (statements::oracle(inst) != want) continue;
    if (spec.mode == FixtureMode::Boundary && (spec.subsidy || spec.tax)) {
      // With fixed thresholds the trail itself has to land on them.
      const bool on_threshold = std::visit(
          [](const auto& in) {
            if constexpr (std::is_same_v<std::decay_t<decltype(in)>, EvInstance>) {
              return localcalc::ev_stats(in.trail, in.circles).tot == in.policy.d_req;
            } else {
              const auto st = localcalc::tax_stats(in.trail, in.triangles);
              return st.tot - st.inside == in.policy.d_max;
            }
          },
          inst);
      if (!on_threshold) continue;
    }
    std::visit([](const auto& in) { statements::validate(in); }, inst);
    return inst;
  }
  throw Error(ErrorCode::GenerationFailed, std::string("no ") + fixture_mode_name(spec.mode) + " " +
                                               statement_kind_name(spec.kind) + " fixture after 64 attempts");
}

// ---- corridor triangulation ----

TriangleSet corridor_triangulate(const std::vector<Point>& polyline, Coord margin, const Rect& bbox) {
  if (margin <= 0) throw Error(ErrorCode::InvalidParams, "margin must be positive");
  if (polyline.empty()) throw Error(ErrorCode::InvalidParams, "empty polyline");
  std::vector<Rect> corridor;
  for (std::size_t i = 0; i == 0 || i + 1 < polyline.size(); ++i) {
    const Point a = polyline[i], b = i + 1 < polyline.size() ? polyline[i + 1] : polyline[i];
    if (a.x != b.x && a.y != b.y) throw Error(ErrorCode::Unsupported, "corridor segments must be axis-aligned");
    corridor.push_back({std::min(a.x, b.x) - margin, std::min(a.y, b.y) - margin, std::max(a.x, b.x) + margin,
                        std::max(a.y, b.y) + margin});
  }
  std::vector<Coord> xs{bbox.x0, bbox.x1}, ys{bbox.y0, bbox.y1};
  for (const Rect& r : corridor) {
    for (Coord x : {r.x0, r.x1}) {
      if (x > bbox.x0 && x < bbox.x1) xs.push_back(x);
    }
    for (Coord y : {r.y0, r.y1}) {
      if (y > bbox.y0 && y < bbox.y1) ys.push_back(y);
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

  TriangleSet out;
  for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      // Cell centers in doubled coordinates avoid halves.
      const Coord cx2 = xs[i] + xs[i + 1], cy2 = ys[j] + ys[j + 1];
      const bool in_corridor = std::any_of(corridor.begin(), corridor.end(), [&](const Rect& r) {
        return cx2 > 2 * r.x0 && cx2 < 2 * r.x1 && cy2 > 2 * r.y0 && cy2 < 2 * r.y1;
      });
      if (in_corridor) continue;
      const Point p00{xs[i], ys[j]}, p10{xs[i + 1], ys[j]}, p11{xs[i + 1], ys[j + 1]}, p01{xs[i], ys[j + 1]};
      out.triangles.push_back(Triangle{{p00, p10, p11}});
      out.triangles.push_back(Triangle{{p00, p11, p01}});
    }
  }
  return out;
}

}  // namespace zkpol::appio
