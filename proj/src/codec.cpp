#include "zkpol/codec.hpp"

#include <limits>
#include <optional>

#include "zkpol/localcalc.hpp"

namespace zkpol::codec {

namespace {

[[noreturn]] void parse_fail(const std::string& ptr, const std::string& what) {
  throw Error(ErrorCode::ParseError, (ptr.empty() ? "/" : ptr) + ": " + what);
}

[[noreturn]] void instance_fail(const std::string& ptr, const std::string& what) {
  throw Error(ErrorCode::InstanceError, (ptr.empty() ? "/" : ptr) + ": " + what);
}

std::string at(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }
std::string at(const std::string& ptr, const char* key) { return ptr + "/" + key; }

const json& array_member(const json& j, const char* key, const std::string& ptr) {
  const json& a = member(j, key, ptr);
  if (!a.is_array()) parse_fail(at(ptr, key), "expected an array");
  return a;
}

std::string dec(i128 v) { return i128_to_string(v); }

FieldElement read_element(const Field& f, const json& j, const std::string& ptr) {
  if (!j.is_string()) parse_fail(ptr, "expected a decimal string");
  u128 v = 0;
  try {
    v = u128_from_string(j.get<std::string>());
  } catch (const Error& e) {
    parse_fail(ptr, e.what());
  }
  if (v >= f.modulus()) instance_fail(ptr, "field element not reduced");
  return f.element(v);
}

std::vector<Point> read_pair_list(const json& a, const std::string& ptr) {
  std::vector<Point> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(read_point(a[i], at(ptr, i)));
  return out;
}

}  // namespace

const json& member(const json& j, const char* key, const std::string& ptr) {
  if (!j.is_object()) parse_fail(ptr, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) parse_fail(at(ptr, key), "missing");
  return *it;
}

i128 read_int(const json& j, const std::string& ptr) {
  if (j.is_number_integer()) return j.is_number_unsigned() ? i128(j.get<std::uint64_t>()) : i128(j.get<std::int64_t>());
  if (!j.is_string()) parse_fail(ptr, "expected an integer (decimal string)");
  try {
    return i128_from_string(j.get<std::string>());
  } catch (const Error& e) {
    parse_fail(ptr, e.what());
  }
}

Coord read_coord(const json& j, const std::string& ptr) {
  const i128 v = read_int(j, ptr);
  if (v < std::numeric_limits<Coord>::min() || v > std::numeric_limits<Coord>::max()) {
    instance_fail(ptr, "integer does not fit in 64 bits");
  }
  return static_cast<Coord>(v);
}

std::size_t read_size(const json& j, const std::string& ptr) {
  const i128 v = read_int(j, ptr);
  if (v < 0 || v > i128{std::numeric_limits<std::uint32_t>::max()}) instance_fail(ptr, "size out of range");
  return static_cast<std::size_t>(v);
}

json write(const FieldParams& fp) {
  return {{"modulus", u128_to_string(fp.modulus)}, {"coord_bits", std::to_string(fp.coord_bits)}};
}

FieldParams read_field_params(const json& j, const std::string& ptr) {
  FieldParams fp;
  const json& m = member(j, "modulus", ptr);
  if (!m.is_string()) parse_fail(at(ptr, "modulus"), "expected a decimal string");
  try {
    fp.modulus = u128_from_string(m.get<std::string>());
  } catch (const Error& e) {
    parse_fail(at(ptr, "modulus"), e.what());
  }
  const i128 k = read_int(member(j, "coord_bits", ptr), at(ptr, "coord_bits"));
  if (k < 1 || k > 60) instance_fail(at(ptr, "coord_bits"), "outside [1, 60]");
  fp.coord_bits = static_cast<unsigned>(k);
  return fp;
}

json write(const Field& field, const PoseidonParams& pp, bool with_constants) {
  json j = {{"seed", pp.seed},
            {"t", std::to_string(pp.t)},
            {"alpha", u128_to_string(pp.alpha)},
            {"r_full", std::to_string(pp.r_full)},
            {"r_partial", std::to_string(pp.r_partial)}};
  bool derived = false;
  try {
    derived = !with_constants && PoseidonParams::derive(field, pp.seed, pp.t, pp.alpha, pp.r_full, pp.r_partial) == pp;
  } catch (const Error&) {
  }
  if (!derived) {
    json rc = json::array();
    for (auto c : pp.round_constants) rc.push_back(u128_to_string(c.value));
    json mds = json::array();
    for (const auto& row : pp.mds) {
      json r = json::array();
      for (auto c : row) r.push_back(u128_to_string(c.value));
      mds.push_back(r);
    }
    j["round_constants"] = rc;
    j["mds"] = mds;
  }
  return j;
}

PoseidonParams read_poseidon(const Field& field, const json& j, const std::string& ptr) {
  const json& seed = member(j, "seed", ptr);
  if (!seed.is_string()) parse_fail(at(ptr, "seed"), "expected a string");
  const std::size_t t = read_size(member(j, "t", ptr), at(ptr, "t"));
  const i128 alpha = read_int(member(j, "alpha", ptr), at(ptr, "alpha"));
  const std::size_t rf = read_size(member(j, "r_full", ptr), at(ptr, "r_full"));
  const std::size_t rp = read_size(member(j, "r_partial", ptr), at(ptr, "r_partial"));
  if (t < 2 || t > 16) instance_fail(at(ptr, "t"), "outside [2, 16]");
  if (alpha < 3) instance_fail(at(ptr, "alpha"), "must be at least 3");
  if (rf % 2 != 0 || rf == 0) instance_fail(at(ptr, "r_full"), "must be positive and even");
  if (rp > 1000) instance_fail(at(ptr, "r_partial"), "too many rounds");
  PoseidonParams pp;
  if (j.contains("round_constants") || j.contains("mds")) {
    pp.seed = seed.get<std::string>();
    pp.t = t;
    pp.alpha = static_cast<u128>(alpha);
    pp.r_full = rf;
    pp.r_partial = rp;
    const json& rc = array_member(j, "round_constants", ptr);
    for (std::size_t i = 0; i < rc.size(); ++i) pp.round_constants.push_back(read_element(field, rc[i], at(at(ptr, "round_constants"), i)));
    const json& mds = array_member(j, "mds", ptr);
    for (std::size_t i = 0; i < mds.size(); ++i) {
      const std::string rptr = at(at(ptr, "mds"), i);
      if (!mds[i].is_array()) parse_fail(rptr, "expected an array");
      std::vector<FieldElement> row;
      for (std::size_t c = 0; c < mds[i].size(); ++c) row.push_back(read_element(field, mds[i][c], at(rptr, c)));
      pp.mds.push_back(std::move(row));
    }
  }
  try {
    if (pp.round_constants.empty() && pp.mds.empty()) {
      pp = PoseidonParams::derive(field, seed.get<std::string>(), t, static_cast<u128>(alpha), rf, rp);
    } else {
      pp.validate(field);
    }
  } catch (const Error& e) {
    instance_fail(ptr, e.what());
  }
  return pp;
}

json write_params(const Field& field, const PoseidonParams& pp) {
  return {{"schema_version", std::to_string(kSchemaVersion)},
          {"field_params", write(field.params())},
          {"poseidon", write(field, pp, true)}};
}

std::pair<Field, PoseidonParams> read_params(const json& j) {
  if (!j.is_object()) parse_fail("", "expected an object");
  if (read_int(member(j, "schema_version", ""), "/schema_version") != kSchemaVersion) {
    parse_fail("/schema_version", "unsupported schema version");
  }
  const FieldParams fp = read_field_params(member(j, "field_params", ""), "/field_params");
  std::optional<Field> field;
  try {
    field.emplace(fp);
  } catch (const Error& e) {
    instance_fail("/field_params", e.what());
  }
  PoseidonParams pp = read_poseidon(*field, member(j, "poseidon", ""), "/poseidon");
  return {*field, std::move(pp)};
}

json write(Point p) { return json::array({dec(p.x), dec(p.y)}); }

Point read_point(const json& j, const std::string& ptr) {
  if (!j.is_array() || j.size() != 2) parse_fail(ptr, "expected [x, y]");
  return {read_coord(j[0], at(ptr, std::size_t{0})), read_coord(j[1], at(ptr, std::size_t{1}))};
}

json write(const Circle& c) { return {{"u", dec(c.u)}, {"v", dec(c.v)}, {"r", dec(c.r)}}; }

Circle read_circle(const json& j, const std::string& ptr) {
  return {read_coord(member(j, "u", ptr), at(ptr, "u")), read_coord(member(j, "v", ptr), at(ptr, "v")),
          read_coord(member(j, "r", ptr), at(ptr, "r"))};
}

json write(const Triangle& t) { return json::array({write(t.v[0]), write(t.v[1]), write(t.v[2])}); }

Triangle read_triangle(const json& j, const std::string& ptr) {
  if (!j.is_array() || j.size() != 3) parse_fail(ptr, "expected three vertices");
  Triangle t{{read_point(j[0], at(ptr, std::size_t{0})), read_point(j[1], at(ptr, std::size_t{1})),
              read_point(j[2], at(ptr, std::size_t{2}))}};
  const i128 a = localcalc::area_dbl_sgn(t);
  if (a == 0) instance_fail(ptr, "degenerate triangle");
  if (a < 0) std::swap(t.v[1], t.v[2]);
  return t;
}

json write(const Rect& r) { return {{"x0", dec(r.x0)}, {"y0", dec(r.y0)}, {"x1", dec(r.x1)}, {"y1", dec(r.y1)}}; }

Rect read_rect(const json& j, const std::string& ptr) {
  Rect r{read_coord(member(j, "x0", ptr), at(ptr, "x0")), read_coord(member(j, "y0", ptr), at(ptr, "y0")),
         read_coord(member(j, "x1", ptr), at(ptr, "x1")), read_coord(member(j, "y1", ptr), at(ptr, "y1"))};
  if (r.x0 > r.x1 || r.y0 > r.y1) instance_fail(ptr, "empty rectangle");
  return r;
}

json write(const Trail& t) {
  json pts = json::array();
  for (const Point& p : t.points) pts.push_back(write(p));
  return {{"declared_len", std::to_string(t.declared_len)}, {"points", pts}};
}

Trail read_trail(const json& j, const std::string& ptr) {
  Trail t;
  t.points = read_pair_list(array_member(j, "points", ptr), at(ptr, "points"));
  t.declared_len = j.contains("declared_len") ? read_size(j["declared_len"], at(ptr, "declared_len")) : t.points.size();
  return t;
}

json write(const SubsidyPolicy& p) { return {{"d_req", dec(p.d_req)}, {"p_req", dec(p.p_req)}}; }

SubsidyPolicy read_subsidy_policy(const json& j, const std::string& ptr) {
  return {read_coord(member(j, "d_req", ptr), at(ptr, "d_req")), read_coord(member(j, "p_req", ptr), at(ptr, "p_req"))};
}

json write(const TaxPolicy& p) { return {{"d_max", dec(p.d_max)}}; }

TaxPolicy read_tax_policy(const json& j, const std::string& ptr) {
  return {read_coord(member(j, "d_max", ptr), at(ptr, "d_max"))};
}

json write(const StatementInstance& inst) {
  return std::visit(
      [](const auto& in) -> json {
        json j;
        j["schema_version"] = std::to_string(kSchemaVersion);
        j["field_params"] = write(in.field.params());
        j["poseidon"] = write(in.field, in.pp);
        j["trail"] = write(in.trail);
        j["h_ex"] = u128_to_string(in.h_ex.value);
        j["policy"] = write(in.policy);
        if constexpr (std::is_same_v<std::decay_t<decltype(in)>, EvInstance>) {
          j["kind"] = "ev";
          j["sizes"] = {{"n_traj", std::to_string(in.n_traj)}, {"n_circ", std::to_string(in.circles.circles.size())}};
          json cs = json::array();
          for (const auto& c : in.circles.circles) cs.push_back(write(c));
          j["geometry"] = {{"circles", cs}};
        } else {
          j["kind"] = "tax";
          j["sizes"] = {{"n_traj", std::to_string(in.n_traj)}, {"n_tri", std::to_string(in.triangles.triangles.size())}};
          json ts = json::array();
          for (const auto& t : in.triangles.triangles) ts.push_back(write(t));
          j["geometry"] = {{"triangles", ts}};
          if (in.region) j["geometry"]["region"] = write(*in.region);
        }
        return j;
      },
      inst);
}

StatementInstance read_instance(const json& j) {
  if (!j.is_object()) parse_fail("", "expected an object");
  if (read_int(member(j, "schema_version", ""), "/schema_version") != kSchemaVersion) {
    parse_fail("/schema_version", "unsupported schema version");
  }
  const json& kind = member(j, "kind", "");
  if (!kind.is_string() || (kind != "ev" && kind != "tax")) parse_fail("/kind", "expected \"ev\" or \"tax\"");

  const FieldParams fp = read_field_params(member(j, "field_params", ""), "/field_params");
  std::optional<Field> field;
  try {
    field.emplace(fp);
  } catch (const Error& e) {
    instance_fail("/field_params", e.what());
  }
  const PoseidonParams pp = read_poseidon(*field, member(j, "poseidon", ""), "/poseidon");
  const json& sizes = member(j, "sizes", "");
  const std::size_t n_traj = read_size(member(sizes, "n_traj", "/sizes"), "/sizes/n_traj");
  const FieldElement h_ex = read_element(*field, member(j, "h_ex", ""), "/h_ex");
  Trail trail = read_trail(member(j, "trail", ""), "/trail");
  const unsigned k = fp.coord_bits;
  for (std::size_t i = 0; i < trail.points.size(); ++i) {
    const Point p = trail.points[i];
    for (int c = 0; c < 2; ++c) {
      const Coord v = c == 0 ? p.x : p.y;
      if (v < 0 || static_cast<u128>(v) >= (u128{1} << k)) {
        instance_fail("/trail/points/" + std::to_string(i) + "/" + std::to_string(c),
                      "coordinate outside [0, 2^" + std::to_string(k) + ")");
      }
    }
  }
  const json& geometry = member(j, "geometry", "");

  StatementInstance inst;
  if (kind == "ev") {
    const json& cs = array_member(geometry, "circles", "/geometry");
    CircleSet circles;
    for (std::size_t i = 0; i < cs.size(); ++i) circles.circles.push_back(read_circle(cs[i], at("/geometry/circles", i)));
    if (read_size(member(sizes, "n_circ", "/sizes"), "/sizes/n_circ") != circles.circles.size()) {
      instance_fail("/sizes/n_circ", "does not match the number of circles");
    }
    inst = EvInstance{*field, pp, n_traj, h_ex, read_subsidy_policy(member(j, "policy", ""), "/policy"),
                      std::move(circles), std::move(trail)};
  } else {
    const json& ts = array_member(geometry, "triangles", "/geometry");
    TriangleSet tris;
    for (std::size_t i = 0; i < ts.size(); ++i) tris.triangles.push_back(read_triangle(ts[i], at("/geometry/triangles", i)));
    if (read_size(member(sizes, "n_tri", "/sizes"), "/sizes/n_tri") != tris.triangles.size()) {
      instance_fail("/sizes/n_tri", "does not match the number of triangles");
    }
    std::optional<Rect> region;
    if (geometry.contains("region")) region = read_rect(geometry["region"], "/geometry/region");
    inst = TaxInstance{*field, pp, n_traj, h_ex, read_tax_policy(member(j, "policy", ""), "/policy"),
                       std::move(tris), std::move(trail), region};
  }
  try {
    std::visit([](const auto& in) { statements::validate(in); }, inst);
  } catch (const Error& e) {
    instance_fail("", e.what());
  }
  return inst;
}

}  // namespace zkpol::codec
