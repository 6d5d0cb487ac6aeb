#include <filesystem>
#include <fstream>
#include <random>
#include <unistd.h>
#include <sstream>

#include "doctest.h"
#include "zkpol/appio.hpp"
#include "zkpol/codec.hpp"
#include "zkpol/localcalc.hpp"

using namespace zkpol;
using namespace zkpol::appio;
using json = nlohmann::ordered_json;

namespace {

FixtureSpec spec_for(StatementKind kind, FixtureMode mode, std::uint64_t seed) {
  FixtureSpec s;
  s.seed = seed;
  s.kind = kind;
  s.mode = mode;
  s.n_traj = 12;
  s.n_geo = kind == StatementKind::Ev ? 3 : 8;
  s.coord_bound = 2048;
  return s;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Unsupported;
}

std::string message_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

// Unit squares of the integer grid covered by any corridor rectangle,
// clipped to the box: an independent count of the corridor's area.
i128 lattice_corridor_area(const std::vector<Rect>& rects, const Rect& box) {
  i128 area = 0;
  for (Coord x = box.x0; x < box.x1; ++x) {
    for (Coord y = box.y0; y < box.y1; ++y) {
      for (const Rect& r : rects) {
        if (x >= r.x0 && x + 1 <= r.x1 && y >= r.y0 && y + 1 <= r.y1) {
          ++area;
          break;
        }
      }
    }
  }
  return area;
}

i128 doubled_area(const TriangleSet& ts) {
  i128 a = 0;
  for (const auto& t : ts.triangles) {
    const i128 s = localcalc::area_dbl_sgn(t);
    CHECK(s > 0);
    a += s;
  }
  return a;
}

struct Cli {
  int rc = -1;
  std::string out, err;
};

Cli cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  Cli r;
  r.rc = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() / ("zkpol_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name, const std::string& content) const {
    const auto p = path / name;
    std::ofstream(p) << content;
    return p.string();
  }
};

}  // namespace

TEST_CASE("instance files round-trip") {
  for (auto kind : {StatementKind::Ev, StatementKind::Tax}) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto inst = gen_fixture(spec_for(kind, FixtureMode::Compliant, seed));
      const auto text = serialize_instance(inst);
      CHECK(parse_instance(text) == inst);
      CHECK(serialize_instance(parse_instance(text)) == text);
    }
  }
}

TEST_CASE("non-derived Poseidon constants are written out") {
  auto inst = std::get<EvInstance>(gen_fixture(spec_for(StatementKind::Ev, FixtureMode::Compliant, 1)));
  inst.pp.round_constants[5] = inst.field.add(inst.pp.round_constants[5], inst.field.one());
  inst.h_ex = statements::trail_hash(inst.field, inst.pp, inst.trail, inst.n_traj);
  const auto text = serialize_instance(inst);
  CHECK(json::parse(text)["poseidon"].contains("round_constants"));
  CHECK(std::get<EvInstance>(parse_instance(text)) == inst);
}

TEST_CASE("load_instance") {
  const auto inst = gen_fixture(spec_for(StatementKind::Tax, FixtureMode::Compliant, 3));
  const json base = codec::write(inst);

  SUBCASE("valid fixture") {
    TempDir dir;
    const auto path = dir.file("t.json", base.dump());
    const auto loaded = load_instance(path);
    CHECK(std::get<TaxInstance>(loaded).triangles.triangles.size() == 8);
  }
  SUBCASE("clockwise triangles are re-oriented") {
    json j = base;
    auto tri = j["geometry"]["triangles"][0];
    j["geometry"]["triangles"][0] = json::array({tri[0], tri[2], tri[1]});
    const auto loaded = std::get<TaxInstance>(codec::read_instance(j));
    CHECK(loaded.triangles == std::get<TaxInstance>(inst).triangles);
    CHECK(localcalc::area_dbl_sgn(loaded.triangles.triangles[0]) > 0);
  }
  SUBCASE("coordinate out of range") {
    json j = base;
    j["trail"]["points"][2][1] = std::to_string(1 << 24);
    CHECK(code_of([&] { codec::read_instance(j); }) == ErrorCode::InstanceError);
    CHECK(message_of([&] { codec::read_instance(j); }).find("/trail/points/2/1") != std::string::npos);
  }
  SUBCASE("schema errors carry a JSON pointer") {
    json j = base;
    j["policy"].erase("d_max");
    CHECK(code_of([&] { codec::read_instance(j); }) == ErrorCode::ParseError);
    CHECK(message_of([&] { codec::read_instance(j); }).find("/policy/d_max") != std::string::npos);
    json k = base;
    k["sizes"]["n_tri"] = "7";
    CHECK(message_of([&] { codec::read_instance(k); }).find("/sizes/n_tri") != std::string::npos);
    json l = base;
    l["geometry"]["triangles"][1][0][0] = "x";
    CHECK(message_of([&] { codec::read_instance(l); }).find("/geometry/triangles/1/0/0") != std::string::npos);
    CHECK(code_of([&] { parse_instance("{not json"); }) == ErrorCode::ParseError);
  }
  SUBCASE("numbers are accepted as well as strings") {
    json j = base;
    j["policy"]["d_max"] = std::stoll(j["policy"]["d_max"].get<std::string>());
    CHECK(codec::read_instance(j) == inst);
  }
  SUBCASE("invariant violations") {
    json j = base;
    j["geometry"]["triangles"][0] = json::array({json::array({"0", "0"}), json::array({"1", "1"}), json::array({"2", "2"})});
    CHECK(code_of([&] { codec::read_instance(j); }) == ErrorCode::InstanceError);
    json k = base;
    k["h_ex"] = codec::write(inst)["field_params"]["modulus"];
    CHECK(code_of([&] { codec::read_instance(k); }) == ErrorCode::InstanceError);
  }
}

TEST_CASE("gen_fixture") {
  SUBCASE("examples") {
    CHECK(statements::oracle(gen_fixture(spec_for(StatementKind::Ev, FixtureMode::Compliant, 1))));
    CHECK_FALSE(statements::oracle(gen_fixture(spec_for(StatementKind::Tax, FixtureMode::NonCompliant, 1))));
    const auto b = std::get<EvInstance>(gen_fixture(spec_for(StatementKind::Ev, FixtureMode::Boundary, 1)));
    CHECK(localcalc::ev_stats(b.trail, b.circles).tot == b.policy.d_req);
    CHECK(statements::check(b).satisfied);
  }
  SUBCASE("deterministic in the spec") {
    const auto s = spec_for(StatementKind::Tax, FixtureMode::Compliant, 99);
    CHECK(gen_fixture(s) == gen_fixture(s));
    auto t = s;
    t.seed = 100;
    CHECK_FALSE(gen_fixture(s) == gen_fixture(t));
  }
  SUBCASE("verdict matches the mode over 100 seeds") {
    for (auto kind : {StatementKind::Ev, StatementKind::Tax}) {
      for (auto mode : {FixtureMode::Compliant, FixtureMode::NonCompliant, FixtureMode::Boundary}) {
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
          const auto inst = gen_fixture(spec_for(kind, mode, seed));
          REQUIRE(statements::oracle(inst) == (mode != FixtureMode::NonCompliant));
          if (mode == FixtureMode::Boundary) {
            if (kind == StatementKind::Ev) {
              const auto& e = std::get<EvInstance>(inst);
              CHECK(localcalc::ev_stats(e.trail, e.circles).tot == e.policy.d_req);
            } else {
              const auto& t = std::get<TaxInstance>(inst);
              const auto st = localcalc::tax_stats(t.trail, t.triangles);
              CHECK(st.tot - st.inside == t.policy.d_max);
            }
          }
        }
      }
    }
  }
  SUBCASE("fixed thresholds") {
    auto s = spec_for(StatementKind::Ev, FixtureMode::Compliant, 5);
    s.subsidy = SubsidyPolicy{100, 50};
    const auto e = std::get<EvInstance>(gen_fixture(s));
    CHECK(e.policy == SubsidyPolicy{100, 50});
    CHECK(statements::oracle(e));
  }
  SUBCASE("caps and infeasible specs") {
    auto s = spec_for(StatementKind::Ev, FixtureMode::Compliant, 1);
    s.n_traj = kMaxFixtureTraj + 1;
    CHECK(code_of([&] { gen_fixture(s); }) == ErrorCode::InvalidParams);
    s = spec_for(StatementKind::Ev, FixtureMode::Compliant, 1);
    s.subsidy = SubsidyPolicy{Coord{1} << 40, 0};
    CHECK(code_of([&] { gen_fixture(s); }) == ErrorCode::GenerationFailed);
    s.coord_bound = Coord{1} << 30;
    CHECK(code_of([&] { gen_fixture(s); }) == ErrorCode::InvalidParams);
  }
  SUBCASE("fixture specs parse") {
    const auto s = parse_fixture_spec(json::parse(R"({"seed":"7","kind":"tax","n_traj":"20","n_tri":"12","coord_bound":"512","mode":"boundary"})"));
    CHECK(s.seed == 7);
    CHECK(s.kind == StatementKind::Tax);
    CHECK(s.n_geo == 12);
    CHECK(s.mode == FixtureMode::Boundary);
    CHECK(code_of([&] { parse_fixture_spec(json::parse(R"({"seed":"1","kind":"ev","n_traj":"2"})")); }) ==
          ErrorCode::ParseError);
  }
}

TEST_CASE("corridor_triangulate") {
  const Rect box{0, 0, 40, 40};
  SUBCASE("horizontal road") {
    const auto ts = corridor_triangulate({{0, 20}, {40, 20}}, 3, box);
    CHECK(ts.triangles.size() == 4);
    CHECK(doubled_area(ts) == 2 * (40 * 40 - 40 * 6));
  }
  SUBCASE("margin covering the whole box") {
    CHECK(corridor_triangulate({{20, 20}, {20, 21}}, 50, box).triangles.empty());
  }
  SUBCASE("L-shaped road") {
    const std::vector<Point> road{{0, 10}, {25, 10}, {25, 40}};
    const auto ts = corridor_triangulate(road, 2, box);
    const std::vector<Rect> rects{{-2, 8, 27, 12}, {23, 8, 27, 42}};
    CHECK(doubled_area(ts) == 2 * (40 * 40 - lattice_corridor_area(rects, box)));
    // Points on the road are outside every triangle; points off it are inside one.
    CHECK_FALSE(localcalc::in_any_triangle({10, 10}, ts));
    CHECK_FALSE(localcalc::in_any_triangle({25, 30}, ts));
    CHECK(localcalc::in_any_triangle({10, 30}, ts));
    CHECK(localcalc::in_any_triangle({35, 2}, ts));
  }
  SUBCASE("random axis-aligned polylines") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<Point> road{{static_cast<Coord>(rng() % 41), static_cast<Coord>(rng() % 41)}};
      std::vector<Rect> rects;
      const Coord m = 1 + static_cast<Coord>(rng() % 4);
      for (int s = 0; s < 3; ++s) {
        Point next = road.back();
        (s % 2 ? next.x : next.y) = static_cast<Coord>(rng() % 41);
        road.push_back(next);
      }
      for (std::size_t i = 0; i + 1 < road.size(); ++i) {
        rects.push_back({std::min(road[i].x, road[i + 1].x) - m, std::min(road[i].y, road[i + 1].y) - m,
                         std::max(road[i].x, road[i + 1].x) + m, std::max(road[i].y, road[i + 1].y) + m});
      }
      const auto ts = corridor_triangulate(road, m, box);
      CHECK(doubled_area(ts) == 2 * (40 * 40 - lattice_corridor_area(rects, box)));
    }
  }
  SUBCASE("errors") {
    CHECK(code_of([&] { corridor_triangulate({{0, 0}, {5, 5}}, 2, box); }) == ErrorCode::Unsupported);
    CHECK(code_of([&] { corridor_triangulate({{0, 0}, {5, 0}}, 0, box); }) == ErrorCode::InvalidParams);
    CHECK(code_of([&] { corridor_triangulate({}, 1, box); }) == ErrorCode::InvalidParams);
  }
}

TEST_CASE("cli exit codes") {
  TempDir dir;
  const auto ev = gen_fixture(spec_for(StatementKind::Ev, FixtureMode::Compliant, 1));
  const auto ev_path = dir.file("ev_compliant.json", serialize_instance(ev));
  json edited = codec::write(ev);
  edited["h_ex"] = "12345";
  const auto edited_path = dir.file("ev_edited.json", edited.dump());
  const auto bad_path = dir.file("ev_false.json", serialize_instance(gen_fixture(spec_for(StatementKind::Ev, FixtureMode::NonCompliant, 1))));
  const auto garbage = dir.file("garbage.json", "{\"kind\": ");

  const auto check_ok = cli({"check", ev_path});
  CHECK(check_ok.rc == 0);
  CHECK(json::parse(check_ok.out)["satisfied"] == true);
  const auto edited_check = cli({"check", edited_path});
  CHECK(edited_check.rc == 1);
  CHECK(json::parse(edited_check.out)["satisfied"] == false);
  CHECK(cli({"check", bad_path}).rc == 1);
  CHECK(cli({"check", garbage}).rc == 2);
  CHECK(cli({"check", (dir.path / "missing.json").string()}).rc == 2);

  CHECK(cli({"oracle", ev_path}).rc == 0);
  CHECK(cli({"oracle", bad_path}).rc == 1);
  CHECK(cli({"oracle", edited_path}).rc == 0);  // the oracle ignores h_ex

  CHECK(cli({"fuzz", ev_path, "--mutations", "12"}).rc == 0);
  CHECK(cli({"fuzz", bad_path, "--mutations", "12"}).rc == 0);

  const auto cost1 = cli({"cost", "--kind", "ev", "--n-traj", "64", "--n-circ", "4"});
  const auto cost2 = cli({"cost", "--kind", "ev", "--n-traj", "64", "--n-circ", "4"});
  CHECK(cost1.rc == 0);
  CHECK(cost1.out == cost2.out);
  const auto csv = cli({"cost", "--kind", "tax", "--n-traj", "8", "--n-tri", "4", "--csv"});
  CHECK(csv.rc == 0);
  CHECK(csv.out.rfind("kind,n_traj,n_geo,n_mul,n_add,n_assert,n_prover_inputs\ntax,8,4,", 0) == 0);
  CHECK(cli({"cost", "--kind", "ev", "--n-traj", "8"}).rc == 2);
  CHECK(cli({"cost", "--kind", "ev", "--n-traj", "8", "--n-circ", "2", "--n-tri", "2"}).rc == 2);
  CHECK(cli({"cost", "--kind", "bus", "--n-traj", "8", "--n-circ", "2"}).rc == 2);

  for (const char* scenario : {"honest", "corrupt-prover", "corrupt-verifier"}) {
    const auto s = cli({"session", "--scenario", scenario});
    CHECK(s.rc == 0);
    CHECK(json::parse(s.out)["schema_version"] == "1");
  }
  CHECK(cli({"session", "--scenario", "honest", "--instance", ev_path}).rc == 0);
  CHECK(cli({"session", "--scenario", "both"}).rc == 2);

  const auto spec = dir.file("spec.json", R"({"seed":"1","kind":"ev","n_traj":"10","n_circ":"2","mode":"compliant"})");
  const auto gen = cli({"gen", spec});
  CHECK(gen.rc == 0);
  CHECK(parse_instance(gen.out) == gen_fixture(parse_fixture_spec(json::parse(R"({"seed":"1","kind":"ev","n_traj":"10","n_circ":"2"})"))));
  const auto infeasible = dir.file("inf.json", R"({"seed":"1","kind":"ev","n_traj":"10","n_circ":"2","policy":{"d_req":"1099511627776","p_req":"0"}})");
  CHECK(cli({"gen", infeasible}).rc == 2);

  CHECK(cli({}).rc == 2);
  CHECK(cli({"frobnicate"}).rc == 2);
  CHECK(cli({"--help"}).rc == 0);
}

TEST_CASE("parameter document golden") {
  // Written by the independent Python reference; constants spelled out.
  const auto golden_path = std::string(ZKPOL_TEST_DATA) + "/poseidon_params.json";
  std::ifstream in(golden_path);
  REQUIRE(in);
  const json golden = json::parse(in);
  const auto [field, pp] = codec::read_params(golden);
  CHECK(field == Field{});
  CHECK(pp == PoseidonParams::derive(field));
  CHECK(codec::write_params(field, pp) == golden);

  const auto shown = cli({"params"});
  CHECK(shown.rc == 0);
  CHECK(json::parse(shown.out) == golden);
  CHECK(cli({"params", "--check", golden_path}).rc == 0);

  TempDir dir;
  json edited = golden;
  edited["poseidon"]["round_constants"][7] = "1";
  CHECK(cli({"params", "--check", dir.file("edited.json", edited.dump())}).rc == 1);
  edited["schema_version"] = "2";
  CHECK(cli({"params", "--check", dir.file("version.json", edited.dump())}).rc == 2);
  edited = golden;
  edited["poseidon"]["mds"][0][0] = "0";
  edited["poseidon"]["mds"][0][1] = "0";
  edited["poseidon"]["mds"][0][2] = "0";
  CHECK(cli({"params", "--check", dir.file("singular.json", edited.dump())}).rc == 2);
}
