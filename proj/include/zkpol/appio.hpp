#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "zkpol/statements.hpp"

namespace zkpol::appio {

/// Instance files: see codec.hpp for the encoding and README.md for the schema.
StatementInstance parse_instance(std::string_view text);
StatementInstance load_instance(const std::filesystem::path& path);
std::string serialize_instance(const StatementInstance& inst);
void save_instance(const std::filesystem::path& path, const StatementInstance& inst);

enum class FixtureMode { Compliant, NonCompliant, Boundary };
const char* fixture_mode_name(FixtureMode m) noexcept;

inline constexpr std::size_t kMaxFixtureTraj = 4096;

struct FixtureSpec {
  std::uint64_t seed = 1;
  StatementKind kind = StatementKind::Ev;
  std::size_t n_traj = 16;
  std::size_t n_geo = 4;  // circles or triangles
  Coord coord_bound = 4096;
  FixtureMode mode = FixtureMode::Compliant;
  FieldParams field_params{};
  /// Fixed thresholds; generation retries until the mode's verdict holds.
  std::optional<SubsidyPolicy> subsidy;
  std::optional<TaxPolicy> tax;
};

/// Reads {"seed", "kind", "n_traj", "n_circ" | "n_tri", "coord_bound", "mode",
/// optional "field_params" and "policy"}. Throws ParseError / InstanceError.
FixtureSpec parse_fixture_spec(const nlohmann::ordered_json& j);

/// Deterministic in the spec. Compliant and boundary fixtures are oracle-true,
/// non-compliant ones oracle-false; boundary fixtures put tot (subsidy) or the
/// taxed distance exactly on the threshold. Throws InvalidParams for sizes
/// beyond the caps and GenerationFailed when retries run out.
StatementInstance gen_fixture(const FixtureSpec& spec);

/// Triangulates bbox minus the corridor of half-width `margin` around an
/// axis-aligned polyline. The box is cut into a grid along the corridor
/// rectangles' edges and every grid cell outside the corridor becomes two
/// counterclockwise triangles. Throws Unsupported for a diagonal segment and
/// InvalidParams for margin <= 0 or an empty polyline.
TriangleSet corridor_triangulate(const std::vector<Point>& polyline, Coord margin, const Rect& bbox);

/// The zkpol command line. Exit codes: 0 success, 1 statement unsatisfied,
/// 2 usage or input error, 3 internal invariant violation.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zkpol::appio
