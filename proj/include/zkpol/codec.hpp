#pragma once

#include <string>
#include <utility>

#include "json.hpp"
#include "zkpol/statements.hpp"

/// JSON encodings shared by instance files, fixtures and session transcripts.
/// Integers are written as decimal strings; readers also accept JSON numbers.
/// Reader errors are ParseError (malformed) or InstanceError (invariant
/// violated), with the offending JSON pointer at the start of the message.
namespace zkpol::codec {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Reads an integer field; `ptr` is the JSON pointer of `j` for diagnostics.
i128 read_int(const json& j, const std::string& ptr);
Coord read_coord(const json& j, const std::string& ptr);
std::size_t read_size(const json& j, const std::string& ptr);
const json& member(const json& j, const char* key, const std::string& ptr);

json write(const FieldParams& fp);
FieldParams read_field_params(const json& j, const std::string& ptr);

/// Round constants and MDS are written when `with_constants` is set or when
/// they differ from the ones derived from (seed, t, alpha, r_full, r_partial).
json write(const Field& field, const PoseidonParams& pp, bool with_constants = false);
PoseidonParams read_poseidon(const Field& field, const json& j, const std::string& ptr);

/// Standalone parameter document {schema_version, field_params, poseidon}
/// with every constant spelled out.
json write_params(const Field& field, const PoseidonParams& pp);
std::pair<Field, PoseidonParams> read_params(const json& j);

json write(Point p);
Point read_point(const json& j, const std::string& ptr);
json write(const Circle& c);
Circle read_circle(const json& j, const std::string& ptr);
/// Clockwise triangles are re-oriented by swapping vertices 2 and 3.
json write(const Triangle& t);
Triangle read_triangle(const json& j, const std::string& ptr);
json write(const Rect& r);
Rect read_rect(const json& j, const std::string& ptr);
json write(const Trail& t);
Trail read_trail(const json& j, const std::string& ptr);
json write(const SubsidyPolicy& p);
SubsidyPolicy read_subsidy_policy(const json& j, const std::string& ptr);
json write(const TaxPolicy& p);
TaxPolicy read_tax_policy(const json& j, const std::string& ptr);

json write(const StatementInstance& inst);
/// Parses and validates.
StatementInstance read_instance(const json& j);

}  // namespace zkpol::codec
