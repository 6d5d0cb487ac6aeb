#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "zkpol/circuit.hpp"
#include "zkpol/gadgets.hpp"
#include "zkpol/geometry.hpp"
#include "zkpol/poseidon.hpp"

namespace zkpol {

enum class StatementKind { Ev, Tax };

const char* statement_kind_name(StatementKind kind) noexcept;

/// EV subsidy: the trail covers at least d_req, and at least P_req percent of
/// it runs between points that both lie in some circle.
struct EvInstance {
  Field field;
  PoseidonParams pp;
  std::size_t n_traj = 0;
  FieldElement h_ex;
  SubsidyPolicy policy;
  CircleSet circles;
  Trail trail;

  friend bool operator==(const EvInstance&, const EvInstance&) = default;
};

/// Highway tax: at most d_max of the trail runs outside the triangulated
/// untaxed area. `region`, when present, is the box that the triangulation
/// and the road corridor together cover; honest trails must stay inside it.
struct TaxInstance {
  Field field;
  PoseidonParams pp;
  std::size_t n_traj = 0;
  FieldElement h_ex;
  TaxPolicy policy;
  TriangleSet triangles;
  Trail trail;
  std::optional<Rect> region;

  friend bool operator==(const TaxInstance&, const TaxInstance&) = default;
};

using StatementInstance = std::variant<EvInstance, TaxInstance>;

StatementKind kind_of(const StatementInstance& inst) noexcept;

namespace statements {

/// Overrides for adversarial testing; empty means honest prover.
struct Options {
  /// Defaults: Both for the subsidy statement, UpperOnly for the tax statement.
  std::optional<gadgets::SqrtMode> sqrt_mode;
  /// Per segment (index i-1 for the segment ending at point i).
  std::vector<std::optional<FieldElement>> distance_override;
  /// Per point, 1-based triangle index handed to lookup.
  std::vector<std::optional<std::size_t>> triangle_override;
};

struct BuiltStatement {
  std::vector<Wire> xs;
  std::vector<Wire> ys;
  Wire digest;
  Wire tot;
  Wire inside;  // cc for the subsidy statement, hw for the tax statement
  std::vector<Wire> distances;
};

/// Bit width of the final threshold comparisons (tot, cc, hw, tot * P_req).
constexpr unsigned accumulator_bits(unsigned coord_bits) { return 2 * coord_bits + 16; }
/// Width used for segment square roots: d < 2^(coord_bits + 1).
constexpr unsigned distance_bits(unsigned coord_bits) { return coord_bits + 1; }

/// Throw InstanceError on any type-invariant violation.
void validate(const EvInstance& inst);
void validate(const TaxInstance& inst);

/// The padded trail as the hashed message x_1..x_n || y_1..y_n.
std::vector<FieldElement> trail_message(const Field& field, const Trail& trail, std::size_t n_traj);
FieldElement trail_hash(const Field& field, const PoseidonParams& pp, const Trail& trail, std::size_t n_traj);

BuiltStatement build_ev_subsidy(const EvInstance& inst, ConstraintSystem& cs, const Options& opts = {});
BuiltStatement build_highway_tax(const TaxInstance& inst, ConstraintSystem& cs, const Options& opts = {});
BuiltStatement build(const StatementInstance& inst, ConstraintSystem& cs, const Options& opts = {});

/// Build into a fresh system and evaluate.
SatisfactionReport check(const StatementInstance& inst, const Options& opts = {});

/// Plaintext verdict of the policy on the instance's trail.
bool oracle(const StatementInstance& inst);

/// Counters for a statement of the given sizes, built on a dummy witness.
Counters statement_cost(StatementKind kind, std::size_t n_traj, std::size_t n_geo, const Field& field,
                        const PoseidonParams& pp, const Options& opts = {});

}  // namespace statements

}  // namespace zkpol
