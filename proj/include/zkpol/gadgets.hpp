#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "zkpol/circuit.hpp"
#include "zkpol/localcalc.hpp"
#include "zkpol/poseidon.hpp"

namespace zkpol::gadgets {

/// Little-endian bits; each bit is boolean-asserted and their weighted sum is
/// asserted equal to the source wire.
struct BitVector {
  std::vector<Wire> bits;
  unsigned width = 0;
};

enum class SqrtMode { Both, LowerOnly, UpperOnly };

void assert_boolean(ConstraintSystem& cs, Wire w);

/// Bits come from the low k bits of the prover-side value. A value >= 2^k
/// leaves the system unsatisfiable.
BitVector decompose_bits(ConstraintSystem& cs, Wire w, unsigned k);

Wire boolean_and(ConstraintSystem& cs, Wire a, Wire b);
Wire boolean_or(ConstraintSystem& cs, Wire a, Wire b);

/// 1 iff a <= b, for values in [0, 2^k): top bit of (b - a + 2^k) over k+1 bits.
Wire leq(ConstraintSystem& cs, Wire a, Wire b, unsigned k);
void assert_leq(ConstraintSystem& cs, Wire a, Wire b, unsigned k);

/// Signed range check for v in (-2^m, 2^m): 1 iff v >= 0.
Wire is_nonneg(ConstraintSystem& cs, Wire v, unsigned m);

/// Prover supplies d = isqrt(sq) (or `claimed`, for adversarial tests) with
/// d range-checked to k bits. Both asserts d^2 <= sq < (d+1)^2; the one-sided
/// modes keep only one inequality. Requires sq < 2^(2k).
Wire sqrt_floor(ConstraintSystem& cs, Wire sq, unsigned k, SqrtMode mode,
                std::optional<FieldElement> claimed = std::nullopt);

std::vector<Wire> poseidon_permute(ConstraintSystem& cs, std::span<const Wire> state, const PoseidonParams& pp);
/// Circuit counterpart of poseidon::hash. Throws EmptyMessage.
Wire poseidon_hash(ConstraintSystem& cs, std::span<const Wire> msg, const PoseidonParams& pp);

/// OR over circles of (x-u_i)^2 + (y-v_i)^2 <= s_i, with s_i the squared radii.
Wire check_inside(ConstraintSystem& cs, std::span<const Wire> u, std::span<const Wire> v, std::span<const Wire> s,
                  Wire x, Wire y, unsigned coord_bits);

/// Doubled signed area; positive for counterclockwise vertices.
Wire area_dbl(ConstraintSystem& cs, Wire a1, Wire b1, Wire a2, Wire b2, Wire a3, Wire b3);

/// Wires s, t from the prover-local coordinates, sets u = A - s - t, asserts
/// u*a + s*a2 + t*a3 reconstructs (x*A, y*A) and returns [s, t, u >= 0].
Wire check_inside_triangle(ConstraintSystem& cs, const std::array<Wire, 3>& a, const std::array<Wire, 3>& b, Wire x,
                           Wire y, const localcalc::BaryCoords& bc, unsigned coord_bits);

/// Oblivious row selection with a prover-supplied 0/1 vector that must sum to 1.
/// Returns the scalar product of the vector with each column of `table`.
std::vector<Wire> lookup_with_selector(ConstraintSystem& cs, std::span<const FieldElement> selector,
                                       const std::vector<std::vector<Wire>>& table);
/// `index` is 1-based; the selector is its characteristic vector.
std::vector<Wire> lookup(ConstraintSystem& cs, std::size_t index, const std::vector<std::vector<Wire>>& table);

/// Bit width for is_nonneg on barycentric coordinates.
constexpr unsigned barycentric_bits(unsigned coord_bits) { return 2 * coord_bits + 3; }

}  // namespace zkpol::gadgets
