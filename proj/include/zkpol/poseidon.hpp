#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "zkpol/field.hpp"

namespace zkpol {

/// Poseidon instance: width t (rate t-1, one capacity lane), S-box x^alpha,
/// r_full full rounds split evenly around r_partial partial rounds.
///
/// Constant derivation (docs/poseidon.md has the byte-level description):
///   c_j = low (bitlen(p)-1) bits of SHAKE256(seed || be64(j))[0..16) read
///         big-endian, skipped if >= p; j = 0, 1, 2, ... until
///         t*(r_full + r_partial) constants are collected.
///   mds[i][j] = 1 / (i + (t + j)) for 0 <= i, j < t.
struct PoseidonParams {
  std::size_t t = 3;
  u128 alpha = 5;
  std::size_t r_full = 8;
  std::size_t r_partial = 56;
  std::string seed = "zkpol/poseidon/v1";
  std::vector<FieldElement> round_constants;  // round-major, t per round
  std::vector<std::vector<FieldElement>> mds;

  std::size_t rate() const noexcept { return t - 1; }
  std::size_t rounds() const noexcept { return r_full + r_partial; }
  FieldElement round_constant(std::size_t round, std::size_t lane) const { return round_constants[round * t + lane]; }
  bool is_full_round(std::size_t round) const noexcept {
    return round < r_full / 2 || round >= r_full / 2 + r_partial;
  }

  /// Derives constants and MDS for the given shape and validates the result.
  static PoseidonParams derive(const Field& field, std::string seed = "zkpol/poseidon/v1", std::size_t t = 3,
                               u128 alpha = 5, std::size_t r_full = 8, std::size_t r_partial = 56);

  /// Throws InvalidParams unless gcd(alpha, p-1) = 1, the MDS matrix is
  /// invertible and the constant count matches the shape.
  void validate(const Field& field) const;

  friend bool operator==(const PoseidonParams&, const PoseidonParams&) = default;
};

namespace poseidon {

/// SHAKE256(seed || be64(index)) truncated to `out_len` bytes.
std::vector<unsigned char> shake256_counter(std::string_view seed, std::uint64_t index, std::size_t out_len);

/// Plaintext permutation, in place.
void permute(const Field& field, const PoseidonParams& pp, std::span<FieldElement> state);

/// Sponge: lane 0 starts at from_signed(len(msg)), the message is added into
/// lanes 1..rate chunk by chunk (last chunk zero-padded), one permutation per
/// chunk, digest is lane 0. Throws EmptyMessage.
FieldElement hash(const Field& field, const PoseidonParams& pp, std::span<const FieldElement> msg);

}  // namespace poseidon

}  // namespace zkpol
