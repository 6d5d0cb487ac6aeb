#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "zkpol/error.hpp"

namespace zkpol {

using u128 = unsigned __int128;
using i128 = __int128;

std::string u128_to_string(u128 v);
std::string i128_to_string(i128 v);
/// Parses a non-negative decimal (or 0x-prefixed hex) string. Throws ParseError.
u128 u128_from_string(std::string_view s);
/// Parses an optionally signed decimal string. Throws ParseError.
i128 i128_from_string(std::string_view s);
unsigned bit_length(u128 v);

/// Deterministic Miller-Rabin with the first 24 prime bases.
bool is_probable_prime(u128 n);

struct FieldElement {
  u128 value = 0;

  friend constexpr bool operator==(FieldElement, FieldElement) = default;
  friend constexpr auto operator<=>(FieldElement a, FieldElement b) { return a.value <=> b.value; }
};

enum class ArithKind { Add, Sub, Mul };

// Bounds that size every in-circuit comparison. With coordinates below 2^k:
//   squared distance             < 2^(2k+1)
//   doubled triangle area        < 2^(2k+3)
//   barycentric reconstruction   < 2^(3k+4)   (three area x coordinate products)
//   tot * P_req                  < 2^(k + 1 + log2(n_traj) + 7)
// The field must exceed 2^(3k+6) so none of these wrap.
struct OverflowLedger {
  static constexpr unsigned squared_distance_bits(unsigned k) { return 2 * k + 1; }
  static constexpr unsigned doubled_area_bits(unsigned k) { return 2 * k + 3; }
  static constexpr unsigned reconstruction_bits(unsigned k) { return 3 * k + 4; }
  static constexpr unsigned field_headroom_bits(unsigned k) { return 3 * k + 6; }
};

struct FieldParams {
  u128 modulus = (u128(1) << 127) - 1;
  unsigned coord_bits = 24;

  friend bool operator==(const FieldParams&, const FieldParams&) = default;
};

/// Prime field Z/pZ for p < 2^127. Moduli of the form 2^n - 1 take a
/// folding reduction; anything else falls back to shift-and-add.
class Field {
 public:
  Field() : Field(FieldParams{}) {}
  explicit Field(FieldParams params);

  const FieldParams& params() const noexcept { return params_; }
  u128 modulus() const noexcept { return params_.modulus; }
  unsigned coord_bits() const noexcept { return params_.coord_bits; }
  unsigned modulus_bits() const noexcept { return modulus_bits_; }

  FieldElement zero() const noexcept { return {0}; }
  FieldElement one() const noexcept { return {1}; }
  FieldElement element(u128 v) const noexcept { return {v % params_.modulus}; }

  FieldElement add(FieldElement a, FieldElement b) const noexcept;
  FieldElement sub(FieldElement a, FieldElement b) const noexcept;
  FieldElement mul(FieldElement a, FieldElement b) const noexcept;
  FieldElement neg(FieldElement a) const noexcept;
  FieldElement arith(ArithKind kind, FieldElement a, FieldElement b) const noexcept;
  FieldElement pow(FieldElement base, u128 exponent) const noexcept;
  /// Throws InversionOfZero.
  FieldElement inv(FieldElement a) const;

  /// n >= 0 maps to n, n < 0 to p - |n|. Requires |n| < p/2, else OutOfRange.
  FieldElement from_signed(i128 n) const;
  /// Inverse of from_signed: values >= p/2 are read as negative.
  i128 to_signed(FieldElement a) const noexcept;

  friend bool operator==(const Field& a, const Field& b) { return a.params_ == b.params_; }

 private:
  u128 reduce_wide(u128 hi, u128 lo) const noexcept;

  FieldParams params_;
  unsigned modulus_bits_ = 0;
  unsigned mersenne_exponent_ = 0;  // n when p = 2^n - 1, else 0
};

}  // namespace zkpol
