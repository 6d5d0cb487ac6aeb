#include "zkpol/field.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <mutex>

namespace zkpol {

namespace {

struct Wide {
  u128 hi;
  u128 lo;
};

Wide mul_wide(u128 a, u128 b) {
  const u128 mask = ~std::uint64_t{0};
  const u128 a0 = a & mask, a1 = a >> 64;
  const u128 b0 = b & mask, b1 = b >> 64;
  const u128 p00 = a0 * b0;
  const u128 p01 = a0 * b1;
  const u128 p10 = a1 * b0;
  const u128 p11 = a1 * b1;
  const u128 mid = (p00 >> 64) + (p01 & mask) + (p10 & mask);
  const u128 lo = (p00 & mask) | (mid << 64);
  const u128 hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
  return {hi, lo};
}

u128 mulmod_slow(u128 a, u128 b, u128 m) {
  // m < 2^127, so doubling a residue never overflows.
  u128 r = 0;
  for (int i = 127; i >= 0; --i) {
    r <<= 1;
    if (r >= m) r -= m;
    if ((b >> i) & 1) {
      r += a;
      if (r >= m) r -= m;
    }
  }
  return r;
}

u128 powmod(u128 base, u128 e, u128 m) {
  u128 r = 1 % m;
  base %= m;
  while (e) {
    if (e & 1) r = mulmod_slow(r, base, m);
    base = mulmod_slow(base, base, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

std::string u128_to_string(u128 v) {
  if (v == 0) return "0";
  std::string out;
  while (v) {
    out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::string i128_to_string(i128 v) {
  if (v < 0) return "-" + u128_to_string(static_cast<u128>(-(v + 1)) + 1);
  return u128_to_string(static_cast<u128>(v));
}

u128 u128_from_string(std::string_view s) {
  if (s.empty()) throw Error(ErrorCode::ParseError, "empty integer string");
  u128 v = 0;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    s.remove_prefix(2);
    if (s.size() > 32) throw Error(ErrorCode::ParseError, "hex integer exceeds 128 bits");
    for (char c : s) {
      int d;
      if (c >= '0' && c <= '9') d = c - '0';
      else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
      else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
      else throw Error(ErrorCode::ParseError, "bad hex digit in '" + std::string(s) + "'");
      v = (v << 4) | static_cast<u128>(d);
    }
    return v;
  }
  const u128 max = ~u128{0};
  for (char c : s) {
    if (c < '0' || c > '9') throw Error(ErrorCode::ParseError, "bad digit in '" + std::string(s) + "'");
    const u128 d = static_cast<u128>(c - '0');
    if (v > (max - d) / 10) throw Error(ErrorCode::ParseError, "integer exceeds 128 bits");
    v = v * 10 + d;
  }
  return v;
}

i128 i128_from_string(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    s.remove_prefix(1);
  }
  const u128 mag = u128_from_string(s);
  const u128 limit = u128{1} << 127;
  if (negative ? mag > limit : mag >= limit) throw Error(ErrorCode::ParseError, "integer exceeds signed 128 bits");
  return negative ? static_cast<i128>(~mag + 1) : static_cast<i128>(mag);
}

unsigned bit_length(u128 v) {
  unsigned n = 0;
  while (v) {
    ++n;
    v >>= 1;
  }
  return n;
}

bool is_probable_prime(u128 n) {
  static constexpr std::array<unsigned, 24> bases{2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                                                  41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89};
  if (n < 2) return false;
  for (unsigned b : bases) {
    if (n == b) return true;
    if (n % b == 0) return false;
  }
  if (n >> 127) return false;  // mulmod_slow needs n < 2^127
  u128 d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (unsigned b : bases) {
    u128 x = powmod(b, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mulmod_slow(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

namespace {

// Primality is the expensive part of construction and the modulus rarely varies.
bool is_prime_cached(u128 n) {
  static std::mutex mu;
  static std::map<u128, bool> seen;
  std::lock_guard lock(mu);
  if (auto it = seen.find(n); it != seen.end()) return it->second;
  const bool prime = is_probable_prime(n);
  if (seen.size() < 64) seen.emplace(n, prime);
  return prime;
}

}  // namespace

Field::Field(FieldParams params) : params_(params) {
  const u128 p = params_.modulus;
  modulus_bits_ = bit_length(p);
  if (modulus_bits_ > 127) throw Error(ErrorCode::InvalidParams, "modulus must be below 2^127");
  if (params_.coord_bits == 0) throw Error(ErrorCode::InvalidParams, "coord_bits must be positive");
  if (!is_prime_cached(p)) throw Error(ErrorCode::InvalidParams, "modulus " + u128_to_string(p) + " is not prime");
  const unsigned headroom = OverflowLedger::field_headroom_bits(params_.coord_bits);
  if (headroom >= 127 || p <= (u128{1} << headroom)) {
    throw Error(ErrorCode::InvalidParams,
                "modulus must exceed 2^" + std::to_string(headroom) + " for coord_bits " +
                    std::to_string(params_.coord_bits));
  }
  if (((p + 1) & p) == 0) mersenne_exponent_ = modulus_bits_;
}

u128 Field::reduce_wide(u128 hi, u128 lo) const noexcept {
  const unsigned n = mersenne_exponent_;
  const u128 p = params_.modulus;
  // x = hi*2^128 + lo < 2^(2n); x mod (2^n - 1) = (x & p) + (x >> n), folded.
  u128 low = lo & p;
  u128 high = (hi << (128 - n)) | (lo >> n);
  u128 r = low + high;  // < 2^(n+1) <= 2^128
  r = (r & p) + (r >> n);
  if (r >= p) r -= p;
  return r;
}

FieldElement Field::add(FieldElement a, FieldElement b) const noexcept {
  u128 r = a.value + b.value;
  if (r >= params_.modulus) r -= params_.modulus;
  return {r};
}

FieldElement Field::sub(FieldElement a, FieldElement b) const noexcept {
  return {a.value >= b.value ? a.value - b.value : a.value + (params_.modulus - b.value)};
}

FieldElement Field::neg(FieldElement a) const noexcept {
  return {a.value == 0 ? 0 : params_.modulus - a.value};
}

FieldElement Field::mul(FieldElement a, FieldElement b) const noexcept {
  const u128 p = params_.modulus;
  if (modulus_bits_ <= 64) return {(a.value * b.value) % p};
  if (mersenne_exponent_ != 0) {
    const Wide w = mul_wide(a.value, b.value);
    return {reduce_wide(w.hi, w.lo)};
  }
  return {mulmod_slow(a.value, b.value, p)};
}

FieldElement Field::arith(ArithKind kind, FieldElement a, FieldElement b) const noexcept {
  switch (kind) {
    case ArithKind::Add: return add(a, b);
    case ArithKind::Sub: return sub(a, b);
    case ArithKind::Mul: return mul(a, b);
  }
  return zero();
}

FieldElement Field::pow(FieldElement base, u128 exponent) const noexcept {
  FieldElement r = one();
  while (exponent) {
    if (exponent & 1) r = mul(r, base);
    base = mul(base, base);
    exponent >>= 1;
  }
  return r;
}

FieldElement Field::inv(FieldElement a) const {
  if (a.value == 0) throw Error(ErrorCode::InversionOfZero, "cannot invert zero");
  return pow(a, params_.modulus - 2);
}

FieldElement Field::from_signed(i128 n) const {
  const u128 half = params_.modulus / 2;  // |n| < p/2  <=>  |n| <= (p-1)/2
  const u128 mag = n < 0 ? static_cast<u128>(-(n + 1)) + 1 : static_cast<u128>(n);
  if (mag > half) throw Error(ErrorCode::OutOfRange, i128_to_string(n) + " outside (-p/2, p/2)");
  return {n < 0 ? params_.modulus - mag : mag};
}

i128 Field::to_signed(FieldElement a) const noexcept {
  if (a.value > params_.modulus / 2) return -static_cast<i128>(params_.modulus - a.value);
  return static_cast<i128>(a.value);
}

}  // namespace zkpol
