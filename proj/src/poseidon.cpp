#include "zkpol/poseidon.hpp"

#include <openssl/evp.h>

#include <memory>
#include <numeric>

namespace zkpol {

namespace poseidon {

std::vector<unsigned char> shake256_counter(std::string_view seed, std::uint64_t index, std::size_t out_len) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  unsigned char counter[8];
  for (int i = 0; i < 8; ++i) counter[i] = static_cast<unsigned char>(index >> (56 - 8 * i));
  std::vector<unsigned char> out(out_len);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_shake256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), seed.data(), seed.size()) != 1 ||
      EVP_DigestUpdate(ctx.get(), counter, sizeof counter) != 1 ||
      EVP_DigestFinalXOF(ctx.get(), out.data(), out.size()) != 1) {
    throw Error(ErrorCode::InvalidParams, "SHAKE256 unavailable");
  }
  return out;
}

void permute(const Field& field, const PoseidonParams& pp, std::span<FieldElement> state) {
  const std::size_t t = pp.t;
  std::vector<FieldElement> tmp(t);
  for (std::size_t r = 0; r < pp.rounds(); ++r) {
    for (std::size_t i = 0; i < t; ++i) state[i] = field.add(state[i], pp.round_constant(r, i));
    if (pp.is_full_round(r)) {
      for (std::size_t i = 0; i < t; ++i) state[i] = field.pow(state[i], pp.alpha);
    } else {
      state[0] = field.pow(state[0], pp.alpha);
    }
    for (std::size_t i = 0; i < t; ++i) {
      FieldElement acc = field.zero();
      for (std::size_t j = 0; j < t; ++j) acc = field.add(acc, field.mul(pp.mds[i][j], state[j]));
      tmp[i] = acc;
    }
    std::copy(tmp.begin(), tmp.end(), state.begin());
  }
}

FieldElement hash(const Field& field, const PoseidonParams& pp, std::span<const FieldElement> msg) {
  if (msg.empty()) throw Error(ErrorCode::EmptyMessage, "cannot hash an empty message");
  std::vector<FieldElement> state(pp.t, field.zero());
  state[0] = field.from_signed(static_cast<i128>(msg.size()));
  const std::size_t rate = pp.rate();
  for (std::size_t off = 0; off < msg.size(); off += rate) {
    for (std::size_t j = 0; j < rate && off + j < msg.size(); ++j) {
      state[1 + j] = field.add(state[1 + j], msg[off + j]);
    }
    permute(field, pp, state);
  }
  return state[0];
}

}  // namespace poseidon

PoseidonParams PoseidonParams::derive(const Field& field, std::string seed, std::size_t t, u128 alpha,
                                      std::size_t r_full, std::size_t r_partial) {
  PoseidonParams pp;
  pp.t = t;
  pp.alpha = alpha;
  pp.r_full = r_full;
  pp.r_partial = r_partial;
  pp.seed = std::move(seed);
  if (t < 2) throw Error(ErrorCode::InvalidParams, "poseidon width must be at least 2");
  if (r_full % 2 != 0) throw Error(ErrorCode::InvalidParams, "r_full must be even");

  const unsigned keep_bits = field.modulus_bits() - 1;
  const u128 mask = (u128{1} << keep_bits) - 1;
  const std::size_t needed = t * (r_full + r_partial);
  for (std::uint64_t j = 0; pp.round_constants.size() < needed; ++j) {
    const auto bytes = poseidon::shake256_counter(pp.seed, j, 16);
    u128 v = 0;
    for (unsigned char b : bytes) v = (v << 8) | b;
    v &= mask;
    if (v >= field.modulus()) continue;
    pp.round_constants.push_back(FieldElement{v});
  }

  pp.mds.assign(t, std::vector<FieldElement>(t));
  for (std::size_t i = 0; i < t; ++i) {
    for (std::size_t j = 0; j < t; ++j) {
      pp.mds[i][j] = field.inv(field.element(static_cast<u128>(i + t + j)));
    }
  }
  pp.validate(field);
  return pp;
}

void PoseidonParams::validate(const Field& field) const {
  if (t < 2) throw Error(ErrorCode::InvalidParams, "poseidon width must be at least 2");
  if (alpha < 3) throw Error(ErrorCode::InvalidParams, "S-box exponent must be at least 3");
  u128 a = alpha, b = field.modulus() - 1;
  while (b) {
    const u128 r = a % b;
    a = b;
    b = r;
  }
  if (a != 1) throw Error(ErrorCode::InvalidParams, "gcd(alpha, p-1) != 1, x^alpha is not a permutation");
  if (round_constants.size() != t * rounds()) {
    throw Error(ErrorCode::InvalidParams, "expected " + std::to_string(t * rounds()) + " round constants, got " +
                                              std::to_string(round_constants.size()));
  }
  for (const FieldElement& c : round_constants) {
    if (c.value >= field.modulus()) throw Error(ErrorCode::InvalidParams, "round constant not reduced");
  }
  if (mds.size() != t) throw Error(ErrorCode::InvalidParams, "mds must be t x t");
  for (const auto& row : mds) {
    if (row.size() != t) throw Error(ErrorCode::InvalidParams, "mds must be t x t");
  }
  // Gaussian elimination; a zero pivot column means singular.
  auto m = mds;
  for (std::size_t col = 0; col < t; ++col) {
    std::size_t pivot = col;
    while (pivot < t && m[pivot][col].value == 0) ++pivot;
    if (pivot == t) throw Error(ErrorCode::InvalidParams, "mds matrix is singular");
    std::swap(m[col], m[pivot]);
    const FieldElement inv = field.inv(m[col][col]);
    for (std::size_t r = col + 1; r < t; ++r) {
      const FieldElement f = field.mul(m[r][col], inv);
      for (std::size_t c = col; c < t; ++c) m[r][c] = field.sub(m[r][c], field.mul(f, m[col][c]));
    }
  }
}

}  // namespace zkpol
