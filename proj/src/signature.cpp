#include "zkpol/signature.hpp"

#include <initializer_list>

#include <gmpxx.h>
#include <openssl/evp.h>

#include "zkpol/error.hpp"

namespace zkpol {

namespace {

constexpr const char* kP =
    "800000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000008a8ede906be8d54eb804bf35e2b675d170b18890d1b144291ace8e6b54ff524f4f";
constexpr const char* kQ = "97fa554866ccf95f921d17c4e3afc3413af1ac7fa6bc4482aa5ecc8cd7b9248b";
constexpr const char* kG =
    "107ded5a7e8c75564bb65c68c44a3af0a9fc55ee003f8d640d90cfa9256c9c3096523a256c253c1dbc1fca0703d090816b6c7cf73014b11ba763a52857c6b33dfa4c6fe194ab9e5485fb55d2e8f9647e834007c749f691a102bd5fdb9db713b7f187441f97588d31553b08f71b545445c947db40d41845c7a19251fe464905e06bc68dce86ebfe2272b240463f2915e593759d41db12f919954d39ff631d0f7e2d529871465b07e531998711c25155b6bc9cf7641dcdeda12a4c9172680ba332d2861400172a7a5a194367a033972fbe06d220cf07c372f54805dd56e15a4ac08357376e97253c5ded030dea2eec708622ddace619b6546ac9385c695cf1b8d";

struct Group {
  mpz_class p{kP, 16};
  mpz_class q{kQ, 16};
  mpz_class g{kG, 16};
};

const Group& group() {
  static const Group grp;
  return grp;
}

mpz_class from_bytes(std::span<const std::uint8_t> b) {
  mpz_class out;
  if (!b.empty()) mpz_import(out.get_mpz_t(), b.size(), 1, 1, 1, 0, b.data());
  return out;
}

// Big-endian, left-padded to len bytes; v must fit.
Bytes to_bytes(const mpz_class& v, std::size_t len) {
  Bytes out(len, 0);
  std::size_t count = 0;
  std::vector<std::uint8_t> tmp((mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8 + 1);
  mpz_export(tmp.data(), &count, 1, 1, 1, 0, v.get_mpz_t());
  if (count > len) throw Error(ErrorCode::InvalidParams, "integer does not fit in " + std::to_string(len) + " bytes");
  std::copy(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(count), out.end() - static_cast<std::ptrdiff_t>(count));
  return out;
}

mpz_class digest(const EVP_MD* md, std::initializer_list<std::span<const std::uint8_t>> parts) {
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  std::uint8_t out[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  bool ok = ctx != nullptr && EVP_DigestInit_ex(ctx, md, nullptr) == 1;
  for (auto part : parts) ok = ok && EVP_DigestUpdate(ctx, part.data(), part.size()) == 1;
  ok = ok && EVP_DigestFinal_ex(ctx, out, &len) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw Error(ErrorCode::InvalidParams, "digest computation failed");
  return from_bytes(std::span<const std::uint8_t>(out, len));
}

std::span<const std::uint8_t> as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

mpz_class hash512(std::string_view tag, std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  return digest(EVP_sha512(), {as_bytes(tag), a, b});
}

mpz_class challenge(const mpz_class& r, std::span<const std::uint8_t> pk, std::span<const std::uint8_t> msg) {
  const Bytes rb = to_bytes(r, SchnorrScheme::kPublicKeyBytes);
  return digest(EVP_sha256(), {rb, pk, msg}) % group().q;
}

mpz_class powm(const mpz_class& base, const mpz_class& exp, const mpz_class& mod) {
  mpz_class out;
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
  return out;
}

}  // namespace

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 15]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2) throw Error(ErrorCode::ParseError, "hex string has odd length");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw Error(ErrorCode::ParseError, std::string("bad hex digit '") + c + "'");
  };
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<std::uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
  return out;
}

const char* SchnorrScheme::p_hex() { return kP; }
const char* SchnorrScheme::q_hex() { return kQ; }
const char* SchnorrScheme::g_hex() { return kG; }

KeyPair SchnorrScheme::keygen(std::span<const std::uint8_t> seed) const {
  const auto& grp = group();
  const mpz_class x = hash512("zkpol/schnorr/keygen", seed, {}) % (grp.q - 1) + 1;
  return {to_bytes(powm(grp.g, x, grp.p), kPublicKeyBytes), to_bytes(x, kSecretKeyBytes)};
}

Bytes SchnorrScheme::sign(std::span<const std::uint8_t> sk, std::span<const std::uint8_t> msg) const {
  const auto& grp = group();
  if (sk.size() != kSecretKeyBytes) throw Error(ErrorCode::InvalidParams, "secret key must be 32 bytes");
  const mpz_class x = from_bytes(sk);
  if (x == 0 || x >= grp.q) throw Error(ErrorCode::InvalidParams, "secret key out of range");
  const Bytes pk = to_bytes(powm(grp.g, x, grp.p), kPublicKeyBytes);
  const mpz_class k = hash512("zkpol/schnorr/nonce", sk, msg) % (grp.q - 1) + 1;
  const mpz_class e = challenge(powm(grp.g, k, grp.p), pk, msg);
  const mpz_class s = (k + x * e) % grp.q;
  Bytes sig = to_bytes(e, 32);
  const Bytes sb = to_bytes(s, 32);
  sig.insert(sig.end(), sb.begin(), sb.end());
  return sig;
}

bool SchnorrScheme::verify(std::span<const std::uint8_t> pk, std::span<const std::uint8_t> msg,
                           std::span<const std::uint8_t> sig) const {
  const auto& grp = group();
  if (pk.size() != kPublicKeyBytes || sig.size() != kSignatureBytes) return false;
  const mpz_class y = from_bytes(pk);
  if (y <= 1 || y >= grp.p || powm(y, grp.q, grp.p) != 1) return false;
  const mpz_class e = from_bytes(sig.first(32));
  const mpz_class s = from_bytes(sig.subspan(32));
  if (e >= grp.q || s >= grp.q) return false;
  const mpz_class r = powm(grp.g, s, grp.p) * powm(y, grp.q - e, grp.p) % grp.p;
  return challenge(r, pk, msg) == e;
}

const SignatureScheme& default_signature_scheme() {
  static const SchnorrScheme scheme;
  return scheme;
}

}  // namespace zkpol
