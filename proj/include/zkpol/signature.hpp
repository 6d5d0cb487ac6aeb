#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace zkpol {

using Bytes = std::vector<std::uint8_t>;

std::string to_hex(std::span<const std::uint8_t> bytes);
/// Throws ParseError on odd length or non-hex characters.
Bytes from_hex(std::string_view hex);

struct KeyPair {
  Bytes pk;
  Bytes sk;
};

/// Signatures over byte strings. Implementations must be deterministic so that
/// session transcripts are reproducible.
class SignatureScheme {
 public:
  virtual ~SignatureScheme() = default;
  virtual std::string name() const = 0;
  virtual KeyPair keygen(std::span<const std::uint8_t> seed) const = 0;
  virtual Bytes sign(std::span<const std::uint8_t> sk, std::span<const std::uint8_t> msg) const = 0;
  /// Malformed keys or signatures verify as false.
  virtual bool verify(std::span<const std::uint8_t> pk, std::span<const std::uint8_t> msg,
                      std::span<const std::uint8_t> sig) const = 0;
};

/// Schnorr signatures in the order-q subgroup of Z_p^* for a fixed 2048-bit p
/// and 256-bit q (scripts/gen_schnorr_group.py).
///
///   sk = x (32 bytes), pk = y = g^x (256 bytes), sig = e || s (32 + 32 bytes)
///   x  = SHA-512("zkpol/schnorr/keygen" || seed) mod (q-1) + 1
///   k  = SHA-512("zkpol/schnorr/nonce" || x || msg) mod (q-1) + 1
///   e  = SHA-256(be(g^k) || pk || msg) mod q,  s = k + x*e mod q
/// Verification recomputes r = g^s * y^(q-e) and compares the challenge.
class SchnorrScheme final : public SignatureScheme {
 public:
  std::string name() const override { return "schnorr-2048-sha256"; }
  KeyPair keygen(std::span<const std::uint8_t> seed) const override;
  Bytes sign(std::span<const std::uint8_t> sk, std::span<const std::uint8_t> msg) const override;
  bool verify(std::span<const std::uint8_t> pk, std::span<const std::uint8_t> msg,
              std::span<const std::uint8_t> sig) const override;

  static constexpr std::size_t kPublicKeyBytes = 256;
  static constexpr std::size_t kSecretKeyBytes = 32;
  static constexpr std::size_t kSignatureBytes = 64;

  /// Group constants as lowercase hex without prefix.
  static const char* p_hex();
  static const char* q_hex();
  static const char* g_hex();
};

const SignatureScheme& default_signature_scheme();

}  // namespace zkpol
