#pragma once

#include <array>
#include <optional>

#include "dvre/common/bytes.hpp"

namespace dvre::crypto::secp256k1 {

using PrivateKey = std::array<std::uint8_t, 32>;
/// Uncompressed point without the 0x04 prefix: X || Y, big-endian.
using PublicKey = std::array<std::uint8_t, 64>;
/// r || s || v, with v in {27, 28} (Ethereum convention).
using RecoverableSignature = std::array<std::uint8_t, 65>;

/// True iff 1 <= key < n.
bool is_valid_private_key(const PrivateKey& key);

/// Precondition: is_valid_private_key(key); throws Error(InvalidEntropy) otherwise.
PublicKey derive_public_key(const PrivateKey& key);

/// ECDSA over a prehashed 32-byte digest. The nonce is derived per RFC 6979
/// (HMAC-SHA256), and s is normalized to the lower half of the group order.
RecoverableSignature sign_digest(const PrivateKey& key, const Hash32& digest);

/// Returns the signer's public key, or nullopt for any malformed or
/// non-canonical (high-s) signature.
std::optional<PublicKey> recover(const Hash32& digest, const RecoverableSignature& sig);

}  // namespace dvre::crypto::secp256k1
