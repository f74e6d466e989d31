#pragma once

// AES-256-GCM. Sealed output is ciphertext || 16-byte tag.

#include <array>
#include <optional>

#include "dvre/common/bytes.hpp"

namespace dvre::crypto::aead {

inline constexpr std::size_t kKeySize = 32;
inline constexpr std::size_t kNonceSize = 12;
inline constexpr std::size_t kTagSize = 16;

using Key = std::array<std::uint8_t, kKeySize>;
using Nonce = std::array<std::uint8_t, kNonceSize>;

Bytes seal(const Key& key, const Nonce& nonce, ByteView plaintext, ByteView aad);

/// nullopt when the tag does not authenticate.
std::optional<Bytes> open(const Key& key, const Nonce& nonce, ByteView sealed, ByteView aad);

}  // namespace dvre::crypto::aead
