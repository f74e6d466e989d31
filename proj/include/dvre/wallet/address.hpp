#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include "dvre/common/bytes.hpp"
#include "dvre/crypto/secp256k1.hpp"

namespace dvre {

/// 20-byte account identifier, Ethereum-compatible.
class Address {
public:
    static constexpr std::size_t kSize = 20;
    using Raw = std::array<std::uint8_t, kSize>;

    Address() = default;
    explicit Address(const Raw& raw) : raw_(raw) {}

    /// Last 20 bytes of Keccak-256 over the 64-byte uncompressed key.
    static Address from_public_key(const crypto::secp256k1::PublicKey& key);

    /// Accepts "0x"-prefixed or bare hex. All-lowercase and all-uppercase
    /// input is taken as-is; mixed case must carry a valid EIP-55 checksum.
    static Address parse(std::string_view text);

    /// "0x" + 40 hex chars in EIP-55 mixed case.
    std::string to_checksum_hex() const;
    std::string to_lower_hex() const;

    const Raw& raw() const { return raw_; }
    ByteView bytes() const { return raw_; }
    bool is_zero() const;

    auto operator<=>(const Address&) const = default;

private:
    Raw raw_{};
};

}  // namespace dvre

template <>
struct std::hash<dvre::Address> {
    std::size_t operator()(const dvre::Address& a) const noexcept {
        std::size_t h = 0;
        for (auto b : a.raw()) h = h * 131 + b;
        return h;
    }
};
