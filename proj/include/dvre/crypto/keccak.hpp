#pragma once

// Keccak-256 as used by Ethereum (original Keccak padding 0x01, not the
// FIPS-202 SHA3 padding 0x06). OpenSSL 3.0 does not expose this variant.

#include <array>
#include <cstdint>

#include "dvre/common/bytes.hpp"

namespace dvre::crypto {

class Keccak256 {
public:
    static constexpr std::size_t kRate = 136;

    Keccak256& update(ByteView data);
    Hash32 finalize();

private:
    void absorb_block();

    std::array<std::uint64_t, 25> state_{};
    std::array<std::uint8_t, kRate> block_{};
    std::size_t fill_ = 0;
};

Hash32 keccak256(ByteView data);

inline Hash32 keccak256(std::string_view s) { return keccak256(as_bytes(s)); }

}  // namespace dvre::crypto
