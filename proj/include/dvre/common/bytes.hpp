#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dvre/common/error.hpp"

namespace dvre {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;
using Hash32 = std::array<std::uint8_t, 32>;

/// Lowercase hex, no prefix.
std::string to_hex(ByteView data);

/// Accepts an optional "0x" prefix and either letter case. Throws
/// Error(ErrorCode::InvalidArgument) on odd length or non-hex characters.
Bytes from_hex(std::string_view text);

template <std::size_t N>
std::array<std::uint8_t, N> fixed_from_hex(std::string_view text);

inline ByteView as_bytes(std::string_view s) {
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

inline Bytes to_bytes(std::string_view s) {
    auto v = as_bytes(s);
    return {v.begin(), v.end()};
}

inline std::string to_string(ByteView b) {
    return {reinterpret_cast<const char*>(b.data()), b.size()};
}

/// Zeroes memory in a way the optimizer will not elide.
void secure_wipe(std::span<std::uint8_t> data);

template <std::size_t N>
std::array<std::uint8_t, N> fixed_from_hex(std::string_view text) {
    Bytes raw = from_hex(text);
    if (raw.size() != N) {
        throw Error(ErrorCode::InvalidArgument,
                    "expected " + std::to_string(N) + " hex bytes, got " + std::to_string(raw.size()));
    }
    std::array<std::uint8_t, N> out{};
    std::copy(raw.begin(), raw.end(), out.begin());
    return out;
}

}  // namespace dvre
