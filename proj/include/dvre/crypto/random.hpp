#pragma once

#include <array>
#include <span>

#include "dvre/common/bytes.hpp"

namespace dvre::crypto {

/// Fills `out` from the OS-seeded CSPRNG. Throws Error(IoError) if the
/// generator is unavailable.
void random_fill(std::span<std::uint8_t> out);

template <std::size_t N>
std::array<std::uint8_t, N> random_array() {
    std::array<std::uint8_t, N> out{};
    random_fill(out);
    return out;
}

inline Bytes random_bytes(std::size_t n) {
    Bytes out(n);
    random_fill(out);
    return out;
}

}  // namespace dvre::crypto
