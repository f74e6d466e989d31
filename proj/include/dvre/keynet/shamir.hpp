#pragma once

#include <array>
#include <span>
#include <vector>

#include "dvre/common/bytes.hpp"

namespace dvre::keynet {

using KeyId = std::array<std::uint8_t, 16>;
using Key256 = std::array<std::uint8_t, 32>;

struct KeyShare {
    KeyId key_id{};
    /// Evaluation point, 1..n.
    std::uint32_t node_index = 0;
    /// Shares needed to reconstruct.
    std::uint32_t threshold = 0;
    /// Polynomial value at node_index, big-endian field element.
    Hash32 share_value{};

    bool operator==(const KeyShare&) const = default;
};

/// A fresh 256-bit key that is also a valid field element (rejection sampled).
Key256 generate_dek();

/// Shamir split over GF(2^256 - 189): random polynomial of degree t-1 with
/// constant term `dek`, share i evaluated at x = i. Throws BadThreshold
/// unless 1 <= t <= n <= 255, InvalidArgument if dek is not below the prime.
std::vector<KeyShare> split_key(const Key256& dek, unsigned n, unsigned t, const KeyId& key_id);

/// Deterministic core of split_key: coefficients a1..a(t-1) are given
/// (big-endian, each below the prime); t = coefficients.size() + 1.
std::vector<KeyShare> split_key_with_coefficients(const Key256& dek, std::span<const Hash32> coefficients, unsigned n,
                                                  const KeyId& key_id);

/// Lagrange interpolation at x = 0 over the first `threshold` distinct
/// indices. Throws InsufficientShares or MixedKeyIds.
Key256 combine_shares(std::span<const KeyShare> shares);

}  // namespace dvre::keynet
