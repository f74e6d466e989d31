#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "dvre/common/bytes.hpp"

namespace dvre::keynet {

using boost::multiprecision::uint256_t;

/// Element of GF(p), p = 2^256 - 189 (the largest prime below 2^256).
class FieldElement {
public:
    /// 0xffff...ff43
    static const uint256_t& modulus();

    FieldElement() = default;
    explicit FieldElement(std::uint64_t v) : value_(v) {}

    /// Big-endian; throws Error(InvalidArgument) if the value is >= p.
    static FieldElement from_bytes(const Hash32& bytes);
    static bool in_range(const Hash32& bytes);
    /// Uniform over [0, p) from the CSPRNG.
    static FieldElement random();

    Hash32 to_bytes() const;
    const uint256_t& value() const { return value_; }

    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator*(const FieldElement& o) const;
    /// Throws Error(InvalidArgument) for zero.
    FieldElement inverse() const;

    bool operator==(const FieldElement&) const = default;

private:
    explicit FieldElement(uint256_t v) : value_(std::move(v)) {}

    uint256_t value_{0};
};

}  // namespace dvre::keynet
