#pragma once

#include <compare>
#include <string>
#include <string_view>

#include "dvre/common/bytes.hpp"

namespace dvre::store {

/// Content identifier: SHA-256 of the stored bytes, rendered "dvre1-<hex>".
class Cid {
public:
    static constexpr std::string_view kPrefix = "dvre1-";

    Cid() = default;
    explicit Cid(const Hash32& digest) : digest_(digest) {}

    static Cid of(ByteView content);
    /// Throws Error(InvalidArgument) unless text is "dvre1-" + 64 hex chars.
    static Cid parse(std::string_view text);

    const Hash32& digest() const { return digest_; }
    std::string str() const;
    bool verifies(ByteView content) const { return of(content) == *this; }

    auto operator<=>(const Cid&) const = default;

private:
    Hash32 digest_{};
};

}  // namespace dvre::store
