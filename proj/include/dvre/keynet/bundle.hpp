#pragma once

#include <string>

#include "dvre/crypto/aead.hpp"
#include "dvre/keynet/acc.hpp"
#include "dvre/keynet/shamir.hpp"

namespace dvre::keynet {

inline constexpr std::string_view kPayloadEntry = "payload.enc";
inline constexpr std::string_view kMetadataEntry = "metadata.json";
inline constexpr std::string_view kReadmeEntry = "README.txt";

struct BundleMetadata {
    int version = 1;
    std::string file_name;
    std::uint64_t content_length = 0;
    Acc acc;
    std::string chain;
    std::string lit_network;
    KeyId key_id{};
    unsigned n = 0;
    unsigned t = 0;
    Address owner;
    Timestamp created_at = 0;

    /// JSON text of metadata.json; `acc` is the hex canonical encoding.
    std::string to_json() const;
    static BundleMetadata from_json(std::string_view text);
    /// Associated data for the payload: binds every metadata field.
    Bytes associated_data() const;

    bool operator==(const BundleMetadata&) const = default;
};

/// Zipped encrypted file: payload.enc (nonce || ciphertext || tag),
/// metadata.json, README.txt.
struct EncryptedBundle {
    BundleMetadata metadata;
    crypto::aead::Nonce nonce{};
    /// Ciphertext || tag.
    Bytes sealed;

    Bytes to_zip() const;
    /// Throws Error(IntegrityFailure) for anything that is not a well-formed bundle.
    static EncryptedBundle from_zip(ByteView archive);
};

std::string bundle_readme(const BundleMetadata& metadata);

}  // namespace dvre::keynet
