#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "dvre/common/encoding.hpp"
#include "dvre/ledger/types.hpp"

namespace dvre::contracts {

using ledger::ContractId;
using ledger::Timestamp;

inline constexpr std::string_view kUserMetadataFactory = "UserMetadataFactory";
inline constexpr std::string_view kUserMetadata = "UserMetadata";
inline constexpr std::string_view kPolicyManager = "PolicyManager";
inline constexpr std::string_view kGroupContract = "GroupContract";

inline constexpr std::string_view kCreateUserContract = "createUserContract";
inline constexpr std::string_view kCreateGroupContract = "createGroupContract";
inline constexpr std::string_view kAssociateUsersToGroup = "associateUsersToGroup";
inline constexpr std::string_view kAddFilesToGroup = "addFilesToGroup";
inline constexpr std::string_view kSetUserAccess = "setUserAccess";

inline constexpr std::string_view kOnlyGroupOwner = "Only group owner can call this function";
inline constexpr std::string_view kUsersAdded = "Users successfully added to the group";
// Spelling matches the deployed contract's event text.
inline constexpr std::string_view kFilesShared = "Files successfullly shared in the group";

/// access_to value meaning "no end date".
inline constexpr Timestamp kUnlimited = std::numeric_limits<Timestamp>::max();

struct UserProfile {
    Address public_address;
    std::string username;
    std::string organization;
    std::string country;

    bool operator==(const UserProfile&) const = default;
};

struct ContractDetails {
    std::string group_name;
    Address group_owner_address;
    std::string permissions;
    std::vector<std::string> organizations;
    std::vector<std::string> countries;

    bool operator==(const ContractDetails&) const = default;
};

/// A file as submitted to addFilesToGroup; the contract stamps the sender
/// and block time when it records the file.
struct FileInput {
    std::string ipfs_hash;
    std::string file_name;

    bool operator==(const FileInput&) const = default;
};

struct FileDetails {
    std::string ipfs_hash;
    std::string file_name;
    Address added_by;
    Timestamp added_at = 0;

    bool operator==(const FileDetails&) const = default;
};

struct UserAccess {
    Address eoa_address;
    Timestamp access_from = 0;
    Timestamp access_to = kUnlimited;

    bool covers(Timestamp at) const { return access_from <= at && at <= access_to; }
    bool operator==(const UserAccess&) const = default;
};

void encode(Encoder& enc, const UserProfile& v);
void encode(Encoder& enc, const ContractDetails& v);
void encode(Encoder& enc, const FileInput& v);
void encode(Encoder& enc, const FileDetails& v);
void encode(Encoder& enc, const UserAccess& v);

UserProfile decode_user_profile(Decoder& dec);
ContractDetails decode_contract_details(Decoder& dec);
FileInput decode_file_input(Decoder& dec);
FileDetails decode_file_details(Decoder& dec);
UserAccess decode_user_access(Decoder& dec);

template <class T>
void encode_list(Encoder& enc, const std::vector<T>& items) {
    enc.u32(static_cast<std::uint32_t>(items.size()));
    for (const auto& item : items) encode(enc, item);
}

template <class T, class F>
std::vector<T> decode_list(Decoder& dec, F&& decode_one) {
    auto n = dec.u32();
    std::vector<T> out;
    out.reserve(std::min<std::uint32_t>(n, 1024));
    for (std::uint32_t i = 0; i < n; ++i) out.push_back(decode_one(dec));
    return out;
}

template <class T>
Bytes encode_args(const T& v) {
    Encoder enc;
    encode(enc, v);
    return std::move(enc).take();
}

template <class T>
Bytes encode_list_args(const std::vector<T>& v) {
    Encoder enc;
    encode_list(enc, v);
    return std::move(enc).take();
}

}  // namespace dvre::contracts
