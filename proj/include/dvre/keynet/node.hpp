#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "dvre/keynet/acc.hpp"
#include "dvre/keynet/shamir.hpp"
#include "dvre/wallet/wallet.hpp"

namespace dvre::keynet {

struct NetworkParams {
    std::string lit_network = "dvre-local";
    std::string chain = "dvre";
    unsigned n = 5;
    unsigned t = 3;
};

inline constexpr std::string_view kEncryptScope = "dvre-encrypt:";
inline constexpr std::string_view kDecryptScope = "dvre-decrypt:";

/// "dvre-encrypt:<key_id hex>:<nonce hex>"
std::string encrypt_message(const KeyId& key_id);
/// "dvre-decrypt:<key_id hex>:<nonce hex>"
std::string decrypt_message(const KeyId& key_id);

/// Accepts a login signature in place of a per-key signed message. Installed
/// by the API server, which knows which login signatures are live sessions.
using SessionVerifier = std::function<bool(const wallet::AuthSig&)>;

/// Deposit of one share together with the condition that guards it.
struct StoreShareRequest {
    KeyShare share;
    Acc acc;
    std::string chain;
    std::string lit_network;
    wallet::AuthSig auth;
};

struct ShareRequest {
    KeyId key_id{};
    /// Digest of the ACC the requester found in the bundle.
    Hash32 acc_digest{};
    std::string chain;
    std::string lit_network;
    wallet::AuthSig auth;
    /// Time the requester believes it is. Logged only; nodes evaluate at
    /// the ledger's block time.
    Timestamp claimed_at = 0;
};

struct Denial {
    /// "bad_signature", "bad_message", "replayed", "network_mismatch",
    /// "acc_mismatch" or "acc_failed".
    std::string reason;
};

using ShareResponse = std::variant<KeyShare, Denial>;

/// One decision; never contains key material.
struct AuditEntry {
    KeyId key_id{};
    Address requester;
    std::string action;  // "store" or "request"
    bool granted = false;
    std::string reason;
    Timestamp claimed_at = 0;
    Timestamp evaluated_at = 0;
};

/// One key-network node. Holds its shares and their ACCs, never a whole key;
/// evaluates conditions against the ledger at the ledger's current time.
class KeyNode {
public:
    KeyNode(std::uint32_t index, const contracts::AccessView& view);

    std::uint32_t index() const { return index_; }
    bool online() const;
    void set_online(bool online);
    void set_session_verifier(SessionVerifier verifier);

    /// Throws NodeUnavailable, SignatureInvalid (bad signature or a message
    /// outside the encrypt scope), AccessDenied if the depositor is not
    /// registered, InvalidArgument for a share whose index is not ours.
    void store_share(const StoreShareRequest& request);
    /// Throws NodeUnavailable or UnknownKeyId; authorisation failures are a Denial.
    ShareResponse handle_share_request(const ShareRequest& request);
    void discard(const KeyId& key_id);
    bool holds(const KeyId& key_id) const;
    std::vector<AuditEntry> audit_log() const;

private:
    struct Held {
        KeyShare share;
        Acc acc;
        Hash32 acc_digest{};
        std::string chain;
        std::string lit_network;
    };

    /// Empty when accepted, else the denial reason. Caller holds mu_.
    std::string check_auth(const wallet::AuthSig& auth, std::string_view scope, const KeyId& key_id);
    void audit(const KeyId& key_id, const Address& who, std::string action, bool granted, std::string reason,
               Timestamp claimed_at = 0);

    std::uint32_t index_;
    const contracts::AccessView& view_;
    mutable std::mutex mu_;
    bool online_ = true;
    SessionVerifier session_verifier_;
    std::map<KeyId, Held> held_;
    std::vector<AuditEntry> audit_;
    std::set<Hash32> seen_;
};

/// n in-process nodes with indices 1..n.
class KeyNetwork {
public:
    KeyNetwork(NetworkParams params, const contracts::AccessView& view);

    const NetworkParams& params() const { return params_; }
    std::size_t size() const { return nodes_.size(); }
    /// 1-based; throws InvalidArgument when out of range.
    KeyNode& node(std::uint32_t index);
    const KeyNode& node(std::uint32_t index) const;

    /// Takes exactly `indices` offline and brings every other node online.
    void set_offline(const std::set<std::uint32_t>& indices);
    void set_session_verifier(const SessionVerifier& verifier);
    /// Drops the key's shares from every node (upload rollback).
    void discard(const KeyId& key_id);

private:
    NetworkParams params_;
    std::vector<std::unique_ptr<KeyNode>> nodes_;
};

}  // namespace dvre::keynet
