#include "dvre/keynet/node.hpp"

#include "dvre/common/error.hpp"
#include "dvre/crypto/keccak.hpp"
#include "dvre/crypto/random.hpp"

namespace dvre::keynet {

namespace {

std::string scoped_prefix(std::string_view scope, const KeyId& key_id) {
    return std::string(scope) + to_hex(key_id) + ":";
}

std::string scoped_message(std::string_view scope, const KeyId& key_id) {
    return scoped_prefix(scope, key_id) + to_hex(crypto::random_array<16>());
}

}  // namespace

std::string encrypt_message(const KeyId& key_id) { return scoped_message(kEncryptScope, key_id); }
std::string decrypt_message(const KeyId& key_id) { return scoped_message(kDecryptScope, key_id); }

KeyNode::KeyNode(std::uint32_t index, const contracts::AccessView& view) : index_(index), view_(view) {}

bool KeyNode::online() const {
    std::lock_guard lock(mu_);
    return online_;
}

void KeyNode::set_online(bool online) {
    std::lock_guard lock(mu_);
    online_ = online;
}

void KeyNode::set_session_verifier(SessionVerifier verifier) {
    std::lock_guard lock(mu_);
    session_verifier_ = std::move(verifier);
}

std::string KeyNode::check_auth(const wallet::AuthSig& auth, std::string_view scope, const KeyId& key_id) {
    try {
        wallet::recover_signer(auth);
    } catch (const Error&) {
        return "bad_signature";
    }
    const std::string message = to_string(auth.signed_message);
    if (message.starts_with(scoped_prefix(scope, key_id))) {
        // A scoped message authorises one request per node.
        if (!seen_.insert(crypto::keccak256(auth.signed_message)).second) return "replayed";
        return {};
    }
    if (message.starts_with(wallet::kLoginPrefix) && session_verifier_ && session_verifier_(auth)) return {};
    return "bad_message";
}

void KeyNode::audit(const KeyId& key_id, const Address& who, std::string action, bool granted, std::string reason,
                    Timestamp claimed_at) {
    audit_.push_back(AuditEntry{key_id, who, std::move(action), granted, std::move(reason), claimed_at, view_.now()});
}

void KeyNode::store_share(const StoreShareRequest& req) {
    std::lock_guard lock(mu_);
    if (!online_) throw Error(ErrorCode::NodeUnavailable, "node " + std::to_string(index_) + " is offline");
    const KeyId& id = req.share.key_id;
    if (req.share.node_index != index_) {
        throw Error(ErrorCode::InvalidArgument, "share for node " + std::to_string(req.share.node_index) +
                                                    " sent to node " + std::to_string(index_));
    }
    validate_acc(req.acc);
    if (std::string reason = check_auth(req.auth, kEncryptScope, id); !reason.empty()) {
        audit(id, req.auth.address, "store", false, reason);
        throw Error(ErrorCode::SignatureInvalid, "share deposit refused: " + reason);
    }
    if (!view_.is_registered(req.auth.address)) {
        audit(id, req.auth.address, "store", false, "not_registered");
        throw Error(ErrorCode::AccessDenied, "depositor is not a registered user");
    }
    if (held_.contains(id)) throw Error(ErrorCode::InvalidArgument, "key id already in use");
    held_.emplace(id, Held{req.share, req.acc, acc_digest(req.acc), req.chain, req.lit_network});
    audit(id, req.auth.address, "store", true, {});
}

ShareResponse KeyNode::handle_share_request(const ShareRequest& req) {
    std::unique_lock lock(mu_);
    if (!online_) throw Error(ErrorCode::NodeUnavailable, "node " + std::to_string(index_) + " is offline");
    auto it = held_.find(req.key_id);
    if (it == held_.end()) throw Error(ErrorCode::UnknownKeyId, "no share for key " + to_hex(req.key_id));
    const Held held = it->second;

    auto deny = [&](std::string reason) {
        audit(req.key_id, req.auth.address, "request", false, reason, req.claimed_at);
        return Denial{std::move(reason)};
    };
    if (std::string reason = check_auth(req.auth, kDecryptScope, req.key_id); !reason.empty()) return deny(reason);
    if (req.chain != held.chain || req.lit_network != held.lit_network) return deny("network_mismatch");
    if (req.acc_digest != held.acc_digest) return deny("acc_mismatch");

    // The ledger is consulted at its own current time; a clock the requester
    // claims plays no part.
    lock.unlock();
    bool ok = false;
    try {
        ok = evaluate_acc(held.acc, req.auth.address, view_.now(), view_);
    } catch (const Error&) {
        ok = false;
    }
    lock.lock();
    if (!ok) return deny("acc_failed");
    audit(req.key_id, req.auth.address, "request", true, {}, req.claimed_at);
    return held.share;
}

void KeyNode::discard(const KeyId& key_id) {
    std::lock_guard lock(mu_);
    held_.erase(key_id);
}

bool KeyNode::holds(const KeyId& key_id) const {
    std::lock_guard lock(mu_);
    return held_.contains(key_id);
}

std::vector<AuditEntry> KeyNode::audit_log() const {
    std::lock_guard lock(mu_);
    return audit_;
}

KeyNetwork::KeyNetwork(NetworkParams params, const contracts::AccessView& view) : params_(std::move(params)) {
    if (params_.t < 1 || params_.t > params_.n || params_.n > 255) {
        throw Error(ErrorCode::BadThreshold, "need 1 <= t <= n <= 255");
    }
    for (std::uint32_t i = 1; i <= params_.n; ++i) nodes_.push_back(std::make_unique<KeyNode>(i, view));
}

KeyNode& KeyNetwork::node(std::uint32_t index) {
    if (index < 1 || index > nodes_.size()) throw Error(ErrorCode::InvalidArgument, "no node " + std::to_string(index));
    return *nodes_[index - 1];
}

const KeyNode& KeyNetwork::node(std::uint32_t index) const { return const_cast<KeyNetwork*>(this)->node(index); }

void KeyNetwork::set_offline(const std::set<std::uint32_t>& indices) {
    for (auto& n : nodes_) n->set_online(!indices.contains(n->index()));
}

void KeyNetwork::set_session_verifier(const SessionVerifier& verifier) {
    for (auto& n : nodes_) n->set_session_verifier(verifier);
}

void KeyNetwork::discard(const KeyId& key_id) {
    for (auto& n : nodes_) n->discard(key_id);
}

}  // namespace dvre::keynet
