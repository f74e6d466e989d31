#pragma once

#include <memory>
#include <string>

#include "dvre/keynet/bundle.hpp"
#include "dvre/keynet/node.hpp"
#include "dvre/store/store.hpp"

namespace dvre::keynet {

/// What a client presents to key nodes.
class Credential {
public:
    virtual ~Credential() = default;
    virtual Address address() const = 0;
    /// Signature for a scoped message (see encrypt_message / decrypt_message).
    virtual wallet::AuthSig authorize(const std::string& scoped_message) const = 0;
};

/// Signs each request with the wallet key.
class WalletCredential : public Credential {
public:
    explicit WalletCredential(const wallet::Wallet& wallet) : wallet_(wallet) {}
    Address address() const override { return wallet_.address; }
    wallet::AuthSig authorize(const std::string& scoped_message) const override;

private:
    const wallet::Wallet& wallet_;
};

/// Presents the login signature of a live session; nodes accept it only
/// through the network's SessionVerifier.
class SessionCredential : public Credential {
public:
    explicit SessionCredential(wallet::AuthSig login) : login_(std::move(login)) {}
    Address address() const override { return login_.address; }
    wallet::AuthSig authorize(const std::string&) const override { return login_; }

private:
    wallet::AuthSig login_;
};

struct NamedFile {
    std::string name;
    Bytes content;
};

struct UploadResult {
    store::Cid bundle_cid;
    std::string file_name;
    std::uint64_t bundle_size = 0;
    KeyId key_id{};
    Timestamp created_at = 0;
};

/// Encrypts `file` under a fresh key, splits the key across the network
/// (every node must accept its share), zips and pins the bundle. On any
/// failure the deposited shares are discarded and nothing stays pinned.
/// Throws InvalidArgument for an invalid ACC, UnknownGroup for a missing
/// group, NodeUnavailable, quota errors from the store.
UploadResult encrypt_file_and_upload(const NamedFile& file, const Acc& acc, const Credential& credential,
                                     KeyNetwork& network, store::BlockStore& store,
                                     const contracts::AccessView& view);

/// Fetches the bundle, asks every node for its share and decrypts with the
/// first `t` grants. Throws NotFound, AccessDenied when fewer than t nodes
/// grant (per-node reasons, "unavailable" included, aggregated in the
/// message), IntegrityFailure.
NamedFile decrypt_file_and_download(const store::Cid& cid, const Credential& credential, KeyNetwork& network,
                                    const store::BlockStore& store);

}  // namespace dvre::keynet
