#include "dvre/keynet/client.hpp"

#include <ctime>
#include <map>

#include "dvre/common/error.hpp"
#include "dvre/crypto/random.hpp"

namespace dvre::keynet {

wallet::AuthSig WalletCredential::authorize(const std::string& scoped_message) const {
    return wallet::sign_auth(wallet_, scoped_message);
}

namespace {

// Clears the key on every exit path.
struct WipeOnExit {
    Key256& key;
    ~WipeOnExit() { secure_wipe(key); }
};

}  // namespace

UploadResult encrypt_file_and_upload(const NamedFile& file, const Acc& acc, const Credential& credential,
                                     KeyNetwork& network, store::BlockStore& store,
                                     const contracts::AccessView& view) {
    validate_acc(acc, view);
    const NetworkParams& params = network.params();

    Key256 dek = generate_dek();
    WipeOnExit wipe{dek};

    BundleMetadata meta;
    meta.file_name = file.name;
    meta.content_length = file.content.size();
    meta.acc = acc;
    meta.chain = params.chain;
    meta.lit_network = params.lit_network;
    meta.key_id = crypto::random_array<16>();
    meta.n = params.n;
    meta.t = params.t;
    meta.owner = credential.address();
    meta.created_at = view.now();

    EncryptedBundle bundle;
    bundle.metadata = meta;
    bundle.nonce = crypto::random_array<crypto::aead::kNonceSize>();
    bundle.sealed = crypto::aead::seal(dek, bundle.nonce, file.content, meta.associated_data());

    try {
        auto shares = split_key(dek, params.n, params.t, meta.key_id);
        for (auto& share : shares) {
            StoreShareRequest req{share, acc, params.chain, params.lit_network,
                                  credential.authorize(encrypt_message(meta.key_id))};
            network.node(share.node_index).store_share(req);
            secure_wipe(share.share_value);
        }
        Bytes archive = bundle.to_zip();
        store::Cid cid = store.put(archive);
        return UploadResult{cid, meta.file_name, archive.size(), meta.key_id, meta.created_at};
    } catch (...) {
        network.discard(meta.key_id);
        throw;
    }
}

NamedFile decrypt_file_and_download(const store::Cid& cid, const Credential& credential, KeyNetwork& network,
                                    const store::BlockStore& store) {
    const EncryptedBundle bundle = EncryptedBundle::from_zip(store.get(cid));
    const BundleMetadata& meta = bundle.metadata;
    const Hash32 digest = acc_digest(meta.acc);

    std::vector<KeyShare> granted;
    std::map<std::string, int> reasons;
    for (std::uint32_t i = 1; i <= network.size(); ++i) {
        ShareRequest req{meta.key_id, digest, meta.chain, meta.lit_network,
                         credential.authorize(decrypt_message(meta.key_id)), 0};
        req.claimed_at = std::time(nullptr);
        try {
            ShareResponse resp = network.node(i).handle_share_request(req);
            if (auto* share = std::get_if<KeyShare>(&resp)) {
                granted.push_back(*share);
            } else {
                ++reasons[std::get<Denial>(resp).reason];
            }
        } catch (const Error& e) {
            if (e.code() == ErrorCode::NodeUnavailable) {
                ++reasons["unavailable"];
            } else if (e.code() == ErrorCode::UnknownKeyId) {
                ++reasons["unknown_key"];
            } else {
                throw;
            }
        }
    }
    if (granted.size() < meta.t) {
        std::string msg = "access denied: " + std::to_string(granted.size()) + " of " + std::to_string(meta.t) +
                          " required shares granted";
        for (const auto& [reason, count] : reasons) msg += "; " + reason + " x" + std::to_string(count);
        throw Error(ErrorCode::AccessDenied, msg);
    }

    Key256 dek = combine_shares(granted);
    WipeOnExit wipe{dek};
    for (auto& s : granted) secure_wipe(s.share_value);
    auto plain = crypto::aead::open(dek, bundle.nonce, bundle.sealed, meta.associated_data());
    if (!plain) throw Error(ErrorCode::IntegrityFailure, "payload failed authentication");
    return NamedFile{meta.file_name, std::move(*plain)};
}

}  // namespace dvre::keynet
