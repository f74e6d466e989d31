#include "dvre/keynet/bundle.hpp"

#include <algorithm>

#include <json.hpp>

#include "dvre/common/encoding.hpp"
#include "dvre/common/error.hpp"
#include "dvre/contracts/dates.hpp"
#include "dvre/keynet/zip.hpp"

namespace dvre::keynet {

using nlohmann::json;

std::string BundleMetadata::to_json() const {
    json j = {
        {"version", version},
        {"file_name", file_name},
        {"content_length", content_length},
        {"acc", to_hex(encode_acc(acc))},
        {"chain", chain},
        {"lit_network", lit_network},
        {"key_id", to_hex(key_id)},
        {"n", n},
        {"t", t},
        {"owner", owner.to_checksum_hex()},
        {"created_at", created_at},
    };
    return j.dump(2);
}

BundleMetadata BundleMetadata::from_json(std::string_view text) {
    try {
        json j = json::parse(text);
        BundleMetadata m;
        m.version = j.at("version").get<int>();
        if (m.version != 1) throw Error(ErrorCode::IntegrityFailure, "unsupported bundle version");
        m.file_name = j.at("file_name").get<std::string>();
        m.content_length = j.at("content_length").get<std::uint64_t>();
        m.acc = decode_acc(from_hex(j.at("acc").get<std::string>()));
        m.chain = j.at("chain").get<std::string>();
        m.lit_network = j.at("lit_network").get<std::string>();
        m.key_id = fixed_from_hex<16>(j.at("key_id").get<std::string>());
        m.n = j.at("n").get<unsigned>();
        m.t = j.at("t").get<unsigned>();
        m.owner = Address::parse(j.at("owner").get<std::string>());
        m.created_at = j.at("created_at").get<Timestamp>();
        return m;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::IntegrityFailure, std::string("bundle metadata: ") + e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::IntegrityFailure) throw;
        throw Error(ErrorCode::IntegrityFailure, std::string("bundle metadata: ") + e.what());
    }
}

Bytes BundleMetadata::associated_data() const {
    Encoder enc;
    enc.str("dvre-bundle")
        .u32(static_cast<std::uint32_t>(version))
        .str(file_name)
        .u64(content_length)
        .bytes(encode_acc(acc))
        .str(chain)
        .str(lit_network)
        .raw(key_id)
        .u32(n)
        .u32(t);
    ledger::encode_address(enc, owner);
    enc.i64(created_at);
    return std::move(enc).take();
}

std::string bundle_readme(const BundleMetadata& m) {
    return "Encrypted research asset\n"
           "\n"
           "file:      " + m.file_name + "\n"
           "size:      " + std::to_string(m.content_length) + " bytes\n"
           "owner:     " + m.owner.to_checksum_hex() + "\n"
           "created:   " + contracts::format_time(m.created_at) + "\n"
           "key id:    " + to_hex(m.key_id) + "\n"
           "network:   " + m.lit_network + " (" + std::to_string(m.t) + " of " + std::to_string(m.n) + " nodes)\n"
           "\n"
           "payload.enc is AES-256-GCM: 12-byte nonce, ciphertext, 16-byte tag.\n"
           "The key is split across the key network and released only to callers\n"
           "who satisfy the access condition in metadata.json. To decrypt:\n"
           "\n"
           "    dvre asset get <cid> --out <file>\n";
}

Bytes EncryptedBundle::to_zip() const {
    Bytes payload(nonce.begin(), nonce.end());
    payload.insert(payload.end(), sealed.begin(), sealed.end());
    std::string meta = metadata.to_json();
    std::string readme = bundle_readme(metadata);
    return zip::write({{std::string(kPayloadEntry), std::move(payload)},
                       {std::string(kMetadataEntry), to_bytes(meta)},
                       {std::string(kReadmeEntry), to_bytes(readme)}},
                      metadata.created_at);
}

EncryptedBundle EncryptedBundle::from_zip(ByteView archive) {
    auto entries = zip::read(archive);
    auto find = [&](std::string_view name) -> const zip::Entry& {
        auto it = std::find_if(entries.begin(), entries.end(), [&](const zip::Entry& e) { return e.name == name; });
        if (it == entries.end()) throw Error(ErrorCode::IntegrityFailure, "bundle lacks " + std::string(name));
        return *it;
    };
    EncryptedBundle b;
    b.metadata = BundleMetadata::from_json(to_string(find(kMetadataEntry).data));
    const Bytes& payload = find(kPayloadEntry).data;
    if (payload.size() < crypto::aead::kNonceSize + crypto::aead::kTagSize ||
        payload.size() - crypto::aead::kNonceSize - crypto::aead::kTagSize != b.metadata.content_length) {
        throw Error(ErrorCode::IntegrityFailure, "payload length disagrees with metadata");
    }
    std::copy_n(payload.begin(), crypto::aead::kNonceSize, b.nonce.begin());
    b.sealed.assign(payload.begin() + crypto::aead::kNonceSize, payload.end());
    return b;
}

}  // namespace dvre::keynet
