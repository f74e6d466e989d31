#include "dvre/wallet/wallet.hpp"

#include <algorithm>
#include <fstream>

#include "dvre/crypto/keccak.hpp"
#include "dvre/crypto/random.hpp"

namespace dvre::wallet {

namespace secp = crypto::secp256k1;

Wallet wallet_from_private_key(const secp::PrivateKey& key) {
    if (!secp::is_valid_private_key(key)) throw Error(ErrorCode::InvalidEntropy, "private key outside [1, n-1]");
    Wallet w;
    w.private_key = key;
    w.public_key = secp::derive_public_key(key);
    w.address = Address::from_public_key(w.public_key);
    return w;
}

Wallet generate_wallet(std::optional<ByteView> entropy) {
    secp::PrivateKey key{};
    if (entropy) {
        if (entropy->size() != key.size()) throw Error(ErrorCode::InvalidEntropy, "entropy must be 32 bytes");
        std::copy(entropy->begin(), entropy->end(), key.begin());
        return wallet_from_private_key(key);
    }
    do {
        crypto::random_fill(key);
    } while (!secp::is_valid_private_key(key));
    Wallet w = wallet_from_private_key(key);
    secure_wipe(key);
    return w;
}

Hash32 personal_message_digest(ByteView message) {
    std::string prefix = "\x19" "Ethereum Signed Message:\n" + std::to_string(message.size());
    return crypto::Keccak256{}.update(as_bytes(prefix)).update(message).finalize();
}

AuthSig sign_auth(const Wallet& wallet, ByteView challenge) {
    if (challenge.empty()) throw Error(ErrorCode::InvalidArgument, "challenge must be non-empty");
    AuthSig sig;
    sig.signed_message.assign(challenge.begin(), challenge.end());
    sig.signature = secp::sign_digest(wallet.private_key, personal_message_digest(challenge));
    sig.address = wallet.address;
    return sig;
}

Address recover_signer(const AuthSig& sig) {
    auto key = secp::recover(personal_message_digest(sig.signed_message), sig.signature);
    if (!key || Address::from_public_key(*key) != sig.address) {
        throw Error(ErrorCode::SignatureInvalid, "signature does not recover to " + sig.address.to_checksum_hex());
    }
    return sig.address;
}

Address verify_auth(const AuthSig& sig, ByteView expected_challenge) {
    if (!std::equal(sig.signed_message.begin(), sig.signed_message.end(), expected_challenge.begin(),
                    expected_challenge.end())) {
        throw Error(ErrorCode::ChallengeMismatch, "signed message does not match the issued challenge");
    }
    return recover_signer(sig);
}

std::string make_login_challenge(const std::array<std::uint8_t, kLoginNonceSize>& nonce) {
    return std::string(kLoginPrefix) + to_hex(nonce);
}

std::string make_login_challenge() {
    return make_login_challenge(crypto::random_array<kLoginNonceSize>());
}

void save_key_file(const std::filesystem::path& path, const Wallet& wallet) {
    // Create with 0600 before any key material is written.
    {
        std::ofstream touch(path, std::ios::trunc);
        if (!touch) throw Error(ErrorCode::IoError, "cannot create key file " + path.string());
    }
    std::filesystem::permissions(path, std::filesystem::perms::owner_read | std::filesystem::perms::owner_write,
                                 std::filesystem::perm_options::replace);
    std::ofstream out(path, std::ios::trunc);
    out << to_hex(wallet.private_key) << '\n';
    if (!out) throw Error(ErrorCode::IoError, "cannot write key file " + path.string());
}

Wallet load_key_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot read key file " + path.string());
    std::string line;
    std::getline(in, line);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    auto key = fixed_from_hex<32>(line);
    secure_wipe(std::span<std::uint8_t>(reinterpret_cast<std::uint8_t*>(line.data()), line.size()));
    return wallet_from_private_key(key);
}

}  // namespace dvre::wallet
