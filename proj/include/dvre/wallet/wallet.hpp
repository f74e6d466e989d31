#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>

#include "dvre/common/bytes.hpp"
#include "dvre/crypto/secp256k1.hpp"
#include "dvre/wallet/address.hpp"

namespace dvre::wallet {

/// Externally owned account: a secp256k1 keypair and its derived address.
struct Wallet {
    crypto::secp256k1::PrivateKey private_key{};
    crypto::secp256k1::PublicKey public_key{};
    Address address;
};

/// A challenge signed with the Ethereum personal-message scheme.
struct AuthSig {
    Bytes signed_message;
    crypto::secp256k1::RecoverableSignature signature{};
    Address address;
};

/// With entropy, the 32 bytes are the big-endian private scalar; a scalar of
/// zero or >= the curve order throws Error(InvalidEntropy). Without entropy a
/// fresh key is drawn from the CSPRNG.
Wallet generate_wallet(std::optional<ByteView> entropy = std::nullopt);

/// Rebuilds a wallet from a stored private key.
Wallet wallet_from_private_key(const crypto::secp256k1::PrivateKey& key);

/// Keccak-256("\x19Ethereum Signed Message:\n" + decimal length + message).
Hash32 personal_message_digest(ByteView message);

AuthSig sign_auth(const Wallet& wallet, ByteView challenge);
inline AuthSig sign_auth(const Wallet& wallet, std::string_view challenge) {
    return sign_auth(wallet, as_bytes(challenge));
}

/// Returns the signer iff the signed message equals `expected_challenge`
/// (else ChallengeMismatch) and the signature recovers to sig.address (else
/// SignatureInvalid).
Address verify_auth(const AuthSig& sig, ByteView expected_challenge);
inline Address verify_auth(const AuthSig& sig, std::string_view expected_challenge) {
    return verify_auth(sig, as_bytes(expected_challenge));
}

/// Signature check without a fixed expected message; throws SignatureInvalid.
Address recover_signer(const AuthSig& sig);

inline constexpr std::string_view kLoginPrefix = "dvre-login:";
inline constexpr std::size_t kLoginNonceSize = 16;

/// "dvre-login:" + 32 lowercase hex chars.
std::string make_login_challenge(const std::array<std::uint8_t, kLoginNonceSize>& nonce);
std::string make_login_challenge();

/// One line of hex, created with owner-only permissions (0600).
void save_key_file(const std::filesystem::path& path, const Wallet& wallet);
Wallet load_key_file(const std::filesystem::path& path);

}  // namespace dvre::wallet
