#include "dvre/crypto/sha256.hpp"

#include <openssl/evp.h>
#include <openssl/hmac.h>

namespace dvre::crypto {

Hash32 sha256(ByteView data) {
    Hash32 out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 || len != out.size()) {
        throw Error(ErrorCode::IoError, "SHA-256 failed");
    }
    return out;
}

Hash32 hmac_sha256(ByteView key, ByteView data) {
    Hash32 out{};
    unsigned int len = 0;
    if (HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), data.data(), data.size(), out.data(), &len) ==
            nullptr ||
        len != out.size()) {
        throw Error(ErrorCode::IoError, "HMAC-SHA256 failed");
    }
    return out;
}

}  // namespace dvre::crypto
