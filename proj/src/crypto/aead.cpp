#include "dvre/crypto/aead.hpp"

#include <climits>
#include <memory>

#include <openssl/evp.h>

namespace dvre::crypto::aead {
namespace {

struct CtxDeleter {
    void operator()(EVP_CIPHER_CTX* ctx) const { EVP_CIPHER_CTX_free(ctx); }
};
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CtxDeleter>;

CipherCtx make_ctx() {
    CipherCtx ctx(EVP_CIPHER_CTX_new());
    if (!ctx) throw Error(ErrorCode::IoError, "EVP_CIPHER_CTX_new failed");
    return ctx;
}

void check(int rc, const char* what) {
    if (rc != 1) throw Error(ErrorCode::IoError, std::string("AES-GCM: ") + what);
}

int checked_len(std::size_t n) {
    if (n > static_cast<std::size_t>(INT_MAX)) throw Error(ErrorCode::InvalidArgument, "AES-GCM input too large");
    return static_cast<int>(n);
}

}  // namespace

Bytes seal(const Key& key, const Nonce& nonce, ByteView plaintext, ByteView aad) {
    auto ctx = make_ctx();
    check(EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, nullptr, nullptr), "init");
    check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_IVLEN, kNonceSize, nullptr), "ivlen");
    check(EVP_EncryptInit_ex(ctx.get(), nullptr, nullptr, key.data(), nonce.data()), "key");
    int len = 0;
    if (!aad.empty()) check(EVP_EncryptUpdate(ctx.get(), nullptr, &len, aad.data(), checked_len(aad.size())), "aad");
    Bytes out(plaintext.size() + kTagSize);
    int written = 0;
    if (!plaintext.empty()) {
        check(EVP_EncryptUpdate(ctx.get(), out.data(), &len, plaintext.data(), checked_len(plaintext.size())),
              "update");
        written = len;
    }
    check(EVP_EncryptFinal_ex(ctx.get(), out.data() + written, &len), "final");
    check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, kTagSize, out.data() + plaintext.size()), "tag");
    return out;
}

std::optional<Bytes> open(const Key& key, const Nonce& nonce, ByteView sealed, ByteView aad) {
    if (sealed.size() < kTagSize) return std::nullopt;
    const std::size_t body = sealed.size() - kTagSize;
    auto ctx = make_ctx();
    check(EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, nullptr, nullptr), "init");
    check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_IVLEN, kNonceSize, nullptr), "ivlen");
    check(EVP_DecryptInit_ex(ctx.get(), nullptr, nullptr, key.data(), nonce.data()), "key");
    int len = 0;
    if (!aad.empty()) check(EVP_DecryptUpdate(ctx.get(), nullptr, &len, aad.data(), checked_len(aad.size())), "aad");
    Bytes out(body);
    int written = 0;
    if (body > 0) {
        check(EVP_DecryptUpdate(ctx.get(), out.data(), &len, sealed.data(), checked_len(body)), "update");
        written = len;
    }
    Bytes tag(sealed.begin() + static_cast<std::ptrdiff_t>(body), sealed.end());
    check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, kTagSize, tag.data()), "set tag");
    if (EVP_DecryptFinal_ex(ctx.get(), out.data() + written, &len) != 1) {
        secure_wipe(out);
        return std::nullopt;
    }
    return out;
}

}  // namespace dvre::crypto::aead
