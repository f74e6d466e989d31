#include "dvre/crypto/secp256k1.hpp"

#include <memory>

#include <openssl/bn.h>
#include <openssl/ec.h>
#include <openssl/obj_mac.h>

#include "dvre/crypto/sha256.hpp"

namespace dvre::crypto::secp256k1 {
namespace {

struct BnFree {
    void operator()(BIGNUM* p) const { BN_clear_free(p); }
};
struct CtxFree {
    void operator()(BN_CTX* p) const { BN_CTX_free(p); }
};
struct PointFree {
    void operator()(EC_POINT* p) const { EC_POINT_clear_free(p); }
};
struct GroupFree {
    void operator()(EC_GROUP* p) const { EC_GROUP_free(p); }
};

using Bn = std::unique_ptr<BIGNUM, BnFree>;
using BnCtx = std::unique_ptr<BN_CTX, CtxFree>;
using Point = std::unique_ptr<EC_POINT, PointFree>;
using Group = std::unique_ptr<EC_GROUP, GroupFree>;

void ok(int rc, const char* what) {
    if (rc != 1) throw Error(ErrorCode::IoError, std::string("secp256k1: ") + what);
}

Bn bn() {
    Bn b(BN_new());
    if (!b) throw Error(ErrorCode::IoError, "BN_new failed");
    return b;
}

Bn bn_from(ByteView bytes) {
    Bn b(BN_bin2bn(bytes.data(), static_cast<int>(bytes.size()), nullptr));
    if (!b) throw Error(ErrorCode::IoError, "BN_bin2bn failed");
    return b;
}

void bn_to32(const BIGNUM* v, std::uint8_t* out) {
    ok(BN_bn2binpad(v, out, 32) == 32 ? 1 : 0, "bn2binpad");
}

// Curve constants shared by every call. EC_GROUP is immutable after
// construction, so a single instance is safe across threads.
struct Curve {
    Group group;
    Bn order;
    Bn half_order;
    Bn field;

    Curve() {
        group.reset(EC_GROUP_new_by_curve_name(NID_secp256k1));
        if (!group) throw Error(ErrorCode::IoError, "secp256k1 curve unavailable");
        order.reset(BN_dup(EC_GROUP_get0_order(group.get())));
        half_order.reset(BN_dup(order.get()));
        ok(BN_rshift1(half_order.get(), half_order.get()), "rshift");
        field = bn();
        BnCtx ctx(BN_CTX_new());
        ok(EC_GROUP_get_curve(group.get(), field.get(), nullptr, nullptr, ctx.get()), "get_curve");
    }
};

const Curve& curve() {
    static const Curve c;
    return c;
}

BnCtx new_ctx() {
    BnCtx ctx(BN_CTX_new());
    if (!ctx) throw Error(ErrorCode::IoError, "BN_CTX_new failed");
    return ctx;
}

Point new_point() {
    Point p(EC_POINT_new(curve().group.get()));
    if (!p) throw Error(ErrorCode::IoError, "EC_POINT_new failed");
    return p;
}

bool in_scalar_range(const BIGNUM* v) {
    return !BN_is_zero(v) && !BN_is_negative(v) && BN_cmp(v, curve().order.get()) < 0;
}

PublicKey encode_point(const EC_POINT* p, BN_CTX* ctx) {
    Bn x = bn(), y = bn();
    ok(EC_POINT_get_affine_coordinates(curve().group.get(), p, x.get(), y.get(), ctx), "affine");
    PublicKey out{};
    bn_to32(x.get(), out.data());
    bn_to32(y.get(), out.data() + 32);
    return out;
}

// Deterministic nonce generator of RFC 6979 section 3.2 with HMAC-SHA256.
class Rfc6979 {
public:
    Rfc6979(const PrivateKey& key, const Hash32& digest) {
        // bits2octets: reduce the digest modulo n.
        Bn h = bn_from(digest);
        BnCtx ctx = new_ctx();
        ok(BN_nnmod(h.get(), h.get(), curve().order.get(), ctx.get()), "nnmod");
        std::array<std::uint8_t, 32> h_oct{};
        bn_to32(h.get(), h_oct.data());

        v_.fill(0x01);
        k_.fill(0x00);
        step(0x00, key, h_oct);
        v_ = mac(v_);
        step(0x01, key, h_oct);
        v_ = mac(v_);
        secure_wipe(h_oct);
    }

    ~Rfc6979() {
        secure_wipe(k_);
        secure_wipe(v_);
    }

    Bn next() {
        for (;;) {
            if (!first_) {
                Bytes data(v_.begin(), v_.end());
                data.push_back(0x00);
                k_ = hmac_sha256(k_, data);
                v_ = mac(v_);
            }
            first_ = false;
            v_ = mac(v_);
            Bn k = bn_from(v_);
            if (in_scalar_range(k.get())) return k;
        }
    }

private:
    Hash32 mac(ByteView data) const { return hmac_sha256(k_, data); }

    void step(std::uint8_t sep, const PrivateKey& key, const std::array<std::uint8_t, 32>& h) {
        Bytes data(v_.begin(), v_.end());
        data.push_back(sep);
        data.insert(data.end(), key.begin(), key.end());
        data.insert(data.end(), h.begin(), h.end());
        k_ = hmac_sha256(k_, data);
        secure_wipe(data);
    }

    Hash32 k_{};
    Hash32 v_{};
    bool first_ = true;
};

}  // namespace

bool is_valid_private_key(const PrivateKey& key) {
    Bn d = bn_from(key);
    return in_scalar_range(d.get());
}

PublicKey derive_public_key(const PrivateKey& key) {
    Bn d = bn_from(key);
    if (!in_scalar_range(d.get())) throw Error(ErrorCode::InvalidEntropy, "private key outside [1, n-1]");
    BnCtx ctx = new_ctx();
    Point q = new_point();
    ok(EC_POINT_mul(curve().group.get(), q.get(), d.get(), nullptr, nullptr, ctx.get()), "mul");
    return encode_point(q.get(), ctx.get());
}

RecoverableSignature sign_digest(const PrivateKey& key, const Hash32& digest) {
    const Curve& c = curve();
    Bn d = bn_from(key);
    if (!in_scalar_range(d.get())) throw Error(ErrorCode::InvalidEntropy, "private key outside [1, n-1]");
    Bn e = bn_from(digest);
    BnCtx ctx = new_ctx();
    Rfc6979 nonces(key, digest);

    for (;;) {
        Bn k = nonces.next();
        Point r_point = new_point();
        ok(EC_POINT_mul(c.group.get(), r_point.get(), k.get(), nullptr, nullptr, ctx.get()), "mul");
        Bn rx = bn(), ry = bn();
        ok(EC_POINT_get_affine_coordinates(c.group.get(), r_point.get(), rx.get(), ry.get(), ctx.get()), "affine");

        Bn r = bn();
        ok(BN_nnmod(r.get(), rx.get(), c.order.get(), ctx.get()), "nnmod");
        if (BN_is_zero(r.get())) continue;

        int recid = (BN_is_odd(ry.get()) ? 1 : 0) | (BN_cmp(rx.get(), c.order.get()) >= 0 ? 2 : 0);

        // s = k^-1 (e + r d) mod n
        Bn kinv(BN_mod_inverse(nullptr, k.get(), c.order.get(), ctx.get()));
        if (!kinv) throw Error(ErrorCode::IoError, "mod_inverse failed");
        Bn rd = bn(), sum = bn(), s = bn();
        ok(BN_mod_mul(rd.get(), r.get(), d.get(), c.order.get(), ctx.get()), "mod_mul");
        ok(BN_mod_add(sum.get(), e.get(), rd.get(), c.order.get(), ctx.get()), "mod_add");
        ok(BN_mod_mul(s.get(), kinv.get(), sum.get(), c.order.get(), ctx.get()), "mod_mul");
        if (BN_is_zero(s.get())) continue;

        if (BN_cmp(s.get(), c.half_order.get()) > 0) {
            ok(BN_sub(s.get(), c.order.get(), s.get()), "sub");
            recid ^= 1;
        }

        RecoverableSignature sig{};
        bn_to32(r.get(), sig.data());
        bn_to32(s.get(), sig.data() + 32);
        sig[64] = static_cast<std::uint8_t>(27 + recid);
        return sig;
    }
}

std::optional<PublicKey> recover(const Hash32& digest, const RecoverableSignature& sig) {
    const Curve& c = curve();
    if (sig[64] != 27 && sig[64] != 28 && sig[64] != 29 && sig[64] != 30) return std::nullopt;
    const int recid = sig[64] - 27;

    Bn r = bn_from(ByteView(sig.data(), 32));
    Bn s = bn_from(ByteView(sig.data() + 32, 32));
    if (!in_scalar_range(r.get()) || !in_scalar_range(s.get())) return std::nullopt;
    if (BN_cmp(s.get(), c.half_order.get()) > 0) return std::nullopt;

    BnCtx ctx = new_ctx();
    Bn x(BN_dup(r.get()));
    if (recid & 2) ok(BN_add(x.get(), x.get(), c.order.get()), "add");
    if (BN_cmp(x.get(), c.field.get()) >= 0) return std::nullopt;

    Point r_point = new_point();
    if (EC_POINT_set_compressed_coordinates(c.group.get(), r_point.get(), x.get(), recid & 1, ctx.get()) != 1) {
        return std::nullopt;
    }

    // Q = r^-1 (s R - e G)
    Bn rinv(BN_mod_inverse(nullptr, r.get(), c.order.get(), ctx.get()));
    if (!rinv) return std::nullopt;
    Bn e = bn_from(digest);
    ok(BN_nnmod(e.get(), e.get(), c.order.get(), ctx.get()), "nnmod");
    Bn u1 = bn(), u2 = bn();
    ok(BN_mod_mul(u1.get(), e.get(), rinv.get(), c.order.get(), ctx.get()), "mod_mul");
    ok(BN_mod_sub(u1.get(), c.order.get(), u1.get(), c.order.get(), ctx.get()), "mod_sub");
    ok(BN_mod_mul(u2.get(), s.get(), rinv.get(), c.order.get(), ctx.get()), "mod_mul");

    Point q = new_point();
    ok(EC_POINT_mul(c.group.get(), q.get(), u1.get(), r_point.get(), u2.get(), ctx.get()), "mul");
    if (EC_POINT_is_at_infinity(c.group.get(), q.get())) return std::nullopt;
    return encode_point(q.get(), ctx.get());
}

}  // namespace dvre::crypto::secp256k1
