#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "dvre/contracts/platform.hpp"
#include "dvre/crypto/aead.hpp"
#include "dvre/keynet/acc.hpp"
#include "dvre/keynet/bundle.hpp"
#include "dvre/keynet/client.hpp"
#include "dvre/keynet/field.hpp"
#include "dvre/keynet/node.hpp"
#include "dvre/keynet/shamir.hpp"
#include "dvre/keynet/zip.hpp"
#include "dvre/store/store.hpp"
#include "support.hpp"

namespace dvre::keynet {
namespace {

using contracts::ContractDetails;
using contracts::Platform;
using contracts::PlatformOptions;
using contracts::UserAccess;
using test::code_of;
using test::kMar27;
using test::kMar28;
using test::kMar29;
using test::kMar30;
using test::key_wallet;

constexpr Timestamp kDay = 86400;

// ---- field ----

TEST(Field, ModulusIsTwoTo256Minus189) {
    Hash32 p = fixed_from_hex<32>("ffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffff43");
    EXPECT_FALSE(FieldElement::in_range(p));
    --p[31];
    EXPECT_TRUE(FieldElement::in_range(p));
    ++p[31];
    EXPECT_EQ(code_of([&] { FieldElement::from_bytes(p); }), ErrorCode::InvalidArgument);
    EXPECT_NO_THROW(FieldElement::from_bytes(Hash32{0xff, 0xff}));
}

TEST(Field, Arithmetic) {
    Hash32 pm1 = fixed_from_hex<32>("ffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffff42");
    FieldElement minus_one = FieldElement::from_bytes(pm1);
    EXPECT_EQ(minus_one + FieldElement(1), FieldElement(0));
    EXPECT_EQ(FieldElement(0) - FieldElement(1), minus_one);
    EXPECT_EQ(minus_one * minus_one, FieldElement(1));
    EXPECT_EQ(FieldElement(7).inverse() * FieldElement(7), FieldElement(1));
    EXPECT_EQ(code_of([] { FieldElement(0).inverse(); }), ErrorCode::InvalidArgument);
    for (int i = 0; i < 20; ++i) {
        FieldElement r = FieldElement::random();
        EXPECT_EQ(FieldElement::from_bytes(r.to_bytes()), r);
        if (!(r == FieldElement(0))) EXPECT_EQ(r * r.inverse(), FieldElement(1));
    }
}

// ---- shamir ----

const Key256 kDek = fixed_from_hex<32>("0f1e2d3c4b5a69788796a5b4c3d2e1f00112233445566778899aabbccddeeff0");
const KeyId kKeyId = fixed_from_hex<16>("00112233445566778899aabbccddeeff");

std::vector<KeyShare> oracle_shares() {
    std::vector<Hash32> coeffs(2);
    coeffs[0].fill(0xaa);
    coeffs[1].fill(0x55);
    return split_key_with_coefficients(kDek, coeffs, 5, kKeyId);
}

TEST(Shamir, MatchesIndependentEvaluation) {
    // f(x) = dek + 0xaa..aa x + 0x55..55 x^2 mod 2^256-189, evaluated by an
    // arbitrary-precision reference implementation.
    const char* expected[] = {
        "0f1e2d3c4b5a69788796a5b4c3d2e1f00112233445566778899aabbccddef0ac",
        "b9c8d7e6f60514233241505f6e7d8c9aabbccddef00112233445566778899c12",
        "0f1e2d3c4b5a69788796a5b4c3d2e1f00112233445566778899aabbccddef39c",
        "0f1e2d3c4b5a69788796a5b4c3d2e1f00112233445566778899aabbccddef5d0",
        "b9c8d7e6f60514233241505f6e7d8c9aabbccddef0011223344556677889a2ae",
    };
    auto shares = oracle_shares();
    ASSERT_EQ(shares.size(), 5u);
    for (unsigned i = 0; i < 5; ++i) {
        EXPECT_EQ(shares[i].node_index, i + 1);
        EXPECT_EQ(shares[i].threshold, 3u);
        EXPECT_EQ(shares[i].key_id, kKeyId);
        EXPECT_EQ(to_hex(shares[i].share_value), expected[i]) << "x=" << i + 1;
    }
}

// Solves the Vandermonde system for all three coefficients by Gaussian
// elimination, a second route to f(0) that shares no code with combine_shares.
FieldElement solve_constant_term(const std::vector<KeyShare>& s) {
    FieldElement m[3][4];
    for (int r = 0; r < 3; ++r) {
        FieldElement x(s[r].node_index);
        m[r][0] = FieldElement(1);
        m[r][1] = x;
        m[r][2] = x * x;
        m[r][3] = FieldElement::from_bytes(s[r].share_value);
    }
    for (int c = 0; c < 3; ++c) {
        FieldElement inv = m[c][c].inverse();
        for (int k = 0; k < 4; ++k) m[c][k] = m[c][k] * inv;
        for (int r = 0; r < 3; ++r) {
            if (r == c) continue;
            FieldElement f = m[r][c];
            for (int k = 0; k < 4; ++k) m[r][k] = m[r][k] - f * m[c][k];
        }
    }
    return m[0][3];
}

TEST(Shamir, EveryThreeSubsetRecovers) {
    auto shares = oracle_shares();
    int subsets = 0;
    for (unsigned a = 0; a < 5; ++a)
        for (unsigned b = a + 1; b < 5; ++b)
            for (unsigned c = b + 1; c < 5; ++c) {
                std::vector<KeyShare> pick{shares[c], shares[a], shares[b]};
                EXPECT_EQ(combine_shares(pick), kDek);
                EXPECT_EQ(solve_constant_term(pick).to_bytes(), kDek);
                ++subsets;
            }
    EXPECT_EQ(subsets, 10);
    EXPECT_EQ(combine_shares(shares), kDek);
}

TEST(Shamir, RandomSplitsRoundTrip) {
    std::mt19937 rng(3);
    for (int i = 0; i < 30; ++i) {
        unsigned n = 1 + rng() % 12, t = 1 + rng() % n;
        Key256 dek = generate_dek();
        auto shares = split_key(dek, n, t, kKeyId);
        std::shuffle(shares.begin(), shares.end(), rng);
        shares.resize(t);
        EXPECT_EQ(combine_shares(shares), dek) << n << "/" << t;
    }
}

TEST(Shamir, SingleShareIsTheKey) {
    Key256 dek = generate_dek();
    auto shares = split_key(dek, 1, 1, kKeyId);
    ASSERT_EQ(shares.size(), 1u);
    EXPECT_EQ(shares[0].share_value, dek);
}

TEST(Shamir, Rejections) {
    Key256 dek = generate_dek();
    EXPECT_EQ(code_of([&] { split_key(dek, 3, 4, kKeyId); }), ErrorCode::BadThreshold);
    EXPECT_EQ(code_of([&] { split_key(dek, 3, 0, kKeyId); }), ErrorCode::BadThreshold);
    EXPECT_EQ(code_of([&] { split_key(dek, 256, 3, kKeyId); }), ErrorCode::BadThreshold);
    Key256 big;
    big.fill(0xff);
    EXPECT_EQ(code_of([&] { split_key(big, 5, 3, kKeyId); }), ErrorCode::InvalidArgument);

    auto shares = split_key(dek, 5, 3, kKeyId);
    EXPECT_EQ(code_of([] { combine_shares({}); }), ErrorCode::InsufficientShares);
    std::vector<KeyShare> two(shares.begin(), shares.begin() + 2);
    EXPECT_EQ(code_of([&] { combine_shares(two); }), ErrorCode::InsufficientShares);
    std::vector<KeyShare> dup{shares[0], shares[0], shares[1]};
    EXPECT_EQ(code_of([&] { combine_shares(dup); }), ErrorCode::InsufficientShares);

    auto other = split_key(dek, 5, 3, KeyId{1});
    std::vector<KeyShare> mixed{shares[0], shares[1], other[2]};
    EXPECT_EQ(code_of([&] { combine_shares(mixed); }), ErrorCode::MixedKeyIds);
}

TEST(Shamir, TooFewSharesRevealNothingUsable) {
    Key256 dek = generate_dek();
    crypto::aead::Nonce nonce{};
    Bytes sealed = crypto::aead::seal(dek, nonce, to_bytes("secret"), {});
    auto shares = split_key(dek, 5, 3, kKeyId);
    for (int i = 0; i < 20; ++i) {
        // Two real shares plus a forged third.
        std::vector<KeyShare> pick{shares[0], shares[3], shares[4]};
        pick[2].share_value = FieldElement::random().to_bytes();
        Key256 guess = combine_shares(pick);
        EXPECT_NE(guess, dek);
        EXPECT_FALSE(crypto::aead::open(guess, nonce, sealed, {}).has_value());
    }
}

// ---- fixtures for ACCs and nodes ----

class Workspace : public ::testing::Test {
protected:
    Workspace() : platform_(PlatformOptions{ledger::GasSchedule::calibrated(), kMar27}) {
        for (auto* w : {&owner_, &member_, &outsider_})
            platform_.register_user(w->address, {w->address, "u", "org", "NL"});
        group_ = *platform_.create_group(owner_.address, ContractDetails{"DataSharing", owner_.address, "", {}, {}}).created;
        platform_.associate_users_to_group(group_, owner_.address,
                                           {UserAccess{member_.address, kMar27, kMar29 + kDay - 1}});
    }

    Platform platform_;
    wallet::Wallet owner_ = key_wallet(1);
    wallet::Wallet member_ = key_wallet(2);
    wallet::Wallet outsider_ = key_wallet(3);
    ContractId group_;
};

using AccTest = Workspace;

TEST_F(AccTest, EncodingRoundTrips) {
    Acc acc = any_of({is_owner(group_), all_of({group_member(group_), time_window(kMar27, kMar29)})});
    Bytes enc = encode_acc(acc);
    EXPECT_EQ(decode_acc(enc), acc);
    EXPECT_EQ(acc_digest(acc), acc_digest(decode_acc(enc)));
    EXPECT_NE(acc_digest(acc), acc_digest(any_of({is_owner(group_)})));
    EXPECT_EQ(acc_from_json(acc_to_json(acc)), acc);
    enc.push_back(0);
    EXPECT_EQ(code_of([&] { decode_acc(enc); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([&] { decode_acc(Bytes{9}); }), ErrorCode::InvalidArgument);
}

TEST_F(AccTest, EncodingIsPinned) {
    // tag 3 (time window), from and to as big-endian i64.
    EXPECT_EQ(to_hex(encode_acc(time_window(1, 2))), "0300000000000000010000000000000002");
}

TEST_F(AccTest, JsonAcceptsDates) {
    Acc acc = acc_from_json(
        R"({"type":"all_of","terms":[{"type":"group_member","group":")" + group_.str() +
        R"("},{"type":"time_window","from":"2024-03-27","to":"2024-03-29"}]})");
    EXPECT_EQ(acc, all_of({group_member(group_), time_window(kMar27, kMar29 + kDay - 1)}));
    for (const char* bad : {"{}", R"({"type":"any_of","terms":[]})", R"({"type":"nope"})", "[",
                            R"({"type":"time_window","from":"2024-03-29","to":"2024-03-27"})"}) {
        EXPECT_EQ(code_of([&] { validate_acc(acc_from_json(bad)); }), ErrorCode::InvalidArgument) << bad;
    }
}

TEST_F(AccTest, Validation) {
    EXPECT_NO_THROW(validate_acc(group_member(group_), platform_));
    EXPECT_EQ(code_of([&] { validate_acc(group_member(ContractId(outsider_.address)), platform_); }),
              ErrorCode::UnknownGroup);
    EXPECT_EQ(code_of([&] { validate_acc(all_of({})); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([&] { validate_acc(time_window(5, 4)); }), ErrorCode::InvalidArgument);
}

TEST_F(AccTest, Evaluation) {
    Acc member = group_member(group_);
    EXPECT_TRUE(evaluate_acc(member, member_.address, kMar28, platform_));
    EXPECT_FALSE(evaluate_acc(member, member_.address, kMar30, platform_));
    EXPECT_FALSE(evaluate_acc(member, outsider_.address, kMar28, platform_));
    EXPECT_TRUE(evaluate_acc(member, owner_.address, kMar30, platform_));
    EXPECT_TRUE(evaluate_acc(is_owner(group_), owner_.address, 0, platform_));
    EXPECT_FALSE(evaluate_acc(is_owner(group_), member_.address, kMar28, platform_));
    Acc window = time_window(kMar28, kMar28 + 10);
    EXPECT_TRUE(evaluate_acc(window, outsider_.address, kMar28 + 10, platform_));
    EXPECT_FALSE(evaluate_acc(window, outsider_.address, kMar28 + 11, platform_));
    Acc both = all_of({member, window});
    EXPECT_TRUE(evaluate_acc(both, member_.address, kMar28, platform_));
    EXPECT_FALSE(evaluate_acc(both, member_.address, kMar29, platform_));
    Acc either = any_of({is_owner(group_), window});
    EXPECT_TRUE(evaluate_acc(either, outsider_.address, kMar28, platform_));
    EXPECT_FALSE(evaluate_acc(either, outsider_.address, kMar29, platform_));
    // An unknown group fails even behind a satisfied branch.
    Acc dangling = any_of({window, group_member(ContractId(outsider_.address))});
    EXPECT_EQ(code_of([&] { evaluate_acc(dangling, outsider_.address, kMar28, platform_); }), ErrorCode::UnknownGroup);
}

// ---- zip and bundle ----

TEST(Zip, ReadsForeignArchive) {
    // Written by an independent ZIP implementation (stored entries).
    Bytes archive = from_hex(
        "504b030414000000000000007b58339a30710d0000000d0000000d0000006d657461646174612e6a736f6e7b2276657273696f6e2"
        "23a317d504b030414000000000000007b5888e2cece10000000100000000b0000007061796c6f61642e656e6300010203040506"
        "0708090a0b0c0d0e0f504b0102140314000000000000007b58339a30710d0000000d0000000d0000000000000000000000800100"
        "0000006d657461646174612e6a736f6e504b0102140314000000000000007b5888e2cece10000000100000000b00000000000000"
        "000000008001380000007061796c6f61642e656e63504b0506000000000200020074000000710000000000");
    auto entries = zip::read(archive);
    ASSERT_EQ(entries.size(), 2u);
    EXPECT_EQ(entries[0].name, "metadata.json");
    EXPECT_EQ(to_string(entries[0].data), R"({"version":1})");
    EXPECT_EQ(entries[1].name, "payload.enc");
    EXPECT_EQ(entries[1].data, from_hex("000102030405060708090a0b0c0d0e0f"));
    // Our writer emits the same local header for the same input, apart from
    // the UTF-8 name flag.
    Bytes ours = zip::write({{"metadata.json", to_bytes(R"({"version":1})")}}, kMar27);
    Bytes head(archive.begin(), archive.begin() + 30), our_head(ours.begin(), ours.begin() + 30);
    head[7] = our_head[7] = 0;
    EXPECT_EQ(to_hex(our_head), to_hex(head));
}

TEST(Zip, RoundTripAndTamper) {
    std::mt19937_64 rng(11);
    std::vector<zip::Entry> in{{"a.bin", test::random_content(rng, 1000)}, {"empty", {}}, {"ü.txt", to_bytes("x")}};
    Bytes archive = zip::write(in, kMar28);
    auto out = zip::read(archive);
    ASSERT_EQ(out.size(), in.size());
    for (std::size_t i = 0; i < in.size(); ++i) {
        EXPECT_EQ(out[i].name, in[i].name);
        EXPECT_EQ(out[i].data, in[i].data);
    }
    archive[30 + 5 + 100] ^= 1;  // inside a.bin's data
    EXPECT_EQ(code_of([&] { zip::read(archive); }), ErrorCode::IntegrityFailure);
    EXPECT_EQ(code_of([] { zip::read(to_bytes("not a zip")); }), ErrorCode::IntegrityFailure);
}

BundleMetadata sample_metadata(const ContractId& g) {
    BundleMetadata m;
    m.file_name = "mask.png";
    m.content_length = 3;
    m.acc = group_member(g);
    m.chain = "dvre";
    m.lit_network = "dvre-local";
    m.key_id = kKeyId;
    m.n = 5;
    m.t = 3;
    m.owner = key_wallet(1).address;
    m.created_at = kMar28;
    return m;
}

TEST(Bundle, RoundTrip) {
    EncryptedBundle b{sample_metadata(ContractId(key_wallet(9).address)), {1, 2, 3}, Bytes(3 + 16, 7)};
    Bytes zipped = b.to_zip();
    EncryptedBundle back = EncryptedBundle::from_zip(zipped);
    EXPECT_EQ(back.metadata, b.metadata);
    EXPECT_EQ(back.nonce, b.nonce);
    EXPECT_EQ(back.sealed, b.sealed);
    EXPECT_EQ(BundleMetadata::from_json(b.metadata.to_json()), b.metadata);

    auto entries = zip::read(zipped);
    std::set<std::string> names;
    for (auto& e : entries) names.insert(e.name);
    EXPECT_EQ(names, (std::set<std::string>{"payload.enc", "metadata.json", "README.txt"}));

    b.sealed.pop_back();
    EXPECT_EQ(code_of([&] { EncryptedBundle::from_zip(b.to_zip()); }), ErrorCode::IntegrityFailure);
    EXPECT_EQ(code_of([] { BundleMetadata::from_json("{}"); }), ErrorCode::IntegrityFailure);
}

TEST(Bundle, AssociatedDataBindsMetadata) {
    BundleMetadata a = sample_metadata(ContractId(key_wallet(9).address));
    BundleMetadata b = a;
    b.acc = is_owner(ContractId(key_wallet(9).address));
    EXPECT_NE(a.associated_data(), b.associated_data());
    b = a;
    b.file_name = "other";
    EXPECT_NE(a.associated_data(), b.associated_data());
}

// ---- nodes ----

class NodeTest : public Workspace {
protected:
    NodeTest() : node_(1, platform_) {
        auto shares = split_key(generate_dek(), 5, 3, kKeyId);
        share_ = shares[0];
        node_.store_share(StoreShareRequest{share_, group_member(group_), "dvre", "dvre-local",
                                            wallet::sign_auth(owner_, encrypt_message(kKeyId))});
    }

    ShareRequest request(const wallet::Wallet& w) const {
        return ShareRequest{kKeyId, acc_digest(group_member(group_)), "dvre", "dvre-local",
                            wallet::sign_auth(w, decrypt_message(kKeyId)), kMar28};
    }

    std::string denial(const ShareResponse& r) const {
        if (auto* d = std::get_if<Denial>(&r)) return d->reason;
        return "granted";
    }

    KeyNode node_;
    KeyShare share_;
};

TEST_F(NodeTest, GrantsAtLedgerTime) {
    platform_.ledger().set_time(kMar28);
    auto r = node_.handle_share_request(request(member_));
    ASSERT_TRUE(std::holds_alternative<KeyShare>(r));
    EXPECT_EQ(std::get<KeyShare>(r), share_);
    EXPECT_EQ(denial(node_.handle_share_request(request(outsider_))), "acc_failed");
    platform_.ledger().set_time(kMar30);
    auto late = request(member_);
    late.claimed_at = kMar28;  // the client's claim does not matter
    EXPECT_EQ(denial(node_.handle_share_request(late)), "acc_failed");
    EXPECT_EQ(denial(node_.handle_share_request(request(owner_))), "granted");
}

TEST_F(NodeTest, Denials) {
    auto r = request(member_);
    r.auth.address = outsider_.address;
    EXPECT_EQ(denial(node_.handle_share_request(r)), "bad_signature");

    r = request(member_);
    r.auth = wallet::sign_auth(member_, encrypt_message(kKeyId));
    EXPECT_EQ(denial(node_.handle_share_request(r)), "bad_message");
    r.auth = wallet::sign_auth(member_, decrypt_message(KeyId{9}));
    EXPECT_EQ(denial(node_.handle_share_request(r)), "bad_message");

    r = request(member_);
    r.lit_network = "elsewhere";
    EXPECT_EQ(denial(node_.handle_share_request(r)), "network_mismatch");

    r = request(member_);
    r.acc_digest = acc_digest(is_owner(group_));
    EXPECT_EQ(denial(node_.handle_share_request(r)), "acc_mismatch");

    platform_.ledger().set_time(kMar28);
    r = request(member_);
    EXPECT_EQ(denial(node_.handle_share_request(r)), "granted");
    EXPECT_EQ(denial(node_.handle_share_request(r)), "replayed");

    r.key_id = KeyId{7};
    EXPECT_EQ(code_of([&] { node_.handle_share_request(r); }), ErrorCode::UnknownKeyId);
    node_.set_online(false);
    EXPECT_EQ(code_of([&] { node_.handle_share_request(request(member_)); }), ErrorCode::NodeUnavailable);
}

TEST_F(NodeTest, SessionLoginNeedsVerifier) {
    platform_.ledger().set_time(kMar28);
    auto r = request(member_);
    r.auth = wallet::sign_auth(member_, wallet::make_login_challenge());
    EXPECT_EQ(denial(node_.handle_share_request(r)), "bad_message");
    node_.set_session_verifier([&](const wallet::AuthSig& s) { return s.address == member_.address; });
    EXPECT_EQ(denial(node_.handle_share_request(r)), "granted");
}

TEST_F(NodeTest, StoreGuards) {
    auto other = split_key(generate_dek(), 5, 3, KeyId{5});
    StoreShareRequest req{other[0], group_member(group_), "dvre", "dvre-local",
                          wallet::sign_auth(owner_, encrypt_message(KeyId{5}))};
    StoreShareRequest wrong_index = req;
    wrong_index.share = other[1];
    EXPECT_EQ(code_of([&] { node_.store_share(wrong_index); }), ErrorCode::InvalidArgument);
    StoreShareRequest bad_scope = req;
    bad_scope.auth = wallet::sign_auth(owner_, decrypt_message(KeyId{5}));
    EXPECT_EQ(code_of([&] { node_.store_share(bad_scope); }), ErrorCode::SignatureInvalid);
    auto stranger = wallet::generate_wallet();
    StoreShareRequest unregistered = req;
    unregistered.auth = wallet::sign_auth(stranger, encrypt_message(KeyId{5}));
    EXPECT_EQ(code_of([&] { node_.store_share(unregistered); }), ErrorCode::AccessDenied);
    EXPECT_NO_THROW(node_.store_share(req));
    EXPECT_TRUE(node_.holds(KeyId{5}));
    node_.discard(KeyId{5});
    EXPECT_FALSE(node_.holds(KeyId{5}));
}

TEST_F(NodeTest, AuditLogHoldsNoKeyMaterial) {
    platform_.ledger().set_time(kMar28);
    node_.handle_share_request(request(member_));
    node_.handle_share_request(request(outsider_));
    auto log = node_.audit_log();
    ASSERT_EQ(log.size(), 3u);
    EXPECT_EQ(log[0].action, "store");
    EXPECT_TRUE(log[1].granted);
    EXPECT_EQ(log[1].evaluated_at, kMar28);
    EXPECT_FALSE(log[2].granted);
    EXPECT_EQ(log[2].reason, "acc_failed");
    const std::string share_hex = to_hex(share_.share_value);
    for (const auto& e : log) {
        for (const auto& field : {e.action, e.reason, to_hex(e.key_id), e.requester.to_checksum_hex()})
            EXPECT_EQ(field.find(share_hex.substr(0, 16)), std::string::npos);
    }
}

// ---- client ----

class ClientTest : public Workspace {
protected:
    ClientTest() : store_(dir_.path()), network_(NetworkParams{}, platform_) {}

    test::TempDir dir_;
    store::BlockStore store_;
    KeyNetwork network_;
};

TEST_F(ClientTest, RoundTripsForMemberInsideWindow) {
    std::mt19937_64 rng(1);
    NamedFile file{"#binary#mask.png", test::random_content(rng, 5000)};
    auto up = encrypt_file_and_upload(file, group_member(group_), WalletCredential(owner_), network_, store_, platform_);
    EXPECT_EQ(up.file_name, file.name);
    EXPECT_EQ(up.bundle_size, store_.get(up.bundle_cid).size());

    platform_.ledger().set_time(kMar28);
    NamedFile got = decrypt_file_and_download(up.bundle_cid, WalletCredential(member_), network_, store_);
    EXPECT_EQ(got.name, file.name);
    EXPECT_EQ(got.content, file.content);

    platform_.ledger().set_time(kMar30);
    try {
        decrypt_file_and_download(up.bundle_cid, WalletCredential(member_), network_, store_);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::AccessDenied);
        EXPECT_NE(std::string(e.what()).find("acc_failed"), std::string::npos);
    }
    EXPECT_EQ(decrypt_file_and_download(up.bundle_cid, WalletCredential(owner_), network_, store_).content,
              file.content);
}

TEST_F(ClientTest, EmptyFileAndPlaintextHidden) {
    auto up = encrypt_file_and_upload({"empty.txt", {}}, is_owner(group_), WalletCredential(owner_), network_, store_,
                                      platform_);
    EXPECT_TRUE(decrypt_file_and_download(up.bundle_cid, WalletCredential(owner_), network_, store_).content.empty());

    const std::string secret = "patient 0042 diagnosis: confidential marker string";
    auto up2 = encrypt_file_and_upload({"notes.txt", to_bytes(secret)}, is_owner(group_), WalletCredential(owner_),
                                       network_, store_, platform_);
    std::string raw = to_string(store_.get(up2.bundle_cid));
    EXPECT_EQ(raw.find("confidential"), std::string::npos);
}

TEST_F(ClientTest, ThresholdOfReachableNodes) {
    auto up = encrypt_file_and_upload({"f", to_bytes("data")}, is_owner(group_), WalletCredential(owner_), network_,
                                      store_, platform_);
    for (std::uint32_t a = 1; a <= 5; ++a)
        for (std::uint32_t b = a + 1; b <= 5; ++b) {
            network_.set_offline({a, b});
            EXPECT_EQ(to_string(decrypt_file_and_download(up.bundle_cid, WalletCredential(owner_), network_, store_).content),
                      "data");
            for (std::uint32_t c = b + 1; c <= 5; ++c) {
                network_.set_offline({a, b, c});
                try {
                    decrypt_file_and_download(up.bundle_cid, WalletCredential(owner_), network_, store_);
                    ADD_FAILURE() << "decrypted with two nodes";
                } catch (const Error& e) {
                    EXPECT_EQ(e.code(), ErrorCode::AccessDenied);
                    EXPECT_NE(std::string(e.what()).find("unavailable"), std::string::npos);
                }
            }
        }
}

TEST_F(ClientTest, UploadNeedsEveryNode) {
    network_.set_offline({4});
    EXPECT_EQ(code_of([&] {
                  encrypt_file_and_upload({"f", to_bytes("x")}, is_owner(group_), WalletCredential(owner_), network_,
                                          store_, platform_);
              }),
              ErrorCode::NodeUnavailable);
    EXPECT_EQ(store_.usage().pinned_files, 0u);
    network_.set_offline({});
    for (std::uint32_t i = 1; i <= 5; ++i) {
        for (const auto& e : network_.node(i).audit_log()) EXPECT_FALSE(network_.node(i).holds(e.key_id));
    }
}

TEST_F(ClientTest, RejectsBadAccAndTamperedBundles) {
    EXPECT_EQ(code_of([&] {
                  encrypt_file_and_upload({"f", {}}, group_member(ContractId(outsider_.address)),
                                          WalletCredential(owner_), network_, store_, platform_);
              }),
              ErrorCode::UnknownGroup);
    EXPECT_EQ(code_of([&] {
                  decrypt_file_and_download(store::Cid::of(to_bytes("none")), WalletCredential(owner_), network_,
                                            store_);
              }),
              ErrorCode::NotFound);

    auto up = encrypt_file_and_upload({"f", to_bytes("payload")}, is_owner(group_), WalletCredential(owner_), network_,
                                      store_, platform_);
    EncryptedBundle b = EncryptedBundle::from_zip(store_.get(up.bundle_cid));
    b.sealed[0] ^= 1;
    store::Cid forged = store_.put(b.to_zip());
    EXPECT_EQ(code_of([&] { decrypt_file_and_download(forged, WalletCredential(owner_), network_, store_); }),
              ErrorCode::IntegrityFailure);
}

}  // namespace
}  // namespace dvre::keynet
