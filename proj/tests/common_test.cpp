#include <random>

#include <gtest/gtest.h>

#include "dvre/common/base64.hpp"
#include "dvre/common/bytes.hpp"
#include "dvre/common/encoding.hpp"
#include "dvre/common/error.hpp"

namespace dvre {
namespace {

TEST(Hex, RoundTripsAndAcceptsPrefix) {
    Bytes b = {0x00, 0x01, 0xab, 0xff};
    EXPECT_EQ(to_hex(b), "0001abff");
    EXPECT_EQ(from_hex("0x0001ABff"), b);
    EXPECT_EQ(from_hex(""), Bytes{});
}

TEST(Hex, RejectsMalformed) {
    for (const char* bad : {"abc", "zz", "0x1", "12 3"}) {
        try {
            from_hex(bad);
            FAIL() << bad;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
        }
    }
    EXPECT_THROW(fixed_from_hex<4>("0011"), Error);
}

TEST(Encoding, IsBigEndianWithLengthPrefixes) {
    Encoder enc;
    enc.u32(0x01020304).u64(5).str("ab").boolean(true);
    EXPECT_EQ(to_hex(enc.data()), "01020304" "0000000000000005" "000000026162" "01");
    Decoder dec(enc.data());
    EXPECT_EQ(dec.u32(), 0x01020304u);
    EXPECT_EQ(dec.u64(), 5u);
    EXPECT_EQ(dec.str(), "ab");
    EXPECT_TRUE(dec.boolean());
    EXPECT_NO_THROW(dec.expect_done());
}

TEST(Encoding, OverrunThrows) {
    Bytes b = {0, 0, 0, 9, 'x'};
    Decoder dec(b);
    EXPECT_THROW(dec.bytes(), Error);
    Decoder dec2(b);
    dec2.u8();
    EXPECT_THROW(dec2.expect_done(), Error);
}

TEST(Encoding, SignedValuesRoundTrip) {
    for (std::int64_t v : {std::int64_t{0}, std::int64_t{-1}, INT64_MIN, INT64_MAX}) {
        Encoder enc;
        enc.i64(v);
        Decoder dec(enc.data());
        EXPECT_EQ(dec.i64(), v);
    }
}

TEST(Base64, MatchesStandardAlphabet) {
    Bytes ten;
    for (int i = 0; i < 10; ++i) ten.push_back(static_cast<std::uint8_t>(i));
    EXPECT_EQ(base64_encode(ten), "AAECAwQFBgcICQ==");
    EXPECT_EQ(base64_decode("AAECAwQFBgcICQ=="), ten);
    EXPECT_EQ(base64_decode(""), Bytes{});
    EXPECT_THROW(base64_decode("abc"), Error);
    EXPECT_THROW(base64_decode("a*c="), Error);
}

TEST(Base64, RoundTripsEveryLength) {
    std::mt19937 rng(7);
    for (std::size_t n = 0; n < 70; ++n) {
        Bytes b(n);
        for (auto& x : b) x = static_cast<std::uint8_t>(rng());
        EXPECT_EQ(base64_decode(base64_encode(b)), b) << n;
    }
}

TEST(Error, CodesHaveNames) {
    EXPECT_EQ(to_string(ErrorCode::QuotaExceededFiles), "QuotaExceededFiles");
    Error e(ErrorCode::NotFound, "gone");
    EXPECT_EQ(e.code(), ErrorCode::NotFound);
    EXPECT_STREQ(e.what(), "gone");
}

}  // namespace
}  // namespace dvre
