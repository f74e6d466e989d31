#include "dvre/crypto/keccak.hpp"

#include <bit>
#include <cstring>

namespace dvre::crypto {
namespace {

constexpr std::array<std::uint64_t, 24> kRoundConstants = {
    0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL, 0x8000000080008000ULL,
    0x000000000000808bULL, 0x0000000080000001ULL, 0x8000000080008081ULL, 0x8000000000008009ULL,
    0x000000000000008aULL, 0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
    0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL, 0x8000000000008003ULL,
    0x8000000000008002ULL, 0x8000000000000080ULL, 0x000000000000800aULL, 0x800000008000000aULL,
    0x8000000080008081ULL, 0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL,
};

constexpr std::array<int, 24> kRotations = {1,  3,  6,  10, 15, 21, 28, 36, 45, 55, 2,  14,
                                            27, 41, 56, 8,  25, 43, 62, 18, 39, 61, 20, 44};

constexpr std::array<int, 24> kPi = {10, 7,  11, 17, 18, 3, 5,  16, 8,  21, 24, 4,
                                     15, 23, 19, 13, 12, 2, 20, 14, 22, 9,  6,  1};

void keccak_f1600(std::array<std::uint64_t, 25>& a) {
    for (auto rc : kRoundConstants) {
        std::uint64_t c[5];
        for (int x = 0; x < 5; ++x) c[x] = a[x] ^ a[x + 5] ^ a[x + 10] ^ a[x + 15] ^ a[x + 20];
        for (int x = 0; x < 5; ++x) {
            std::uint64_t d = c[(x + 4) % 5] ^ std::rotl(c[(x + 1) % 5], 1);
            for (int y = 0; y < 25; y += 5) a[y + x] ^= d;
        }
        // rho + pi
        std::uint64_t carry = a[1];
        for (int i = 0; i < 24; ++i) {
            int j = kPi[i];
            std::uint64_t tmp = a[j];
            a[j] = std::rotl(carry, kRotations[i]);
            carry = tmp;
        }
        // chi
        for (int y = 0; y < 25; y += 5) {
            std::uint64_t row[5];
            for (int x = 0; x < 5; ++x) row[x] = a[y + x];
            for (int x = 0; x < 5; ++x) a[y + x] = row[x] ^ (~row[(x + 1) % 5] & row[(x + 2) % 5]);
        }
        a[0] ^= rc;
    }
}

std::uint64_t load_le64(const std::uint8_t* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

}  // namespace

void Keccak256::absorb_block() {
    for (std::size_t i = 0; i < kRate / 8; ++i) state_[i] ^= load_le64(block_.data() + 8 * i);
    keccak_f1600(state_);
    fill_ = 0;
}

Keccak256& Keccak256::update(ByteView data) {
    for (auto b : data) {
        block_[fill_++] = b;
        if (fill_ == kRate) absorb_block();
    }
    return *this;
}

Hash32 Keccak256::finalize() {
    std::memset(block_.data() + fill_, 0, kRate - fill_);
    block_[fill_] ^= 0x01;
    block_[kRate - 1] ^= 0x80;
    absorb_block();
    Hash32 out{};
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<std::uint8_t>(state_[i / 8] >> (8 * (i % 8)));
    }
    state_ = {};
    return out;
}

Hash32 keccak256(ByteView data) {
    return Keccak256{}.update(data).finalize();
}

}  // namespace dvre::crypto
