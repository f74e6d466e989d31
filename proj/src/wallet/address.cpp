#include "dvre/wallet/address.hpp"

#include <algorithm>
#include <cctype>

#include "dvre/crypto/keccak.hpp"

namespace dvre {

Address Address::from_public_key(const crypto::secp256k1::PublicKey& key) {
    Hash32 h = crypto::keccak256(ByteView(key));
    Raw raw{};
    std::copy(h.begin() + 12, h.end(), raw.begin());
    return Address(raw);
}

std::string Address::to_lower_hex() const {
    return "0x" + dvre::to_hex(raw_);
}

std::string Address::to_checksum_hex() const {
    std::string lower = dvre::to_hex(raw_);
    Hash32 h = crypto::keccak256(std::string_view(lower));
    std::string out = "0x";
    for (std::size_t i = 0; i < lower.size(); ++i) {
        char c = lower[i];
        int nib = (i % 2 == 0) ? (h[i / 2] >> 4) : (h[i / 2] & 0x0f);
        if (std::isalpha(static_cast<unsigned char>(c)) && nib >= 8) c = static_cast<char>(std::toupper(c));
        out.push_back(c);
    }
    return out;
}

Address Address::parse(std::string_view text) {
    std::string_view body = text;
    if (body.starts_with("0x") || body.starts_with("0X")) body.remove_prefix(2);
    if (body.size() != 2 * kSize) throw Error(ErrorCode::InvalidArgument, "address must be 40 hex characters");
    Address a(fixed_from_hex<kSize>(body));
    bool has_lower = std::any_of(body.begin(), body.end(), [](char c) { return c >= 'a' && c <= 'f'; });
    bool has_upper = std::any_of(body.begin(), body.end(), [](char c) { return c >= 'A' && c <= 'F'; });
    if (has_lower && has_upper && a.to_checksum_hex().substr(2) != body) {
        throw Error(ErrorCode::InvalidArgument, "address checksum mismatch");
    }
    return a;
}

bool Address::is_zero() const {
    return std::all_of(raw_.begin(), raw_.end(), [](std::uint8_t b) { return b == 0; });
}

}  // namespace dvre
