#include "dvre/store/cid.hpp"

#include "dvre/crypto/sha256.hpp"

namespace dvre::store {

Cid Cid::of(ByteView content) {
    return Cid(crypto::sha256(content));
}

Cid Cid::parse(std::string_view text) {
    if (!text.starts_with(kPrefix) || text.size() != kPrefix.size() + 64) {
        throw Error(ErrorCode::InvalidArgument, "not a content identifier: '" + std::string(text) + "'");
    }
    auto body = text.substr(kPrefix.size());
    if (body.find_first_not_of("0123456789abcdef") != std::string_view::npos) {
        throw Error(ErrorCode::InvalidArgument, "content identifier must be lowercase hex");
    }
    return Cid(fixed_from_hex<32>(body));
}

std::string Cid::str() const {
    return std::string(kPrefix) + to_hex(digest_);
}

}  // namespace dvre::store
