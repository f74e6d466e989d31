#include "dvre/common/encoding.hpp"

#include <limits>

namespace dvre {

Encoder& Encoder::u8(std::uint8_t v) {
    buf_.push_back(v);
    return *this;
}

Encoder& Encoder::u32(std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) buf_.push_back(static_cast<std::uint8_t>(v >> shift));
    return *this;
}

Encoder& Encoder::u64(std::uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8) buf_.push_back(static_cast<std::uint8_t>(v >> shift));
    return *this;
}

Encoder& Encoder::bytes(ByteView v) {
    if (v.size() > std::numeric_limits<std::uint32_t>::max()) {
        throw Error(ErrorCode::InvalidArgument, "field too large for canonical encoding");
    }
    u32(static_cast<std::uint32_t>(v.size()));
    return raw(v);
}

Encoder& Encoder::raw(ByteView v) {
    buf_.insert(buf_.end(), v.begin(), v.end());
    return *this;
}

void Decoder::need(std::size_t n) const {
    if (data_.size() - pos_ < n) throw Error(ErrorCode::InvalidArgument, "truncated canonical encoding");
}

std::uint8_t Decoder::u8() {
    need(1);
    return data_[pos_++];
}

std::uint32_t Decoder::u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | data_[pos_++];
    return v;
}

std::uint64_t Decoder::u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | data_[pos_++];
    return v;
}

bool Decoder::boolean() {
    auto v = u8();
    if (v > 1) throw Error(ErrorCode::InvalidArgument, "invalid boolean byte");
    return v == 1;
}

Bytes Decoder::bytes() {
    auto n = u32();
    return raw(n);
}

std::string Decoder::str() {
    auto b = bytes();
    return {b.begin(), b.end()};
}

Bytes Decoder::raw(std::size_t n) {
    need(n);
    Bytes out(data_.begin() + static_cast<std::ptrdiff_t>(pos_),
              data_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
    pos_ += n;
    return out;
}

void Decoder::expect_done() const {
    if (!done()) throw Error(ErrorCode::InvalidArgument, "trailing bytes after canonical encoding");
}

}  // namespace dvre
