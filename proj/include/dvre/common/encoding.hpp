#pragma once

// Canonical argument/state encoding: fields are concatenated in declaration
// order, integers are big-endian fixed width, variable-length values carry a
// u32 length prefix, and lists carry a u32 element count.

#include <cstdint>
#include <string>
#include <string_view>

#include "dvre/common/bytes.hpp"

namespace dvre {

class Encoder {
public:
    Encoder& u8(std::uint8_t v);
    Encoder& u32(std::uint32_t v);
    Encoder& u64(std::uint64_t v);
    Encoder& i64(std::int64_t v) { return u64(static_cast<std::uint64_t>(v)); }
    Encoder& boolean(bool v) { return u8(v ? 1 : 0); }
    Encoder& bytes(ByteView v);
    Encoder& str(std::string_view v) { return bytes(as_bytes(v)); }
    /// Appends without a length prefix; for fixed-size values.
    Encoder& raw(ByteView v);

    const Bytes& data() const& { return buf_; }
    Bytes take() && { return std::move(buf_); }

private:
    Bytes buf_;
};

/// Reads what Encoder wrote. Any overrun throws Error(InvalidArgument).
class Decoder {
public:
    explicit Decoder(ByteView data) : data_(data) {}

    std::uint8_t u8();
    std::uint32_t u32();
    std::uint64_t u64();
    std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
    bool boolean();
    Bytes bytes();
    std::string str();
    Bytes raw(std::size_t n);

    template <std::size_t N>
    std::array<std::uint8_t, N> fixed() {
        std::array<std::uint8_t, N> out{};
        auto r = raw(N);
        std::copy(r.begin(), r.end(), out.begin());
        return out;
    }

    bool done() const { return pos_ == data_.size(); }
    /// Throws unless every byte has been consumed.
    void expect_done() const;

private:
    void need(std::size_t n) const;

    ByteView data_;
    std::size_t pos_ = 0;
};

}  // namespace dvre
