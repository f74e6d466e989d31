#include "dvre/keynet/field.hpp"

#include "dvre/common/error.hpp"
#include "dvre/crypto/random.hpp"

namespace dvre::keynet {

using boost::multiprecision::uint512_t;

namespace {

uint256_t load(const Hash32& bytes) {
    uint256_t v = 0;
    for (std::uint8_t b : bytes) v = (v << 8) | b;
    return v;
}

}  // namespace

const uint256_t& FieldElement::modulus() {
    static const uint256_t p = (~uint256_t{0}) - 188;
    return p;
}

bool FieldElement::in_range(const Hash32& bytes) { return load(bytes) < modulus(); }

FieldElement FieldElement::from_bytes(const Hash32& bytes) {
    uint256_t v = load(bytes);
    if (v >= modulus()) throw Error(ErrorCode::InvalidArgument, "value is not a field element");
    return FieldElement(std::move(v));
}

FieldElement FieldElement::random() {
    for (;;) {
        Hash32 bytes = crypto::random_array<32>();
        uint256_t v = load(bytes);
        secure_wipe(bytes);
        if (v < modulus()) return FieldElement(std::move(v));
    }
}

Hash32 FieldElement::to_bytes() const {
    Hash32 out{};
    uint256_t v = value_;
    for (int i = 31; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v & 0xff);
        v >>= 8;
    }
    return out;
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
    uint512_t s = uint512_t(value_) + o.value_;
    if (s >= modulus()) s -= modulus();
    return FieldElement(static_cast<uint256_t>(s));
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
    if (value_ >= o.value_) return FieldElement(uint256_t(value_ - o.value_));
    return FieldElement(uint256_t(modulus() - (o.value_ - value_)));
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
    uint512_t prod = uint512_t(value_) * o.value_;
    return FieldElement(static_cast<uint256_t>(prod % modulus()));
}

FieldElement FieldElement::inverse() const {
    if (value_ == 0) throw Error(ErrorCode::InvalidArgument, "zero has no inverse");
    // Fermat: a^(p-2).
    uint512_t r = boost::multiprecision::powm(uint512_t(value_), uint512_t(modulus() - 2), uint512_t(modulus()));
    return FieldElement(static_cast<uint256_t>(r));
}

}  // namespace dvre::keynet
