#include "dvre/keynet/shamir.hpp"

#include <algorithm>
#include <map>

#include "dvre/common/error.hpp"
#include "dvre/keynet/field.hpp"

namespace dvre::keynet {

Key256 generate_dek() { return FieldElement::random().to_bytes(); }

namespace {

void check_threshold(unsigned n, unsigned t) {
    if (t < 1 || t > n || n > 255) {
        throw Error(ErrorCode::BadThreshold,
                    "need 1 <= t <= n <= 255, got t=" + std::to_string(t) + " n=" + std::to_string(n));
    }
}

std::vector<KeyShare> evaluate(std::vector<FieldElement>& coeffs, unsigned n, const KeyId& key_id) {
    const auto t = static_cast<std::uint32_t>(coeffs.size());
    std::vector<KeyShare> shares;
    shares.reserve(n);
    for (unsigned x = 1; x <= n; ++x) {
        FieldElement px(x), acc;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * px + *it;
        shares.push_back(KeyShare{key_id, x, t, acc.to_bytes()});
    }
    for (auto& c : coeffs) c = FieldElement{};
    return shares;
}

}  // namespace

std::vector<KeyShare> split_key(const Key256& dek, unsigned n, unsigned t, const KeyId& key_id) {
    check_threshold(n, t);
    std::vector<FieldElement> coeffs{FieldElement::from_bytes(dek)};
    for (unsigned i = 1; i < t; ++i) coeffs.push_back(FieldElement::random());
    return evaluate(coeffs, n, key_id);
}

std::vector<KeyShare> split_key_with_coefficients(const Key256& dek, std::span<const Hash32> coefficients, unsigned n,
                                                  const KeyId& key_id) {
    check_threshold(n, static_cast<unsigned>(coefficients.size() + 1));
    std::vector<FieldElement> coeffs{FieldElement::from_bytes(dek)};
    for (const auto& c : coefficients) coeffs.push_back(FieldElement::from_bytes(c));
    return evaluate(coeffs, n, key_id);
}

Key256 combine_shares(std::span<const KeyShare> shares) {
    if (shares.empty()) throw Error(ErrorCode::InsufficientShares, "no shares");
    const KeyId& id = shares.front().key_id;
    const std::uint32_t t = shares.front().threshold;
    std::map<std::uint32_t, const KeyShare*> distinct;
    for (const auto& s : shares) {
        if (s.key_id != id) throw Error(ErrorCode::MixedKeyIds, "shares belong to different keys");
        if (s.threshold != t) throw Error(ErrorCode::MixedKeyIds, "shares disagree on the threshold");
        if (s.node_index == 0) throw Error(ErrorCode::InvalidArgument, "share index 0");
        auto [it, fresh] = distinct.emplace(s.node_index, &s);
        if (!fresh && it->second->share_value != s.share_value) {
            throw Error(ErrorCode::InvalidArgument, "conflicting shares for index " + std::to_string(s.node_index));
        }
    }
    if (t == 0 || distinct.size() < t) {
        throw Error(ErrorCode::InsufficientShares,
                    "have " + std::to_string(distinct.size()) + " distinct shares, need " + std::to_string(t));
    }

    std::vector<std::pair<FieldElement, FieldElement>> pts;
    for (const auto& [x, s] : distinct) {
        if (pts.size() == t) break;
        pts.emplace_back(FieldElement(x), FieldElement::from_bytes(s->share_value));
    }
    FieldElement secret;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        FieldElement num(1), den(1);
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (j == i) continue;
            num = num * pts[j].first;
            den = den * (pts[j].first - pts[i].first);
        }
        secret = secret + pts[i].second * num * den.inverse();
    }
    return secret.to_bytes();
}

}  // namespace dvre::keynet
