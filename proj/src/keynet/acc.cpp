#include "dvre/keynet/acc.hpp"

#include <set>

#include <json.hpp>

#include "dvre/common/encoding.hpp"
#include "dvre/common/error.hpp"
#include "dvre/contracts/dates.hpp"
#include "dvre/crypto/keccak.hpp"

namespace dvre::keynet {

namespace {

enum Tag : std::uint8_t { kGroupMember = 1, kIsOwner = 2, kTimeWindow = 3, kAllOf = 4, kAnyOf = 5 };
constexpr int kMaxDepth = 32;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};

void encode_node(Encoder& enc, const Acc& acc) {
    std::visit(Overloaded{
                   [&](const GroupMember& g) {
                       enc.u8(kGroupMember);
                       ledger::encode_contract_id(enc, g.group);
                   },
                   [&](const IsOwner& g) {
                       enc.u8(kIsOwner);
                       ledger::encode_contract_id(enc, g.group);
                   },
                   [&](const TimeWindow& w) { enc.u8(kTimeWindow).i64(w.from).i64(w.to); },
                   [&](const AllOf& a) {
                       enc.u8(kAllOf).u32(static_cast<std::uint32_t>(a.terms.size()));
                       for (const auto& t : a.terms) encode_node(enc, t);
                   },
                   [&](const AnyOf& a) {
                       enc.u8(kAnyOf).u32(static_cast<std::uint32_t>(a.terms.size()));
                       for (const auto& t : a.terms) encode_node(enc, t);
                   },
               },
               acc.node);
}

Acc decode_node(Decoder& dec, int depth) {
    if (depth > kMaxDepth) throw Error(ErrorCode::InvalidArgument, "access condition nested too deeply");
    auto terms = [&] {
        std::uint32_t n = dec.u32();
        std::vector<Acc> out;
        for (std::uint32_t i = 0; i < n; ++i) out.push_back(decode_node(dec, depth + 1));
        return out;
    };
    switch (dec.u8()) {
        case kGroupMember: return group_member(ledger::decode_contract_id(dec));
        case kIsOwner: return is_owner(ledger::decode_contract_id(dec));
        case kTimeWindow: {
            Timestamp from = dec.i64();
            return time_window(from, dec.i64());
        }
        case kAllOf: return all_of(terms());
        case kAnyOf: return any_of(terms());
        default: throw Error(ErrorCode::InvalidArgument, "unknown access condition tag");
    }
}

void check_shape(const Acc& acc, int depth) {
    if (depth > kMaxDepth) throw Error(ErrorCode::InvalidArgument, "access condition nested too deeply");
    std::visit(Overloaded{
                   [](const GroupMember&) {},
                   [](const IsOwner&) {},
                   [](const TimeWindow& w) {
                       if (w.from > w.to) throw Error(ErrorCode::InvalidArgument, "time window ends before it starts");
                   },
                   [&](const auto& composite) {
                       if (composite.terms.empty()) {
                           throw Error(ErrorCode::InvalidArgument, "empty all_of/any_of");
                       }
                       for (const auto& t : composite.terms) check_shape(t, depth + 1);
                   },
               },
               acc.node);
}

void collect_groups(const Acc& acc, std::set<ContractId>& out) {
    std::visit(Overloaded{
                   [&](const GroupMember& g) { out.insert(g.group); },
                   [&](const IsOwner& g) { out.insert(g.group); },
                   [](const TimeWindow&) {},
                   [&](const auto& composite) {
                       for (const auto& t : composite.terms) collect_groups(t, out);
                   },
               },
               acc.node);
}

bool eval(const Acc& acc, const Address& subject, Timestamp at, const contracts::AccessView& view) {
    return std::visit(Overloaded{
                          [&](const GroupMember& g) { return view.check_access(g.group, subject, at); },
                          [&](const IsOwner& g) { return view.group_owner(g.group) == subject; },
                          [&](const TimeWindow& w) { return w.from <= at && at <= w.to; },
                          [&](const AllOf& a) {
                              for (const auto& t : a.terms)
                                  if (!eval(t, subject, at, view)) return false;
                              return true;
                          },
                          [&](const AnyOf& a) {
                              for (const auto& t : a.terms)
                                  if (eval(t, subject, at, view)) return true;
                              return false;
                          },
                      },
                      acc.node);
}

nlohmann::json to_json(const Acc& acc) {
    using nlohmann::json;
    return std::visit(Overloaded{
                          [](const GroupMember& g) { return json{{"type", "group_member"}, {"group", g.group.str()}}; },
                          [](const IsOwner& g) { return json{{"type", "is_owner"}, {"group", g.group.str()}}; },
                          [](const TimeWindow& w) {
                              return json{{"type", "time_window"},
                                          {"from", contracts::format_time(w.from)},
                                          {"to", contracts::format_time(w.to)}};
                          },
                          [](const AllOf& a) {
                              json terms = json::array();
                              for (const auto& t : a.terms) terms.push_back(to_json(t));
                              return json{{"type", "all_of"}, {"terms", terms}};
                          },
                          [](const AnyOf& a) {
                              json terms = json::array();
                              for (const auto& t : a.terms) terms.push_back(to_json(t));
                              return json{{"type", "any_of"}, {"terms", terms}};
                          },
                      },
                      acc.node);
}

Timestamp json_time(const nlohmann::json& j, contracts::DateBound bound) {
    if (j.is_number_integer()) return j.get<Timestamp>();
    if (j.is_string()) return contracts::parse_time(j.get<std::string>(), bound);
    throw Error(ErrorCode::InvalidArgument, "time must be a string or integer");
}

Acc from_json(const nlohmann::json& j, int depth) {
    if (depth > kMaxDepth) throw Error(ErrorCode::InvalidArgument, "access condition nested too deeply");
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
        throw Error(ErrorCode::InvalidArgument, "access condition needs a \"type\"");
    }
    const std::string type = j["type"].get<std::string>();
    auto group = [&] {
        if (!j.contains("group") || !j["group"].is_string()) {
            throw Error(ErrorCode::InvalidArgument, type + " needs a \"group\"");
        }
        return ContractId::parse(j["group"].get<std::string>());
    };
    auto terms = [&] {
        if (!j.contains("terms") || !j["terms"].is_array()) {
            throw Error(ErrorCode::InvalidArgument, type + " needs \"terms\"");
        }
        std::vector<Acc> out;
        for (const auto& t : j["terms"]) out.push_back(from_json(t, depth + 1));
        return out;
    };
    if (type == "group_member") return group_member(group());
    if (type == "is_owner") return is_owner(group());
    if (type == "time_window") {
        if (!j.contains("from") || !j.contains("to")) {
            throw Error(ErrorCode::InvalidArgument, "time_window needs \"from\" and \"to\"");
        }
        return time_window(json_time(j["from"], contracts::DateBound::Start),
                           json_time(j["to"], contracts::DateBound::End));
    }
    if (type == "all_of") return all_of(terms());
    if (type == "any_of") return any_of(terms());
    throw Error(ErrorCode::InvalidArgument, "unknown access condition type " + type);
}

}  // namespace

bool AllOf::operator==(const AllOf& o) const { return terms == o.terms; }
bool AnyOf::operator==(const AnyOf& o) const { return terms == o.terms; }

Bytes encode_acc(const Acc& acc) {
    Encoder enc;
    encode_node(enc, acc);
    return std::move(enc).take();
}

Acc decode_acc(ByteView data) {
    Decoder dec(data);
    Acc acc = decode_node(dec, 0);
    dec.expect_done();
    return acc;
}

Hash32 acc_digest(const Acc& acc) { return crypto::keccak256(encode_acc(acc)); }

void validate_acc(const Acc& acc) { check_shape(acc, 0); }

void validate_acc(const Acc& acc, const contracts::AccessView& view) {
    check_shape(acc, 0);
    std::set<ContractId> groups;
    collect_groups(acc, groups);
    for (const auto& g : groups) {
        if (!view.group_exists(g)) throw Error(ErrorCode::UnknownGroup, "unknown group " + g.str());
    }
}

bool evaluate_acc(const Acc& acc, const Address& subject, Timestamp at, const contracts::AccessView& view) {
    validate_acc(acc, view);
    return eval(acc, subject, at, view);
}

std::string acc_to_json(const Acc& acc) { return to_json(acc).dump(); }

Acc acc_from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("access condition is not JSON: ") + e.what());
    }
    Acc acc = from_json(j, 0);
    validate_acc(acc);
    return acc;
}

}  // namespace dvre::keynet
