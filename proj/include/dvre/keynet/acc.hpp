#pragma once

#include <string>
#include <variant>
#include <vector>

#include "dvre/common/bytes.hpp"
#include "dvre/contracts/platform.hpp"

namespace dvre::keynet {

using contracts::ContractId;
using contracts::Timestamp;

struct Acc;

struct GroupMember {
    ContractId group;
    bool operator==(const GroupMember&) const = default;
};
struct IsOwner {
    ContractId group;
    bool operator==(const IsOwner&) const = default;
};
/// Inclusive on both ends.
struct TimeWindow {
    Timestamp from = 0;
    Timestamp to = 0;
    bool operator==(const TimeWindow&) const = default;
};
struct AllOf {
    std::vector<Acc> terms;
    bool operator==(const AllOf&) const;
};
struct AnyOf {
    std::vector<Acc> terms;
    bool operator==(const AnyOf&) const;
};

/// Access control condition: an AND/OR tree over membership, ownership and
/// time-window predicates.
struct Acc {
    std::variant<GroupMember, IsOwner, TimeWindow, AllOf, AnyOf> node;

    bool operator==(const Acc&) const = default;
};

inline Acc group_member(ContractId g) { return Acc{GroupMember{g}}; }
inline Acc is_owner(ContractId g) { return Acc{IsOwner{g}}; }
inline Acc time_window(Timestamp from, Timestamp to) { return Acc{TimeWindow{from, to}}; }
inline Acc all_of(std::vector<Acc> terms) { return Acc{AllOf{std::move(terms)}}; }
inline Acc any_of(std::vector<Acc> terms) { return Acc{AnyOf{std::move(terms)}}; }

/// Depth-first: one tag byte per node, then its fields in name order;
/// composite nodes carry a term count.
Bytes encode_acc(const Acc& acc);
/// Throws Error(InvalidArgument) on malformed input.
Acc decode_acc(ByteView data);
Hash32 acc_digest(const Acc& acc);

/// Throws InvalidArgument for an empty AND/OR or a window with from > to.
void validate_acc(const Acc& acc);
/// validate_acc plus existence of every referenced group (UnknownGroup).
void validate_acc(const Acc& acc, const contracts::AccessView& view);

/// GroupMember -> view.check_access(group, subject, at); IsOwner -> subject is
/// the group owner; TimeWindow -> from <= at <= to. Referenced groups are
/// checked up front, so the verdict never depends on evaluation order.
bool evaluate_acc(const Acc& acc, const Address& subject, Timestamp at, const contracts::AccessView& view);

/// {"type": "group_member"|"is_owner", "group": "0x.."},
/// {"type": "time_window", "from": <time>, "to": <time>},
/// {"type": "all_of"|"any_of", "terms": [...]}.
/// Times accept anything contracts::parse_time does; output uses RFC3339.
std::string acc_to_json(const Acc& acc);
/// Throws Error(InvalidArgument).
Acc acc_from_json(std::string_view text);

}  // namespace dvre::keynet
