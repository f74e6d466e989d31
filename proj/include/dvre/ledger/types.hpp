#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dvre/common/bytes.hpp"
#include "dvre/common/encoding.hpp"
#include "dvre/wallet/address.hpp"

namespace dvre::ledger {

using Gas = std::uint64_t;
/// Whole seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

/// Address of a contract instance on the ledger.
class ContractId {
public:
    ContractId() = default;
    explicit ContractId(const Address& a) : address_(a) {}

    static ContractId parse(std::string_view text) { return ContractId(Address::parse(text)); }
    std::string str() const { return address_.to_checksum_hex(); }
    const Address& address() const { return address_; }

    auto operator<=>(const ContractId&) const = default;

private:
    Address address_;
};

enum class TxKind : std::uint8_t { DeployContract = 0, CallFunction = 1 };

/// For DeployContract, function_name carries the contract kind and payload
/// the constructor arguments.
struct Transaction {
    Address sender;
    TxKind kind = TxKind::CallFunction;
    std::optional<ContractId> target;
    std::string function_name;
    Bytes payload;
    std::uint64_t nonce = 0;

    Bytes encode() const;
    static Transaction decode(ByteView data);
    Hash32 hash() const;

    bool operator==(const Transaction&) const = default;
};

struct Event {
    ContractId contract;
    std::string name;
    std::string message;

    bool operator==(const Event&) const = default;
};

enum class TxStatus : std::uint8_t { Success = 0, Reverted = 1 };

struct Receipt {
    Hash32 tx_hash{};
    TxStatus status = TxStatus::Success;
    Gas gas_used = 0;
    std::vector<Event> events;
    std::uint64_t block_height = 0;
    Timestamp block_time = 0;
    /// Set for reverted receipts.
    ErrorCode revert_code = ErrorCode::Reverted;
    std::string revert_reason;
    /// Contract created by a deployment or a factory call, if any.
    std::optional<ContractId> created;
    Bytes output;

    bool ok() const { return status == TxStatus::Success; }
    Bytes encode() const;
    Hash32 digest() const;

    bool operator==(const Receipt&) const = default;
};

/// One committed transaction as persisted in the ledger log.
struct LogEntry {
    Transaction tx;
    Timestamp block_time = 0;
    Hash32 receipt_digest{};

    bool operator==(const LogEntry&) const = default;
};

/// "<tx hex>\t<block_time>\t<receipt digest hex>"
std::string format_log_line(const LogEntry& entry);
/// Throws Error(CorruptLog) on a malformed line.
LogEntry parse_log_line(std::string_view line);

void encode_address(Encoder& enc, const Address& a);
Address decode_address(Decoder& dec);
void encode_contract_id(Encoder& enc, const ContractId& id);
ContractId decode_contract_id(Decoder& dec);

}  // namespace dvre::ledger

template <>
struct std::hash<dvre::ledger::ContractId> {
    std::size_t operator()(const dvre::ledger::ContractId& id) const noexcept {
        return std::hash<dvre::Address>{}(id.address());
    }
};
