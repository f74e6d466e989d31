#pragma once

#include <map>
#include <string>
#include <string_view>

#include "dvre/ledger/types.hpp"

namespace dvre::ledger {

enum class GasMode { Formula, Calibrated };

/// Storage and creation work performed while executing one transaction.
struct ExecutionTrace {
    std::uint64_t new_writes = 0;
    std::uint64_t update_writes = 0;
    std::uint64_t creations = 0;
    std::uint64_t code_deposit_bytes = 0;
};

struct GasSchedule {
    GasMode mode = GasMode::Calibrated;

    // Formula-mode terms.
    Gas tx_base = 21'000;
    Gas calldata_zero_byte = 4;
    Gas calldata_nonzero_byte = 16;
    Gas storage_write_new = 20'000;
    Gas storage_write_update = 5'000;
    Gas contract_create = 32'000;
    Gas code_deposit_per_byte = 200;
    /// Nominal bytecode size per contract kind. A factory's size includes the
    /// creation code of the child it deploys.
    std::map<std::string, std::uint64_t, std::less<>> code_bytes;

    // Calibrated-mode tables; entries are all-inclusive.
    std::map<std::string, Gas, std::less<>> deploy_table;
    /// Keyed "<ContractKind>.<function>".
    std::map<std::string, Gas, std::less<>> function_table;

    /// Deployment and function costs measured for the reference contracts;
    /// functions other than the two factory calls use a fixed 260,000.
    static GasSchedule calibrated();
    /// Public EVM-style unit costs.
    static GasSchedule formula();
    /// "calibrated" or "formula"; anything else throws Error(InvalidArgument).
    static GasSchedule preset(std::string_view name);

    /// Key/value text: one "key = value" per line, '#' comments. Keys are the
    /// field names above plus "deploy.<Kind>", "function.<Kind>.<fn>" and
    /// "code_bytes.<Kind>"; "mode" is "formula" or "calibrated".
    static GasSchedule parse_config(std::string_view text);
    std::string to_config() const;

    static std::string function_key(std::string_view kind, std::string_view function);
};

/// Gas charged for `tx` against a contract of kind `target_kind` (for
/// deployments, the kind being deployed). Calibrated mode is a table lookup;
/// formula mode sums the base fee, calldata bytes and the traced work.
/// Throws Error(UnknownFunction) when the schedule has no entry.
Gas gas_of(const Transaction& tx, std::string_view target_kind, const GasSchedule& schedule,
           const ExecutionTrace& trace = {});

}  // namespace dvre::ledger
