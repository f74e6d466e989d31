#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "dvre/keynet/node.hpp"
#include "dvre/ledger/gas.hpp"
#include "dvre/store/store.hpp"

namespace dvre::api {

/// Settings of one primary node. Sources, later overriding earlier:
/// defaults, a JSON file, DVRE_* environment variables, command-line flags.
struct NodeConfig {
    std::string bind = "127.0.0.1";
    int port = 8645;
    std::filesystem::path store_root = "dvre-data/store";
    store::Quota quota;
    /// "calibrated" or "formula"; ignored when gas_config is set.
    std::string gas_preset = "calibrated";
    /// key = value schedule file (GasSchedule::parse_config).
    std::optional<std::filesystem::path> gas_config;
    keynet::NetworkParams keynet;
    std::uint64_t upload_cap = 8u << 20;
    std::int64_t session_ttl = 3600;
    /// Ledger time moves only through POST /ledger/time instead of following
    /// the wall clock.
    bool demo_clock = false;
    /// Ledger start time in demo mode; unset means the wall clock at startup.
    std::optional<std::int64_t> genesis_time;
    /// Append-only transaction log; replayed at startup when it exists.
    std::optional<std::filesystem::path> ledger_log;
    bool paper_faithful_add_files = false;

    /// Throws Error(InvalidArgument) for unknown keys or wrong types.
    static NodeConfig from_json(std::string_view text);
    static NodeConfig from_file(const std::filesystem::path& path);
    /// DVRE_BIND, DVRE_PORT, DVRE_STORE_ROOT, DVRE_QUOTA_FILES,
    /// DVRE_QUOTA_BYTES, DVRE_GAS_PRESET, DVRE_GAS_CONFIG, DVRE_KEYNET_N,
    /// DVRE_KEYNET_T, DVRE_UPLOAD_CAP, DVRE_SESSION_TTL, DVRE_DEMO_CLOCK,
    /// DVRE_GENESIS_TIME, DVRE_LEDGER_LOG.
    void apply_env();

    ledger::GasSchedule gas_schedule() const;
};

}  // namespace dvre::api
