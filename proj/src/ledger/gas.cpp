#include "dvre/ledger/gas.hpp"

#include <charconv>
#include <sstream>

namespace dvre::ledger {
namespace {

constexpr Gas kDefaultFunctionGas = 260'000;

void add_code_sizes(GasSchedule& s) {
    // Nominal bytecode sizes. Each factory embeds its child's creation code.
    constexpr std::uint64_t user_metadata = 7'400;
    constexpr std::uint64_t group_contract = 8'600;
    s.code_bytes["UserMetadata"] = user_metadata;
    s.code_bytes["GroupContract"] = group_contract;
    s.code_bytes["UserMetadataFactory"] = user_metadata + 3'300;
    s.code_bytes["PolicyManager"] = group_contract + 4'600;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::uint64_t parse_u64(std::string_view key, std::string_view v) {
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        throw Error(ErrorCode::InvalidArgument, "gas config: '" + std::string(key) + "' needs a non-negative integer");
    }
    return out;
}

}  // namespace

std::string GasSchedule::function_key(std::string_view kind, std::string_view function) {
    return std::string(kind) + "." + std::string(function);
}

GasSchedule GasSchedule::calibrated() {
    GasSchedule s;
    s.mode = GasMode::Calibrated;
    add_code_sizes(s);
    s.deploy_table = {
        {"PolicyManager", 2'738'927},
        {"UserMetadataFactory", 2'249'679},
        {"GroupContract", 1'917'322},
        {"UserMetadata", 1'602'341},
    };
    s.function_table = {
        {function_key("PolicyManager", "createGroupContract"), 1'832'050},
        {function_key("UserMetadataFactory", "createUserContract"), 1'535'460},
        {function_key("GroupContract", "associateUsersToGroup"), kDefaultFunctionGas},
        {function_key("GroupContract", "addFilesToGroup"), kDefaultFunctionGas},
        {function_key("GroupContract", "setUserAccess"), kDefaultFunctionGas},
    };
    return s;
}

GasSchedule GasSchedule::formula() {
    GasSchedule s;
    s.mode = GasMode::Formula;
    add_code_sizes(s);
    return s;
}

GasSchedule GasSchedule::preset(std::string_view name) {
    if (name == "calibrated") return calibrated();
    if (name == "formula") return formula();
    throw Error(ErrorCode::InvalidArgument, "unknown gas preset '" + std::string(name) + "'");
}

GasSchedule GasSchedule::parse_config(std::string_view text) {
    GasSchedule s;
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorCode::InvalidArgument, "gas config line " + std::to_string(lineno) + ": expected key = value");
        }
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        if (key == "mode") {
            if (value == "formula") s.mode = GasMode::Formula;
            else if (value == "calibrated") s.mode = GasMode::Calibrated;
            else throw Error(ErrorCode::InvalidArgument, "gas config: mode must be formula or calibrated");
        } else if (key == "tx_base") s.tx_base = parse_u64(key, value);
        else if (key == "calldata_zero_byte") s.calldata_zero_byte = parse_u64(key, value);
        else if (key == "calldata_nonzero_byte") s.calldata_nonzero_byte = parse_u64(key, value);
        else if (key == "storage_write_new") s.storage_write_new = parse_u64(key, value);
        else if (key == "storage_write_update") s.storage_write_update = parse_u64(key, value);
        else if (key == "contract_create") s.contract_create = parse_u64(key, value);
        else if (key == "code_deposit_per_byte") s.code_deposit_per_byte = parse_u64(key, value);
        else if (key.starts_with("deploy.")) s.deploy_table[std::string(key.substr(7))] = parse_u64(key, value);
        else if (key.starts_with("function.")) s.function_table[std::string(key.substr(9))] = parse_u64(key, value);
        else if (key.starts_with("code_bytes.")) s.code_bytes[std::string(key.substr(11))] = parse_u64(key, value);
        else throw Error(ErrorCode::InvalidArgument, "gas config: unknown key '" + std::string(key) + "'");
    }
    if (s.mode == GasMode::Calibrated && (s.deploy_table.empty() || s.function_table.empty())) {
        throw Error(ErrorCode::InvalidArgument, "gas config: calibrated mode needs deploy.* and function.* tables");
    }
    return s;
}

std::string GasSchedule::to_config() const {
    std::ostringstream out;
    out << "mode = " << (mode == GasMode::Formula ? "formula" : "calibrated") << '\n'
        << "tx_base = " << tx_base << '\n'
        << "calldata_zero_byte = " << calldata_zero_byte << '\n'
        << "calldata_nonzero_byte = " << calldata_nonzero_byte << '\n'
        << "storage_write_new = " << storage_write_new << '\n'
        << "storage_write_update = " << storage_write_update << '\n'
        << "contract_create = " << contract_create << '\n'
        << "code_deposit_per_byte = " << code_deposit_per_byte << '\n';
    for (const auto& [k, v] : code_bytes) out << "code_bytes." << k << " = " << v << '\n';
    for (const auto& [k, v] : deploy_table) out << "deploy." << k << " = " << v << '\n';
    for (const auto& [k, v] : function_table) out << "function." << k << " = " << v << '\n';
    return out.str();
}

Gas gas_of(const Transaction& tx, std::string_view target_kind, const GasSchedule& schedule,
           const ExecutionTrace& trace) {
    if (schedule.mode == GasMode::Calibrated) {
        if (tx.kind == TxKind::DeployContract) {
            auto it = schedule.deploy_table.find(target_kind);
            if (it == schedule.deploy_table.end()) {
                throw Error(ErrorCode::UnknownFunction, "no calibrated deployment cost for " + std::string(target_kind));
            }
            return it->second;
        }
        auto it = schedule.function_table.find(GasSchedule::function_key(target_kind, tx.function_name));
        if (it == schedule.function_table.end()) {
            throw Error(ErrorCode::UnknownFunction,
                        "no calibrated cost for " + GasSchedule::function_key(target_kind, tx.function_name));
        }
        return it->second;
    }

    Gas gas = schedule.tx_base;
    for (auto b : tx.payload) gas += b == 0 ? schedule.calldata_zero_byte : schedule.calldata_nonzero_byte;
    gas += trace.new_writes * schedule.storage_write_new;
    gas += trace.update_writes * schedule.storage_write_update;
    gas += trace.creations * schedule.contract_create;
    gas += trace.code_deposit_bytes * schedule.code_deposit_per_byte;
    return gas;
}

}  // namespace dvre::ledger
