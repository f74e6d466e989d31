#include "dvre/api/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dvre/common/error.hpp"

namespace dvre::api {

using nlohmann::json;

namespace {

template <class T>
void read_field(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw Error(ErrorCode::InvalidArgument, std::string("config: bad value for ") + key);
    }
}

std::optional<std::string> env(const char* name) {
    const char* v = std::getenv(name);
    if (v == nullptr || *v == '\0') return std::nullopt;
    return std::string(v);
}

std::int64_t env_int(const char* name, const std::string& text) {
    try {
        std::size_t used = 0;
        long long v = std::stoll(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidArgument, std::string(name) + " must be an integer");
    }
}

bool env_bool(const char* name, const std::string& text) {
    if (text == "1" || text == "true" || text == "yes") return true;
    if (text == "0" || text == "false" || text == "no") return false;
    throw Error(ErrorCode::InvalidArgument, std::string(name) + " must be true or false");
}

}  // namespace

NodeConfig NodeConfig::from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("config is not JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "config must be a JSON object");
    static const std::set<std::string> known = {
        "bind",      "port",        "store_root",  "quota",      "gas_preset",   "gas_config", "keynet",
        "upload_cap", "session_ttl", "demo_clock", "genesis_time", "ledger_log", "paper_faithful_add_files"};
    for (const auto& [key, _] : j.items()) {
        if (!known.contains(key)) throw Error(ErrorCode::InvalidArgument, "config: unknown key " + key);
    }

    NodeConfig c;
    read_field(j, "bind", c.bind);
    read_field(j, "port", c.port);
    std::string path;
    if (j.contains("store_root")) {
        read_field(j, "store_root", path);
        c.store_root = path;
    }
    if (j.contains("quota")) {
        read_field(j["quota"], "max_pinned_files", c.quota.max_pinned_files);
        read_field(j["quota"], "max_total_bytes", c.quota.max_total_bytes);
    }
    read_field(j, "gas_preset", c.gas_preset);
    if (j.contains("gas_config")) {
        read_field(j, "gas_config", path);
        c.gas_config = path;
    }
    if (j.contains("keynet")) {
        const json& k = j["keynet"];
        read_field(k, "n", c.keynet.n);
        read_field(k, "t", c.keynet.t);
        read_field(k, "chain", c.keynet.chain);
        read_field(k, "lit_network", c.keynet.lit_network);
    }
    read_field(j, "upload_cap", c.upload_cap);
    read_field(j, "session_ttl", c.session_ttl);
    read_field(j, "demo_clock", c.demo_clock);
    if (j.contains("genesis_time")) {
        std::int64_t t = 0;
        read_field(j, "genesis_time", t);
        c.genesis_time = t;
    }
    if (j.contains("ledger_log")) {
        read_field(j, "ledger_log", path);
        c.ledger_log = path;
    }
    read_field(j, "paper_faithful_add_files", c.paper_faithful_add_files);
    return c;
}

NodeConfig NodeConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot read config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

void NodeConfig::apply_env() {
    if (auto v = env("DVRE_BIND")) bind = *v;
    if (auto v = env("DVRE_PORT")) port = static_cast<int>(env_int("DVRE_PORT", *v));
    if (auto v = env("DVRE_STORE_ROOT")) store_root = *v;
    if (auto v = env("DVRE_QUOTA_FILES")) quota.max_pinned_files = static_cast<std::uint64_t>(env_int("DVRE_QUOTA_FILES", *v));
    if (auto v = env("DVRE_QUOTA_BYTES")) quota.max_total_bytes = static_cast<std::uint64_t>(env_int("DVRE_QUOTA_BYTES", *v));
    if (auto v = env("DVRE_GAS_PRESET")) gas_preset = *v;
    if (auto v = env("DVRE_GAS_CONFIG")) gas_config = *v;
    if (auto v = env("DVRE_KEYNET_N")) keynet.n = static_cast<unsigned>(env_int("DVRE_KEYNET_N", *v));
    if (auto v = env("DVRE_KEYNET_T")) keynet.t = static_cast<unsigned>(env_int("DVRE_KEYNET_T", *v));
    if (auto v = env("DVRE_UPLOAD_CAP")) upload_cap = static_cast<std::uint64_t>(env_int("DVRE_UPLOAD_CAP", *v));
    if (auto v = env("DVRE_SESSION_TTL")) session_ttl = env_int("DVRE_SESSION_TTL", *v);
    if (auto v = env("DVRE_DEMO_CLOCK")) demo_clock = env_bool("DVRE_DEMO_CLOCK", *v);
    if (auto v = env("DVRE_GENESIS_TIME")) genesis_time = env_int("DVRE_GENESIS_TIME", *v);
    if (auto v = env("DVRE_LEDGER_LOG")) ledger_log = *v;
}

ledger::GasSchedule NodeConfig::gas_schedule() const {
    if (gas_config) {
        std::ifstream in(*gas_config);
        if (!in) throw Error(ErrorCode::IoError, "cannot read gas config " + gas_config->string());
        std::stringstream ss;
        ss << in.rdbuf();
        return ledger::GasSchedule::parse_config(ss.str());
    }
    return ledger::GasSchedule::preset(gas_preset);
}

}  // namespace dvre::api
