#include "dvre/api/json_codec.hpp"

#include "dvre/common/error.hpp"
#include "dvre/contracts/dates.hpp"

namespace dvre::api {

namespace {

const json& field(const json& j, const char* name) {
    if (!j.is_object() || !j.contains(name)) {
        throw Error(ErrorCode::InvalidArgument, std::string("missing field \"") + name + "\"");
    }
    return j.at(name);
}

std::string string_field(const json& j, const char* name) {
    const json& v = field(j, name);
    if (!v.is_string()) throw Error(ErrorCode::InvalidArgument, std::string("\"") + name + "\" must be a string");
    return v.get<std::string>();
}

std::vector<std::string> string_list(const json& j, const char* name) {
    if (!j.contains(name)) return {};
    const json& v = j.at(name);
    if (v.is_string()) {
        // "UvA,UiS,UPV"
        std::vector<std::string> out;
        std::string s = v.get<std::string>();
        std::size_t start = 0;
        while (start <= s.size()) {
            std::size_t comma = s.find(',', start);
            if (comma == std::string::npos) comma = s.size();
            std::string item = s.substr(start, comma - start);
            while (!item.empty() && item.front() == ' ') item.erase(item.begin());
            while (!item.empty() && item.back() == ' ') item.pop_back();
            if (!item.empty()) out.push_back(item);
            start = comma + 1;
        }
        return out;
    }
    if (!v.is_array()) throw Error(ErrorCode::InvalidArgument, std::string("\"") + name + "\" must be a list");
    std::vector<std::string> out;
    for (const auto& item : v) {
        if (!item.is_string()) throw Error(ErrorCode::InvalidArgument, std::string("\"") + name + "\" must hold strings");
        out.push_back(item.get<std::string>());
    }
    return out;
}

ledger::Timestamp time_field(const json& j, const char* name, contracts::DateBound bound) {
    const json& v = field(j, name);
    if (v.is_number_integer()) return v.get<ledger::Timestamp>();
    if (v.is_string()) return contracts::parse_time(v.get<std::string>(), bound);
    throw Error(ErrorCode::InvalidArgument, std::string("\"") + name + "\" must be a time");
}

Address address_field(const json& j, const char* name) { return Address::parse(string_field(j, name)); }

}  // namespace

json to_json(const ledger::Receipt& r) {
    json events = json::array();
    for (const auto& e : r.events) {
        events.push_back({{"contract", e.contract.str()}, {"name", e.name}, {"message", e.message}});
    }
    json j = {
        {"tx_hash", "0x" + to_hex(r.tx_hash)},
        {"status", r.ok() ? "success" : "reverted"},
        {"gas_used", r.gas_used},
        {"events", events},
        {"block_height", r.block_height},
        {"block_time", r.block_time},
    };
    if (!r.ok()) {
        j["revert_code"] = std::string(to_string(r.revert_code));
        j["revert_reason"] = r.revert_reason;
    }
    if (r.created) j["created"] = r.created->str();
    return j;
}

json to_json(const contracts::UserProfile& p) {
    return {{"public_address", p.public_address.to_checksum_hex()},
            {"username", p.username},
            {"organization", p.organization},
            {"country", p.country}};
}

json to_json(const contracts::ContractDetails& d) {
    return {{"group_name", d.group_name},
            {"group_owner_address", d.group_owner_address.to_checksum_hex()},
            {"permissions", d.permissions},
            {"organizations", d.organizations},
            {"countries", d.countries}};
}

json to_json(const contracts::FileDetails& f) {
    return {{"ipfs_hash", f.ipfs_hash},
            {"file_name", f.file_name},
            {"added_by", f.added_by.to_checksum_hex()},
            {"added_at", f.added_at}};
}

json to_json(const contracts::UserAccess& a) {
    return {{"eoa_address", a.eoa_address.to_checksum_hex()},
            {"access_from", a.access_from},
            {"access_to", a.access_to}};
}

json to_json(const wallet::AuthSig& sig) {
    return {{"signed_message", to_string(sig.signed_message)},
            {"signature", "0x" + to_hex(sig.signature)},
            {"address", sig.address.to_checksum_hex()}};
}

json to_json(const contracts::GasStudy& s) {
    json deployments = json::object();
    for (const auto& d : s.deployments) deployments[d.contract] = d.gas;
    json functions = json::object();
    for (const auto& f : s.functions) functions[f.function] = f.gas;
    return {
        {"preset", s.preset},
        {"mode", s.mode == ledger::GasMode::Calibrated ? "calibrated" : "formula"},
        {"deployments", deployments},
        {"functions", functions},
        {"deployment_ordering", s.deployment_ordering},
        {"parents_exceed_children", s.parents_exceed_children},
        {"policy_manager_minus_factory", s.policy_manager_minus_factory},
        {"group_minus_user_metadata", s.group_minus_user_metadata},
        {"median_other_functions", s.median_other_functions},
        {"create_group_ratio", s.create_group_ratio},
        {"create_user_ratio", s.create_user_ratio},
        {"ratio_threshold", s.ratio_threshold},
        {"create_functions_dominate", s.create_functions_dominate},
    };
}

contracts::UserAccess user_access_from_json(const json& j) {
    contracts::UserAccess a;
    a.eoa_address = address_field(j, "eoa_address");
    a.access_from = j.contains("access_from") ? time_field(j, "access_from", contracts::DateBound::Start) : 0;
    a.access_to = j.contains("access_to") ? time_field(j, "access_to", contracts::DateBound::End) : contracts::kUnlimited;
    return a;
}

contracts::ContractDetails contract_details_from_json(const json& j, const Address& default_owner) {
    contracts::ContractDetails d;
    d.group_name = string_field(j, "group_name");
    d.group_owner_address = j.contains("group_owner_address") ? address_field(j, "group_owner_address") : default_owner;
    d.permissions = j.contains("permissions") ? string_field(j, "permissions") : std::string();
    d.organizations = string_list(j, "organizations");
    d.countries = string_list(j, "countries");
    return d;
}

contracts::FileInput file_input_from_json(const json& j) {
    return contracts::FileInput{string_field(j, "ipfs_hash"), string_field(j, "file_name")};
}

wallet::AuthSig auth_sig_from_json(const json& j) {
    wallet::AuthSig sig;
    sig.signed_message = to_bytes(string_field(j, "signed_message"));
    sig.signature = fixed_from_hex<65>(string_field(j, "signature"));
    sig.address = address_field(j, "address");
    return sig;
}

json parse_body(std::string_view body) {
    try {
        json j = json::parse(body.empty() ? std::string_view("{}") : body);
        if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "request body must be a JSON object");
        return j;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("request body is not JSON: ") + e.what());
    }
}

}  // namespace dvre::api
