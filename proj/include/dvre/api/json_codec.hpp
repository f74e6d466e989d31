#pragma once

// JSON forms of the domain types. Field names match the struct members;
// times are seconds since the epoch on output and accept the
// contracts::parse_time forms on input.

#include <json.hpp>

#include "dvre/contracts/gas_study.hpp"
#include "dvre/contracts/types.hpp"
#include "dvre/ledger/types.hpp"
#include "dvre/wallet/wallet.hpp"

namespace dvre::api {

using nlohmann::json;

json to_json(const ledger::Receipt& r);
json to_json(const contracts::UserProfile& p);
json to_json(const contracts::ContractDetails& d);
json to_json(const contracts::FileDetails& f);
json to_json(const contracts::UserAccess& a);
json to_json(const wallet::AuthSig& sig);
json to_json(const contracts::GasStudy& study);

// Parsers throw Error(InvalidArgument) naming the offending field.
contracts::UserAccess user_access_from_json(const json& j);
contracts::ContractDetails contract_details_from_json(const json& j, const Address& default_owner);
contracts::FileInput file_input_from_json(const json& j);
wallet::AuthSig auth_sig_from_json(const json& j);

/// Parses a request body; throws Error(InvalidArgument).
json parse_body(std::string_view body);

}  // namespace dvre::api
