#include "dvre/contracts/types.hpp"

namespace dvre::contracts {

using ledger::decode_address;
using ledger::encode_address;

namespace {

void encode_strings(Encoder& enc, const std::vector<std::string>& v) {
    enc.u32(static_cast<std::uint32_t>(v.size()));
    for (const auto& s : v) enc.str(s);
}

std::vector<std::string> decode_strings(Decoder& dec) {
    return decode_list<std::string>(dec, [](Decoder& d) { return d.str(); });
}

}  // namespace

void encode(Encoder& enc, const UserProfile& v) {
    encode_address(enc, v.public_address);
    enc.str(v.username).str(v.organization).str(v.country);
}

void encode(Encoder& enc, const ContractDetails& v) {
    enc.str(v.group_name);
    encode_address(enc, v.group_owner_address);
    enc.str(v.permissions);
    encode_strings(enc, v.organizations);
    encode_strings(enc, v.countries);
}

void encode(Encoder& enc, const FileInput& v) {
    enc.str(v.ipfs_hash).str(v.file_name);
}

void encode(Encoder& enc, const FileDetails& v) {
    enc.str(v.ipfs_hash).str(v.file_name);
    encode_address(enc, v.added_by);
    enc.i64(v.added_at);
}

void encode(Encoder& enc, const UserAccess& v) {
    encode_address(enc, v.eoa_address);
    enc.i64(v.access_from).i64(v.access_to);
}

UserProfile decode_user_profile(Decoder& dec) {
    UserProfile p;
    p.public_address = decode_address(dec);
    p.username = dec.str();
    p.organization = dec.str();
    p.country = dec.str();
    return p;
}

ContractDetails decode_contract_details(Decoder& dec) {
    ContractDetails d;
    d.group_name = dec.str();
    d.group_owner_address = decode_address(dec);
    d.permissions = dec.str();
    d.organizations = decode_strings(dec);
    d.countries = decode_strings(dec);
    return d;
}

FileInput decode_file_input(Decoder& dec) {
    FileInput f;
    f.ipfs_hash = dec.str();
    f.file_name = dec.str();
    return f;
}

FileDetails decode_file_details(Decoder& dec) {
    FileDetails f;
    f.ipfs_hash = dec.str();
    f.file_name = dec.str();
    f.added_by = decode_address(dec);
    f.added_at = dec.i64();
    return f;
}

UserAccess decode_user_access(Decoder& dec) {
    UserAccess a;
    a.eoa_address = decode_address(dec);
    a.access_from = dec.i64();
    a.access_to = dec.i64();
    return a;
}

}  // namespace dvre::contracts
