#include "dvre/contracts/user_registry.hpp"

namespace dvre::contracts {

std::unique_ptr<ledger::Contract> UserMetadata::construct(ledger::CallContext& ctx, Decoder& args) {
    UserProfile profile = decode_user_profile(args);
    ctx.require(!profile.username.empty(), ErrorCode::InvalidArgument, "username must be non-empty");
    ctx.charge_write(true, 1 + ledger::string_slots(profile.username) + ledger::string_slots(profile.organization) +
                               ledger::string_slots(profile.country));
    return std::make_unique<UserMetadata>(std::move(profile));
}

Bytes UserMetadata::call(ledger::CallContext& ctx, std::string_view function, Decoder&) {
    ctx.revert(ErrorCode::UnknownFunction, "UserMetadata has no function " + std::string(function));
}

std::unique_ptr<ledger::Contract> UserMetadataFactory::construct(ledger::CallContext&, Decoder&) {
    return std::make_unique<UserMetadataFactory>();
}

Bytes UserMetadataFactory::call(ledger::CallContext& ctx, std::string_view function, Decoder& args) {
    if (function != kCreateUserContract) ctx.revert(ErrorCode::UnknownFunction, std::string(function));

    UserProfile profile = decode_user_profile(args);
    ctx.require(ctx.sender() == profile.public_address, ErrorCode::AddressMismatch,
                "caller does not match profile public_address");
    ctx.require(!users_.contains(profile.public_address), ErrorCode::AlreadyRegistered,
                profile.public_address.to_checksum_hex() + " is already registered");
    ContractId child = ctx.create_child(kUserMetadata, encode_args(profile));
    users_.emplace(profile.public_address, child);
    ctx.charge_write(true);
    ctx.emit("Success", "User successfully registered");

    Encoder out;
    ledger::encode_contract_id(out, child);
    return std::move(out).take();
}

void UserMetadataFactory::encode_state(Encoder& enc) const {
    enc.u32(static_cast<std::uint32_t>(users_.size()));
    for (const auto& [addr, id] : users_) {
        ledger::encode_address(enc, addr);
        ledger::encode_contract_id(enc, id);
    }
}

std::optional<ContractId> UserMetadataFactory::user_contract(const Address& a) const {
    auto it = users_.find(a);
    if (it == users_.end()) return std::nullopt;
    return it->second;
}

}  // namespace dvre::contracts
