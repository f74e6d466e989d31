#include "dvre/contracts/group.hpp"

#include "dvre/contracts/user_registry.hpp"

namespace dvre::contracts {

// ---------------------------------------------------------------------------
// GroupContract

std::unique_ptr<ledger::Contract> GroupContract::construct(ledger::CallContext& ctx, Decoder& args) {
    ContractDetails details = decode_contract_details(args);
    bool paper_faithful = args.boolean();
    ctx.require(!details.group_name.empty(), ErrorCode::InvalidArgument, "group_name must be non-empty");

    std::uint64_t slots = ledger::string_slots(details.group_name) + 1 + ledger::string_slots(details.permissions) + 2 + 1;
    for (const auto& s : details.organizations) slots += ledger::string_slots(s);
    for (const auto& s : details.countries) slots += ledger::string_slots(s);
    ctx.charge_write(true, slots);
    return std::make_unique<GroupContract>(std::move(details), paper_faithful);
}

Bytes GroupContract::constructor_args(const ContractDetails& details, bool paper_faithful_add_files) {
    Encoder enc;
    encode(enc, details);
    enc.boolean(paper_faithful_add_files);
    return std::move(enc).take();
}

bool GroupContract::has_function(std::string_view name) const {
    return name == kAssociateUsersToGroup || name == kAddFilesToGroup || name == kSetUserAccess;
}

Bytes GroupContract::call(ledger::CallContext& ctx, std::string_view function, Decoder& args) {
    if (function == kAssociateUsersToGroup) return associate_users_to_group(ctx, args);
    if (function == kAddFilesToGroup) return add_files_to_group(ctx, args);
    if (function == kSetUserAccess) {
        only_group_owner(ctx);
        set_user_access(ctx, decode_user_access(args));
        return {};
    }
    ctx.revert(ErrorCode::UnknownFunction, std::string(function));
}

void GroupContract::only_group_owner(const ledger::CallContext& ctx) const {
    ctx.require(ctx.sender() == details_.group_owner_address, ErrorCode::Reverted, std::string(kOnlyGroupOwner));
}

void GroupContract::set_user_access(ledger::CallContext& ctx, const UserAccess& access) {
    ctx.require(access.access_from <= access.access_to, ErrorCode::InvalidWindow,
                "access_from must not be after access_to");
    auto [it, inserted] = access_.insert_or_assign(access.eoa_address, access);
    ctx.charge_write(inserted, 2);
}

Bytes GroupContract::associate_users_to_group(ledger::CallContext& ctx, Decoder& args) {
    only_group_owner(ctx);
    auto users = decode_list<UserAccess>(args, decode_user_access);
    for (const auto& u : users) set_user_access(ctx, u);
    ctx.emit("Success", std::string(kUsersAdded));
    return {};
}

Bytes GroupContract::add_files_to_group(ledger::CallContext& ctx, Decoder& args) {
    auto files = decode_list<FileInput>(args, decode_file_input);
    if (!paper_faithful_add_files_) {
        ctx.require(check_access(ctx.sender(), ctx.block_time()), ErrorCode::NotMember,
                    ctx.sender().to_checksum_hex() + " is not an active member of the group");
    }
    for (auto& f : files) {
        ctx.require(!f.ipfs_hash.empty(), ErrorCode::InvalidArgument, "ipfs_hash must be non-empty");
        ctx.require(!shared_.contains(f.ipfs_hash), ErrorCode::DuplicateHash,
                    f.ipfs_hash + " is already shared in the group");
        shared_.insert(f.ipfs_hash);
        ctx.charge_write(true, 1 + ledger::string_slots(f.ipfs_hash) + ledger::string_slots(f.file_name) + 2);
        files_.push_back(FileDetails{std::move(f.ipfs_hash), std::move(f.file_name), ctx.sender(), ctx.block_time()});
        ctx.emit("Success", std::string(kFilesShared));
    }
    return {};
}

void GroupContract::encode_state(Encoder& enc) const {
    encode(enc, details_);
    enc.boolean(paper_faithful_add_files_);
    enc.u32(static_cast<std::uint32_t>(access_.size()));
    for (const auto& [_, a] : access_) encode(enc, a);
    enc.u32(static_cast<std::uint32_t>(shared_.size()));
    for (const auto& h : shared_) enc.str(h);
    encode_list(enc, files_);
}

bool GroupContract::check_access(const Address& user, Timestamp at) const {
    if (user == details_.group_owner_address) return true;
    auto it = access_.find(user);
    return it != access_.end() && it->second.covers(at);
}

std::optional<UserAccess> GroupContract::access_of(const Address& user) const {
    auto it = access_.find(user);
    if (it == access_.end()) return std::nullopt;
    return it->second;
}

// ---------------------------------------------------------------------------
// PolicyManager

std::unique_ptr<ledger::Contract> PolicyManager::construct(ledger::CallContext& ctx, Decoder& args) {
    ContractId factory = ledger::decode_contract_id(args);
    bool paper_faithful = args.boolean();
    ctx.charge_write(true, 2);
    return std::make_unique<PolicyManager>(factory, paper_faithful);
}

Bytes PolicyManager::constructor_args(const ContractId& user_factory, bool paper_faithful_add_files) {
    Encoder enc;
    ledger::encode_contract_id(enc, user_factory);
    enc.boolean(paper_faithful_add_files);
    return std::move(enc).take();
}

Bytes PolicyManager::call(ledger::CallContext& ctx, std::string_view function, Decoder& args) {
    if (function != kCreateGroupContract) ctx.revert(ErrorCode::UnknownFunction, std::string(function));

    ContractDetails details = decode_contract_details(args);
    const auto* registry = ctx.find_as<UserMetadataFactory>(user_factory_);
    ctx.require(registry != nullptr && registry->user_contract(ctx.sender()).has_value(), ErrorCode::NotRegistered,
                ctx.sender().to_checksum_hex() + " is not a registered user");
    ctx.require(ctx.sender() == details.group_owner_address, ErrorCode::OwnerMismatch,
                "caller must be the group_owner_address");

    ContractId group = ctx.create_child(kGroupContract, GroupContract::constructor_args(details, paper_faithful_add_files_));
    groups_.push_back(group);
    ctx.charge_write(true);
    ctx.emit("Success", "Group contract successfully created");

    Encoder out;
    ledger::encode_contract_id(out, group);
    return std::move(out).take();
}

void PolicyManager::encode_state(Encoder& enc) const {
    ledger::encode_contract_id(enc, user_factory_);
    enc.boolean(paper_faithful_add_files_);
    enc.u32(static_cast<std::uint32_t>(groups_.size()));
    for (const auto& g : groups_) ledger::encode_contract_id(enc, g);
}

// ---------------------------------------------------------------------------

ledger::ContractRegistry make_registry() {
    ledger::ContractRegistry r;
    r.add(std::string(kUserMetadataFactory), UserMetadataFactory::construct);
    r.add(std::string(kUserMetadata), UserMetadata::construct);
    r.add(std::string(kPolicyManager), PolicyManager::construct);
    r.add(std::string(kGroupContract), GroupContract::construct);
    return r;
}

}  // namespace dvre::contracts
