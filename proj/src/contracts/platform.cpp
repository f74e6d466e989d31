#include "dvre/contracts/platform.hpp"

#include "dvre/crypto/keccak.hpp"

namespace dvre::contracts {

using ledger::Receipt;
using ledger::TxKind;

Address Platform::operator_address() {
    Hash32 h = crypto::keccak256(std::string_view("dvre:operator"));
    Address::Raw raw{};
    std::copy(h.begin() + 12, h.end(), raw.begin());
    return Address(raw);
}

Platform::Platform(PlatformOptions options)
    : ledger_(std::make_unique<ledger::Ledger>(make_registry(), std::move(options.schedule), options.genesis_time)) {
    const Address op = operator_address();
    user_factory_ = *submit(op, TxKind::DeployContract, std::nullopt, kUserMetadataFactory, {}, std::nullopt).created;
    policy_manager_ = *submit(op, TxKind::DeployContract, std::nullopt, kPolicyManager,
                              PolicyManager::constructor_args(user_factory_, options.paper_faithful_add_files),
                              std::nullopt)
                           .created;
}

Platform::Platform(FromLog, std::unique_ptr<ledger::Ledger> ledger) : ledger_(std::move(ledger)) {
    const Address op = operator_address();
    user_factory_ = ledger::Ledger::derive_contract_id(op, 0);
    policy_manager_ = ledger::Ledger::derive_contract_id(op, 1);
    bool ok = ledger_->read([&](const ledger::StateView& v) {
        return v.find_as<UserMetadataFactory>(user_factory_) != nullptr &&
               v.find_as<PolicyManager>(policy_manager_) != nullptr;
    });
    if (!ok) throw Error(ErrorCode::CorruptLog, "log does not start with the platform deployments");
}

std::unique_ptr<Platform> Platform::from_log(std::span<const ledger::LogEntry> log, PlatformOptions options) {
    if (log.empty()) return std::make_unique<Platform>(std::move(options));
    auto ledger = ledger::Ledger::replay(log, make_registry(), std::move(options.schedule), options.genesis_time);
    return std::unique_ptr<Platform>(new Platform(FromLog{}, std::move(ledger)));
}

Receipt Platform::submit(const Address& sender, TxKind kind, std::optional<ContractId> target,
                         std::string_view function, Bytes payload, std::optional<Timestamp> at) {
    std::lock_guard lock(submit_mu_);
    ledger::Transaction tx;
    tx.sender = sender;
    tx.kind = kind;
    tx.target = target;
    tx.function_name = std::string(function);
    tx.payload = std::move(payload);
    tx.nonce = ledger_->nonce(sender);
    Receipt receipt = ledger_->submit_tx(tx, at);
    if (!receipt.ok()) throw TxFailed(std::move(receipt));
    return receipt;
}

template <class F>
auto Platform::with_group(const ContractId& group, F&& fn) const {
    return ledger_->read([&](const ledger::StateView& v) {
        const auto* g = v.find_as<GroupContract>(group);
        if (g == nullptr) throw Error(ErrorCode::UnknownGroup, "no group contract at " + group.str());
        return fn(*g);
    });
}

Receipt Platform::register_user(const Address& caller, const UserProfile& profile, std::optional<Timestamp> at) {
    return submit(caller, TxKind::CallFunction, user_factory_, kCreateUserContract, encode_args(profile), at);
}

std::optional<ContractId> Platform::user_contract(const Address& user) const {
    return ledger_->read([&](const ledger::StateView& v) -> std::optional<ContractId> {
        const auto* f = v.find_as<UserMetadataFactory>(user_factory_);
        return f ? f->user_contract(user) : std::nullopt;
    });
}

UserProfile Platform::get_user(const Address& user) const {
    return ledger_->read([&](const ledger::StateView& v) {
        const auto* f = v.find_as<UserMetadataFactory>(user_factory_);
        auto id = f ? f->user_contract(user) : std::nullopt;
        const auto* meta = id ? v.find_as<UserMetadata>(*id) : nullptr;
        if (meta == nullptr) throw Error(ErrorCode::NotRegistered, user.to_checksum_hex() + " is not registered");
        return meta->profile();
    });
}

bool Platform::is_registered(const Address& user) const {
    return user_contract(user).has_value();
}

Receipt Platform::create_group(const Address& caller, const ContractDetails& details, std::optional<Timestamp> at) {
    return submit(caller, TxKind::CallFunction, policy_manager_, kCreateGroupContract, encode_args(details), at);
}

Receipt Platform::associate_users_to_group(const ContractId& group, const Address& caller,
                                           const std::vector<UserAccess>& users, std::optional<Timestamp> at) {
    return submit(caller, TxKind::CallFunction, group, kAssociateUsersToGroup, encode_list_args(users), at);
}

Receipt Platform::set_user_access(const ContractId& group, const Address& caller, const UserAccess& access,
                                  std::optional<Timestamp> at) {
    return submit(caller, TxKind::CallFunction, group, kSetUserAccess, encode_args(access), at);
}

Receipt Platform::add_files_to_group(const ContractId& group, const Address& caller,
                                     const std::vector<FileInput>& files, std::optional<Timestamp> at) {
    return submit(caller, TxKind::CallFunction, group, kAddFilesToGroup, encode_list_args(files), at);
}

bool Platform::group_exists(const ContractId& group) const {
    return ledger_->read(
        [&](const ledger::StateView& v) { return v.find_as<GroupContract>(group) != nullptr; });
}

Address Platform::group_owner(const ContractId& group) const {
    return with_group(group, [](const GroupContract& g) { return g.owner(); });
}

bool Platform::check_access(const ContractId& group, const Address& user, Timestamp at) const {
    return with_group(group, [&](const GroupContract& g) { return g.check_access(user, at); });
}

std::vector<FileDetails> Platform::list_group_files(const ContractId& group, const Address& caller) const {
    const Timestamp at = now();
    return with_group(group, [&](const GroupContract& g) {
        if (!g.check_access(caller, at)) {
            throw Error(ErrorCode::AccessDenied, caller.to_checksum_hex() + " has no access to " + group.str());
        }
        return g.files();
    });
}

std::vector<GroupSummary> Platform::list_groups() const {
    return ledger_->read([&](const ledger::StateView& v) {
        std::vector<GroupSummary> out;
        const auto* pm = v.find_as<PolicyManager>(policy_manager_);
        if (pm == nullptr) return out;
        for (const auto& id : pm->groups()) {
            if (const auto* g = v.find_as<GroupContract>(id)) out.push_back(GroupSummary{id, g->details()});
        }
        return out;
    });
}

ContractDetails Platform::group_details(const ContractId& group) const {
    return with_group(group, [](const GroupContract& g) { return g.details(); });
}

std::optional<UserAccess> Platform::member_access(const ContractId& group, const Address& user) const {
    return with_group(group, [&](const GroupContract& g) { return g.access_of(user); });
}

std::vector<UserAccess> Platform::members(const ContractId& group) const {
    return with_group(group, [](const GroupContract& g) {
        std::vector<UserAccess> out;
        for (const auto& [_, a] : g.members()) out.push_back(a);
        return out;
    });
}

}  // namespace dvre::contracts
