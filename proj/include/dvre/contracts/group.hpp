#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "dvre/contracts/types.hpp"
#include "dvre/ledger/contract.hpp"

namespace dvre::contracts {

/// One sharing agreement: details, per-member access windows, shared files.
class GroupContract final : public ledger::Contract {
public:
    GroupContract(ContractDetails details, bool paper_faithful_add_files)
        : details_(std::move(details)), paper_faithful_add_files_(paper_faithful_add_files) {}

    static std::unique_ptr<ledger::Contract> construct(ledger::CallContext& ctx, Decoder& args);
    static Bytes constructor_args(const ContractDetails& details, bool paper_faithful_add_files);

    std::string_view kind() const override { return kGroupContract; }
    bool has_function(std::string_view name) const override;
    Bytes call(ledger::CallContext& ctx, std::string_view function, Decoder& args) override;
    void encode_state(Encoder& enc) const override;
    std::unique_ptr<ledger::Contract> clone() const override { return std::make_unique<GroupContract>(*this); }

    const ContractDetails& details() const { return details_; }
    const Address& owner() const { return details_.group_owner_address; }
    /// Owner always; otherwise a stored window must cover `at` (inclusive).
    bool check_access(const Address& user, Timestamp at) const;
    std::optional<UserAccess> access_of(const Address& user) const;
    const std::map<Address, UserAccess>& members() const { return access_; }
    const std::vector<FileDetails>& files() const { return files_; }
    bool is_shared(std::string_view ipfs_hash) const { return shared_.contains(std::string(ipfs_hash)); }

private:
    void only_group_owner(const ledger::CallContext& ctx) const;
    void set_user_access(ledger::CallContext& ctx, const UserAccess& access);
    Bytes associate_users_to_group(ledger::CallContext& ctx, Decoder& args);
    Bytes add_files_to_group(ledger::CallContext& ctx, Decoder& args);

    ContractDetails details_;
    bool paper_faithful_add_files_ = false;
    std::map<Address, UserAccess> access_;
    std::set<std::string> shared_;
    std::vector<FileDetails> files_;
};

/// Parent of every GroupContract; checks registration before creating one.
class PolicyManager final : public ledger::Contract {
public:
    PolicyManager(ContractId user_factory, bool paper_faithful_add_files)
        : user_factory_(user_factory), paper_faithful_add_files_(paper_faithful_add_files) {}

    static std::unique_ptr<ledger::Contract> construct(ledger::CallContext& ctx, Decoder& args);
    static Bytes constructor_args(const ContractId& user_factory, bool paper_faithful_add_files);

    std::string_view kind() const override { return kPolicyManager; }
    bool has_function(std::string_view name) const override { return name == kCreateGroupContract; }
    Bytes call(ledger::CallContext& ctx, std::string_view function, Decoder& args) override;
    void encode_state(Encoder& enc) const override;
    std::unique_ptr<ledger::Contract> clone() const override { return std::make_unique<PolicyManager>(*this); }

    const std::vector<ContractId>& groups() const { return groups_; }
    const ContractId& user_factory() const { return user_factory_; }

private:
    ContractId user_factory_;
    bool paper_faithful_add_files_ = false;
    std::vector<ContractId> groups_;
};

/// Constructors for all four contract kinds.
ledger::ContractRegistry make_registry();

}  // namespace dvre::contracts
