#pragma once

#include <map>
#include <optional>

#include "dvre/contracts/types.hpp"
#include "dvre/ledger/contract.hpp"

namespace dvre::contracts {

/// Per-user identity record, deployed by UserMetadataFactory.
class UserMetadata final : public ledger::Contract {
public:
    explicit UserMetadata(UserProfile profile) : profile_(std::move(profile)) {}

    static std::unique_ptr<ledger::Contract> construct(ledger::CallContext& ctx, Decoder& args);

    std::string_view kind() const override { return kUserMetadata; }
    bool has_function(std::string_view) const override { return false; }
    Bytes call(ledger::CallContext& ctx, std::string_view function, Decoder& args) override;
    void encode_state(Encoder& enc) const override { encode(enc, profile_); }
    std::unique_ptr<ledger::Contract> clone() const override { return std::make_unique<UserMetadata>(*this); }

    const UserProfile& profile() const { return profile_; }

private:
    UserProfile profile_;
};

/// Registry of users; createUserContract deploys one UserMetadata per address.
class UserMetadataFactory final : public ledger::Contract {
public:
    static std::unique_ptr<ledger::Contract> construct(ledger::CallContext& ctx, Decoder& args);

    std::string_view kind() const override { return kUserMetadataFactory; }
    bool has_function(std::string_view name) const override { return name == kCreateUserContract; }
    Bytes call(ledger::CallContext& ctx, std::string_view function, Decoder& args) override;
    void encode_state(Encoder& enc) const override;
    std::unique_ptr<ledger::Contract> clone() const override { return std::make_unique<UserMetadataFactory>(*this); }

    std::optional<ContractId> user_contract(const Address& a) const;
    const std::map<Address, ContractId>& users() const { return users_; }

private:
    std::map<Address, ContractId> users_;
};

}  // namespace dvre::contracts
