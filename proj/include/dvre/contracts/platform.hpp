#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "dvre/contracts/group.hpp"
#include "dvre/contracts/types.hpp"
#include "dvre/contracts/user_registry.hpp"
#include "dvre/ledger/ledger.hpp"

namespace dvre::contracts {

/// Read-only questions the key network asks about ledger state.
class AccessView {
public:
    virtual ~AccessView() = default;

    virtual bool is_registered(const Address& user) const = 0;
    virtual bool group_exists(const ContractId& group) const = 0;
    /// Throws Error(UnknownGroup).
    virtual Address group_owner(const ContractId& group) const = 0;
    /// Throws Error(UnknownGroup).
    virtual bool check_access(const ContractId& group, const Address& user, Timestamp at) const = 0;
    /// Current ledger block time.
    virtual Timestamp now() const = 0;
};

/// A reverted transaction. Carries the receipt, which is also in the log.
class TxFailed : public Error {
public:
    explicit TxFailed(ledger::Receipt receipt)
        : Error(receipt.revert_code, receipt.revert_reason), receipt_(std::move(receipt)) {}

    const ledger::Receipt& receipt() const { return receipt_; }

private:
    ledger::Receipt receipt_;
};

struct PlatformOptions {
    ledger::GasSchedule schedule = ledger::GasSchedule::calibrated();
    Timestamp genesis_time = 0;
    /// Lets anyone call addFilesToGroup, as the reference contract listing
    /// does. Off by default: only the owner and in-window members may share.
    bool paper_faithful_add_files = false;
};

struct GroupSummary {
    ContractId id;
    ContractDetails details;
};

/// The four research-collaboration contracts deployed on one ledger, with a
/// typed client surface. Construction deploys UserMetadataFactory and
/// PolicyManager from the operator account; every mutating method is one
/// transaction. Mutations throw TxFailed on revert; admission errors
/// (BadNonce, UnknownContract, TimeRegression, ...) propagate as Error.
///
/// `at`, where accepted, overrides the block time (see Ledger::submit_tx).
class Platform : public AccessView {
public:
    explicit Platform(PlatformOptions options = {});

    /// Rebuilds a platform from its log. An empty log yields a fresh platform.
    static std::unique_ptr<Platform> from_log(std::span<const ledger::LogEntry> log, PlatformOptions options = {});

    /// Fixed account that deploys the two factory contracts.
    static Address operator_address();

    ledger::Ledger& ledger() { return *ledger_; }
    const ledger::Ledger& ledger() const { return *ledger_; }
    const ContractId& user_factory() const { return user_factory_; }
    const ContractId& policy_manager() const { return policy_manager_; }

    ledger::Receipt register_user(const Address& caller, const UserProfile& profile,
                                  std::optional<Timestamp> at = std::nullopt);
    /// Throws Error(NotRegistered).
    UserProfile get_user(const Address& user) const;
    std::optional<ContractId> user_contract(const Address& user) const;

    /// receipt.created holds the new group id.
    ledger::Receipt create_group(const Address& caller, const ContractDetails& details,
                                 std::optional<Timestamp> at = std::nullopt);
    ledger::Receipt associate_users_to_group(const ContractId& group, const Address& caller,
                                             const std::vector<UserAccess>& users,
                                             std::optional<Timestamp> at = std::nullopt);
    ledger::Receipt set_user_access(const ContractId& group, const Address& caller, const UserAccess& access,
                                    std::optional<Timestamp> at = std::nullopt);
    ledger::Receipt add_files_to_group(const ContractId& group, const Address& caller,
                                       const std::vector<FileInput>& files,
                                       std::optional<Timestamp> at = std::nullopt);

    /// Files in insertion order if `caller` has access at the current ledger
    /// time; throws Error(AccessDenied) or Error(UnknownGroup).
    std::vector<FileDetails> list_group_files(const ContractId& group, const Address& caller) const;
    std::vector<GroupSummary> list_groups() const;
    ContractDetails group_details(const ContractId& group) const;
    std::optional<UserAccess> member_access(const ContractId& group, const Address& user) const;
    std::vector<UserAccess> members(const ContractId& group) const;

    // AccessView
    bool is_registered(const Address& user) const override;
    bool group_exists(const ContractId& group) const override;
    Address group_owner(const ContractId& group) const override;
    bool check_access(const ContractId& group, const Address& user, Timestamp at) const override;
    Timestamp now() const override { return ledger_->time(); }

private:
    struct FromLog {};
    Platform(FromLog, std::unique_ptr<ledger::Ledger> ledger);

    ledger::Receipt submit(const Address& sender, ledger::TxKind kind, std::optional<ContractId> target,
                           std::string_view function, Bytes payload, std::optional<Timestamp> at);

    template <class F>
    auto with_group(const ContractId& group, F&& fn) const;

    std::unique_ptr<ledger::Ledger> ledger_;
    ContractId user_factory_;
    ContractId policy_manager_;
    std::mutex submit_mu_;
};

}  // namespace dvre::contracts
