#include "dvre/contracts/gas_study.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "dvre/contracts/platform.hpp"

namespace dvre::contracts {
namespace {

Address study_address(std::uint8_t tag) {
    Address::Raw raw{};
    raw.fill(0x11);
    raw[0] = 0xd0;
    raw[19] = tag;
    return Address(raw);
}

}  // namespace

ledger::Gas GasStudy::deployment(std::string_view contract) const {
    for (const auto& d : deployments) {
        if (d.contract == contract) return d.gas;
    }
    throw Error(ErrorCode::NotFound, "no deployment measured for " + std::string(contract));
}

ledger::Gas GasStudy::function(std::string_view name) const {
    for (const auto& f : functions) {
        if (f.function == name) return f.gas;
    }
    throw Error(ErrorCode::NotFound, "no function measured named " + std::string(name));
}

GasStudy run_gas_study(const ledger::GasSchedule& schedule, std::string preset_label) {
    constexpr Timestamp kStudyTime = 1'711'497'600;  // 2024-03-27T00:00:00Z
    Platform platform(PlatformOptions{schedule, kStudyTime, false});
    auto& ledger = platform.ledger();
    const Address op = Platform::operator_address();

    GasStudy study;
    study.preset = std::move(preset_label);
    study.mode = schedule.mode;

    // The platform constructor deployed the two factories as blocks 1 and 2.
    auto receipts = ledger.receipts();
    const ledger::Gas factory_gas = receipts.at(0).gas_used;
    const ledger::Gas policy_gas = receipts.at(1).gas_used;

    const Address alice = study_address(0x01);
    const Address bob = study_address(0x02);
    const UserProfile alice_profile{alice, "alice", "UvA", "Netherlands"};
    const UserProfile bob_profile{bob, "bob", "UiS", "Norway"};
    const ContractDetails details{"DataSharing", alice, "Full Access", {"UvA", "UiS", "UPV"},
                                  {"Netherlands", "Norway", "Spain"}};

    auto deploy = [&](std::string_view kind, Bytes args) {
        ledger::Transaction tx;
        tx.sender = op;
        tx.kind = ledger::TxKind::DeployContract;
        tx.function_name = std::string(kind);
        tx.payload = std::move(args);
        tx.nonce = ledger.nonce(op);
        auto r = ledger.submit_tx(tx);
        if (!r.ok()) throw TxFailed(r);
        return r.gas_used;
    };
    const ledger::Gas group_gas = deploy(kGroupContract, GroupContract::constructor_args(details, false));
    const ledger::Gas user_meta_gas = deploy(kUserMetadata, encode_args(alice_profile));

    study.deployments = {
        {std::string(kPolicyManager), policy_gas},
        {std::string(kUserMetadataFactory), factory_gas},
        {std::string(kGroupContract), group_gas},
        {std::string(kUserMetadata), user_meta_gas},
    };

    auto create_user = platform.register_user(alice, alice_profile);
    platform.register_user(bob, bob_profile);
    auto create_group = platform.create_group(alice, details);
    const ContractId group = *create_group.created;
    auto associate =
        platform.associate_users_to_group(group, alice, {UserAccess{bob, kStudyTime, kStudyTime + 3 * 86'400 - 1}});
    auto set_access = platform.set_user_access(group, alice, UserAccess{bob, kStudyTime, kUnlimited});
    auto add_files = platform.add_files_to_group(
        group, alice,
        {FileInput{"dvre1-0000000000000000000000000000000000000000000000000000000000000000", "#binary#mask.png"}});

    study.functions = {
        {std::string(kPolicyManager), std::string(kCreateGroupContract), create_group.gas_used},
        {std::string(kUserMetadataFactory), std::string(kCreateUserContract), create_user.gas_used},
        {std::string(kGroupContract), std::string(kAssociateUsersToGroup), associate.gas_used},
        {std::string(kGroupContract), std::string(kAddFilesToGroup), add_files.gas_used},
        {std::string(kGroupContract), std::string(kSetUserAccess), set_access.gas_used},
    };

    study.deployment_ordering = policy_gas > factory_gas && factory_gas > group_gas && group_gas > user_meta_gas;
    study.parents_exceed_children = policy_gas > group_gas && factory_gas > user_meta_gas;
    study.policy_manager_minus_factory = static_cast<std::int64_t>(policy_gas) - static_cast<std::int64_t>(factory_gas);
    study.group_minus_user_metadata = static_cast<std::int64_t>(group_gas) - static_cast<std::int64_t>(user_meta_gas);

    std::vector<double> others;
    for (const auto& f : study.functions) {
        if (f.function != kCreateGroupContract && f.function != kCreateUserContract) {
            others.push_back(static_cast<double>(f.gas));
        }
    }
    std::sort(others.begin(), others.end());
    const std::size_t mid = others.size() / 2;
    study.median_other_functions = others.size() % 2 == 1 ? others[mid] : (others[mid - 1] + others[mid]) / 2.0;
    study.create_group_ratio = static_cast<double>(create_group.gas_used) / study.median_other_functions;
    study.create_user_ratio = static_cast<double>(create_user.gas_used) / study.median_other_functions;
    study.create_functions_dominate =
        study.create_group_ratio >= study.ratio_threshold && study.create_user_ratio >= study.ratio_threshold;
    return study;
}

std::string format_gas_table(const GasStudy& study) {
    std::ostringstream out;
    auto yes_no = [](bool b) { return b ? "yes" : "no"; };
    out << "Gas report (preset: " << study.preset << ")\n\n";
    out << std::left << std::setw(24) << "Deployment" << std::right << std::setw(12) << "gas" << '\n';
    for (const auto& d : study.deployments) {
        out << std::left << std::setw(24) << d.contract << std::right << std::setw(12) << d.gas << '\n';
    }
    out << '\n' << std::left << std::setw(24) << "Contract" << std::setw(24) << "Function" << std::right
        << std::setw(12) << "gas" << '\n';
    for (const auto& f : study.functions) {
        out << std::left << std::setw(24) << f.contract << std::setw(24) << f.function << std::right << std::setw(12)
            << f.gas << '\n';
    }
    out << '\n'
        << "PolicyManager - UserMetadataFactory : " << study.policy_manager_minus_factory << '\n'
        << "GroupContract - UserMetadata        : " << study.group_minus_user_metadata << '\n'
        << std::fixed << std::setprecision(2)
        << "createGroupContract / median(other) : " << study.create_group_ratio << '\n'
        << "createUserContract / median(other)  : " << study.create_user_ratio << '\n'
        << "deployment ordering PM>UMF>GC>UM    : " << yes_no(study.deployment_ordering) << '\n'
        << "parents exceed children             : " << yes_no(study.parents_exceed_children) << '\n'
        << "create* >= " << study.ratio_threshold << "x median(other)      : "
        << yes_no(study.create_functions_dominate) << '\n';
    return out.str();
}

}  // namespace dvre::contracts
