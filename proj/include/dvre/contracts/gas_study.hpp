#pragma once

#include <string>
#include <vector>

#include "dvre/ledger/gas.hpp"

namespace dvre::contracts {

struct DeploymentGas {
    std::string contract;
    ledger::Gas gas = 0;
};

struct FunctionGas {
    std::string contract;
    std::string function;
    ledger::Gas gas = 0;
};

/// Gas measured by deploying all four contracts and calling each mutating
/// function once on a scratch ledger, plus the comparisons drawn from it.
struct GasStudy {
    std::string preset;
    ledger::GasMode mode = ledger::GasMode::Calibrated;
    /// PolicyManager, UserMetadataFactory, GroupContract, UserMetadata.
    std::vector<DeploymentGas> deployments;
    std::vector<FunctionGas> functions;

    /// PolicyManager > UserMetadataFactory > GroupContract > UserMetadata.
    bool deployment_ordering = false;
    /// Each factory costs more to deploy than the child it creates.
    bool parents_exceed_children = false;
    std::int64_t policy_manager_minus_factory = 0;
    std::int64_t group_minus_user_metadata = 0;
    /// Median gas of the functions other than the two create* calls.
    double median_other_functions = 0;
    double create_group_ratio = 0;
    double create_user_ratio = 0;
    /// Both create* ratios are at least this.
    double ratio_threshold = 5.0;
    bool create_functions_dominate = false;

    ledger::Gas deployment(std::string_view contract) const;
    ledger::Gas function(std::string_view name) const;
};

GasStudy run_gas_study(const ledger::GasSchedule& schedule, std::string preset_label);

/// Fixed-width text table for terminals.
std::string format_gas_table(const GasStudy& study);

}  // namespace dvre::contracts
