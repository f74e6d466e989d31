#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dvre {

// One code per failure class that callers branch on. The HTTP layer and the
// CLI map these to status codes and exit codes respectively.
enum class ErrorCode {
    InvalidArgument,
    // wallet
    InvalidEntropy,
    ChallengeMismatch,
    SignatureInvalid,
    // ledger
    BadNonce,
    UnknownContract,
    UnknownFunction,
    Reverted,
    TimeRegression,
    CorruptLog,
    // contracts
    AlreadyRegistered,
    AddressMismatch,
    NotRegistered,
    OwnerMismatch,
    InvalidWindow,
    NotMember,
    DuplicateHash,
    UnknownGroup,
    AccessDenied,
    // store
    QuotaExceededFiles,
    QuotaExceededBytes,
    NotFound,
    IntegrityFailure,
    // keynet
    BadThreshold,
    InsufficientShares,
    MixedKeyIds,
    NodeUnavailable,
    UnknownKeyId,
    NetworkMismatch,
    // io
    IoError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace dvre
