#include "dvre/common/error.hpp"

namespace dvre {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::InvalidEntropy: return "InvalidEntropy";
        case ErrorCode::ChallengeMismatch: return "ChallengeMismatch";
        case ErrorCode::SignatureInvalid: return "SignatureInvalid";
        case ErrorCode::BadNonce: return "BadNonce";
        case ErrorCode::UnknownContract: return "UnknownContract";
        case ErrorCode::UnknownFunction: return "UnknownFunction";
        case ErrorCode::Reverted: return "Reverted";
        case ErrorCode::TimeRegression: return "TimeRegression";
        case ErrorCode::CorruptLog: return "CorruptLog";
        case ErrorCode::AlreadyRegistered: return "AlreadyRegistered";
        case ErrorCode::AddressMismatch: return "AddressMismatch";
        case ErrorCode::NotRegistered: return "NotRegistered";
        case ErrorCode::OwnerMismatch: return "OwnerMismatch";
        case ErrorCode::InvalidWindow: return "InvalidWindow";
        case ErrorCode::NotMember: return "NotMember";
        case ErrorCode::DuplicateHash: return "DuplicateHash";
        case ErrorCode::UnknownGroup: return "UnknownGroup";
        case ErrorCode::AccessDenied: return "AccessDenied";
        case ErrorCode::QuotaExceededFiles: return "QuotaExceededFiles";
        case ErrorCode::QuotaExceededBytes: return "QuotaExceededBytes";
        case ErrorCode::NotFound: return "NotFound";
        case ErrorCode::IntegrityFailure: return "IntegrityFailure";
        case ErrorCode::BadThreshold: return "BadThreshold";
        case ErrorCode::InsufficientShares: return "InsufficientShares";
        case ErrorCode::MixedKeyIds: return "MixedKeyIds";
        case ErrorCode::NodeUnavailable: return "NodeUnavailable";
        case ErrorCode::UnknownKeyId: return "UnknownKeyId";
        case ErrorCode::NetworkMismatch: return "NetworkMismatch";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace dvre
