#pragma once

#include <string>
#include <string_view>

#include "dvre/ledger/types.hpp"

namespace dvre::contracts {

enum class DateBound { Start, End };

/// Accepts "YYYY-MM-DD" (expanded to 00:00:00 or 23:59:59 UTC depending on
/// `bound`), RFC 3339 timestamps ("2024-03-27T10:00:00Z", "+02:00" offsets,
/// optional fractional seconds, which are truncated), or integer seconds.
/// "unlimited" is accepted for DateBound::End.
ledger::Timestamp parse_time(std::string_view text, DateBound bound);

/// RFC 3339 in UTC, or "unlimited" for kUnlimited.
std::string format_time(ledger::Timestamp t);

}  // namespace dvre::contracts
