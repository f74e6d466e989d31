#pragma once

// Minimal ZIP container: stored (uncompressed) entries, CRC-32 checked on read.

#include <string>
#include <vector>

#include "dvre/common/bytes.hpp"

namespace dvre::zip {

struct Entry {
    std::string name;
    Bytes data;
};

/// `unix_time` stamps every entry (DOS date/time, 1980..2107).
Bytes write(const std::vector<Entry>& entries, std::int64_t unix_time);

/// Throws Error(IntegrityFailure) on a malformed archive, unsupported
/// compression, or CRC mismatch.
std::vector<Entry> read(ByteView archive);

}  // namespace dvre::zip
