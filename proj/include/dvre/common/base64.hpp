#pragma once

#include <string>

#include "dvre/common/bytes.hpp"

namespace dvre {

std::string base64_encode(ByteView data);
/// Standard alphabet with padding; whitespace is not allowed. Throws
/// Error(InvalidArgument).
Bytes base64_decode(std::string_view text);

}  // namespace dvre
