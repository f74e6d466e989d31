#pragma once

#include "dvre/common/bytes.hpp"

namespace dvre::crypto {

Hash32 sha256(ByteView data);
Hash32 hmac_sha256(ByteView key, ByteView data);

}  // namespace dvre::crypto
