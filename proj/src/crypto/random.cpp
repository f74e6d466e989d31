#include "dvre/crypto/random.hpp"

#include <climits>

#include <openssl/rand.h>

namespace dvre::crypto {

void random_fill(std::span<std::uint8_t> out) {
    std::size_t done = 0;
    while (done < out.size()) {
        int chunk = static_cast<int>(std::min<std::size_t>(out.size() - done, INT_MAX));
        if (RAND_bytes(out.data() + done, chunk) != 1) throw Error(ErrorCode::IoError, "RAND_bytes failed");
        done += static_cast<std::size_t>(chunk);
    }
}

}  // namespace dvre::crypto
