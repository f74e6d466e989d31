#pragma once

#include <atomic>
#include <filesystem>
#include <functional>
#include <random>
#include <string>

#include <gtest/gtest.h>
#include <unistd.h>

#include "dvre/common/error.hpp"
#include "dvre/wallet/wallet.hpp"

namespace dvre::test {

// Scenario dates, 00:00:00 UTC.
inline constexpr std::int64_t kMar27 = 1711497600;
inline constexpr std::int64_t kMar28 = 1711584000;
inline constexpr std::int64_t kMar29 = 1711670400;
inline constexpr std::int64_t kMar30 = 1711756800;

class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("dvre-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

/// Wallet whose private key is the integer `n`.
inline wallet::Wallet key_wallet(std::uint8_t n) {
    crypto::secp256k1::PrivateKey k{};
    k[31] = n;
    return wallet::wallet_from_private_key(k);
}

/// Runs fn and returns the code of the dvre::Error it throws.
inline ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::IoError;
}

inline Bytes random_content(std::mt19937_64& rng, std::size_t size) {
    Bytes out(size);
    for (auto& b : out) b = static_cast<std::uint8_t>(rng());
    return out;
}

}  // namespace dvre::test
