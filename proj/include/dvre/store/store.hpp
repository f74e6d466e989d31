#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <vector>

#include "dvre/store/cid.hpp"

namespace dvre::store {

/// Pinning limits of one workspace member.
struct Quota {
    std::uint64_t max_pinned_files = 500;
    std::uint64_t max_total_bytes = std::uint64_t{1} << 30;
};

struct PinRecord {
    Cid cid;
    std::uint64_t size = 0;
    std::int64_t pinned_at = 0;
};

struct Usage {
    std::uint64_t pinned_files = 0;
    std::uint64_t total_bytes = 0;
};

/// Flat-directory content-addressed store. Each object is one file named by
/// its Cid; the pin index "pins.tsv" holds "cid<TAB>size<TAB>timestamp" lines.
/// The store does not encrypt: anyone holding a Cid can read its bytes.
///
/// All operations are individually atomic (one mutex; files are written to a
/// temporary name and renamed into place).
class BlockStore {
public:
    using Clock = std::function<std::int64_t()>;

    explicit BlockStore(std::filesystem::path root, Quota quota = {}, Clock clock = {});

    /// Idempotent: content that is already pinned returns its Cid without
    /// counting against the quota again.
    Cid put(ByteView content);
    /// Throws NotFound, or IntegrityFailure if the stored bytes no longer
    /// hash to `cid`.
    Bytes get(const Cid& cid) const;
    /// Releases the pin and deletes the object; throws NotFound.
    void unpin(const Cid& cid);

    bool contains(const Cid& cid) const;
    Usage usage() const;
    const Quota& quota() const { return quota_; }
    std::vector<PinRecord> pins() const;
    const std::filesystem::path& root() const { return root_; }
    std::filesystem::path object_path(const Cid& cid) const { return root_ / cid.str(); }

private:
    void load_index();
    void write_index_locked() const;

    std::filesystem::path root_;
    Quota quota_;
    Clock clock_;
    mutable std::mutex mu_;
    std::map<Cid, PinRecord> pins_;
    std::uint64_t total_bytes_ = 0;
};

}  // namespace dvre::store
