#include "dvre/store/store.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "dvre/crypto/random.hpp"

namespace dvre::store {
namespace fs = std::filesystem;

namespace {

constexpr const char* kIndexName = "pins.tsv";

std::int64_t wall_seconds() {
    return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch())
        .count();
}

// Write to a unique sibling, then rename over the target.
void atomic_write(const fs::path& target, ByteView data) {
    fs::path tmp = target;
    tmp += ".tmp-" + to_hex(crypto::random_array<6>());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
        out.flush();
        if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error(ErrorCode::IoError, "cannot rename into " + target.string());
    }
}

Bytes read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::NotFound, "missing object file " + path.filename().string());
    return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

BlockStore::BlockStore(fs::path root, Quota quota, Clock clock)
    : root_(std::move(root)), quota_(quota), clock_(clock ? std::move(clock) : Clock(wall_seconds)) {
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create store root " + root_.string());
    load_index();
}

void BlockStore::load_index() {
    std::ifstream in(root_ / kIndexName);
    if (!in) return;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string cid_text;
        PinRecord rec;
        if (!std::getline(fields, cid_text, '\t') || !(fields >> rec.size >> rec.pinned_at)) {
            throw Error(ErrorCode::IoError, "malformed pin index line: " + line);
        }
        rec.cid = Cid::parse(cid_text);
        total_bytes_ += rec.size;
        pins_.emplace(rec.cid, rec);
    }
}

void BlockStore::write_index_locked() const {
    std::string text;
    for (const auto& [cid, rec] : pins_) {
        text += cid.str() + '\t' + std::to_string(rec.size) + '\t' + std::to_string(rec.pinned_at) + '\n';
    }
    atomic_write(root_ / kIndexName, as_bytes(text));
}

Cid BlockStore::put(ByteView content) {
    Cid cid = Cid::of(content);
    std::lock_guard lock(mu_);
    if (pins_.contains(cid)) return cid;
    if (pins_.size() + 1 > quota_.max_pinned_files) {
        throw Error(ErrorCode::QuotaExceededFiles,
                    "pin limit of " + std::to_string(quota_.max_pinned_files) + " files reached");
    }
    if (total_bytes_ + content.size() > quota_.max_total_bytes) {
        throw Error(ErrorCode::QuotaExceededBytes,
                    "storage limit of " + std::to_string(quota_.max_total_bytes) + " bytes would be exceeded");
    }
    atomic_write(object_path(cid), content);
    pins_.emplace(cid, PinRecord{cid, content.size(), clock_()});
    total_bytes_ += content.size();
    try {
        write_index_locked();
    } catch (...) {
        pins_.erase(cid);
        total_bytes_ -= content.size();
        std::error_code ec;
        fs::remove(object_path(cid), ec);
        throw;
    }
    return cid;
}

Bytes BlockStore::get(const Cid& cid) const {
    std::lock_guard lock(mu_);
    if (!pins_.contains(cid)) throw Error(ErrorCode::NotFound, cid.str() + " is not pinned");
    Bytes content = read_file(object_path(cid));
    if (!cid.verifies(content)) {
        throw Error(ErrorCode::IntegrityFailure, "stored bytes of " + cid.str() + " do not match their identifier");
    }
    return content;
}

void BlockStore::unpin(const Cid& cid) {
    std::lock_guard lock(mu_);
    auto it = pins_.find(cid);
    if (it == pins_.end()) throw Error(ErrorCode::NotFound, cid.str() + " is not pinned");
    total_bytes_ -= it->second.size;
    pins_.erase(it);
    write_index_locked();
    std::error_code ec;
    fs::remove(object_path(cid), ec);
}

bool BlockStore::contains(const Cid& cid) const {
    std::lock_guard lock(mu_);
    return pins_.contains(cid);
}

Usage BlockStore::usage() const {
    std::lock_guard lock(mu_);
    return Usage{pins_.size(), total_bytes_};
}

std::vector<PinRecord> BlockStore::pins() const {
    std::lock_guard lock(mu_);
    std::vector<PinRecord> out;
    out.reserve(pins_.size());
    for (const auto& [_, rec] : pins_) out.push_back(rec);
    return out;
}

}  // namespace dvre::store
