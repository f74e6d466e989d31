#include "dvre/keynet/zip.hpp"

#include <ctime>
#include <limits>

#include <zlib.h>

#include "dvre/common/error.hpp"

namespace dvre::zip {

namespace {

constexpr std::uint32_t kLocalSig = 0x04034b50;
constexpr std::uint32_t kCentralSig = 0x02014b50;
constexpr std::uint32_t kEndSig = 0x06054b50;
constexpr std::uint16_t kVersion = 20;
constexpr std::uint16_t kUtf8Flag = 0x0800;
constexpr std::size_t kLocalHeaderSize = 30;
constexpr std::size_t kCentralHeaderSize = 46;
constexpr std::size_t kEndSize = 22;

[[noreturn]] void corrupt(const std::string& what) { throw Error(ErrorCode::IntegrityFailure, "zip: " + what); }

void put16(Bytes& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}
void put32(Bytes& out, std::uint32_t v) {
    put16(out, static_cast<std::uint16_t>(v));
    put16(out, static_cast<std::uint16_t>(v >> 16));
}

std::uint16_t get16(ByteView in, std::size_t at) {
    if (at + 2 > in.size()) corrupt("truncated");
    return static_cast<std::uint16_t>(in[at] | (in[at + 1] << 8));
}
std::uint32_t get32(ByteView in, std::size_t at) {
    return get16(in, at) | (static_cast<std::uint32_t>(get16(in, at + 2)) << 16);
}

std::uint32_t crc_of(ByteView data) {
    uLong crc = crc32(0L, Z_NULL, 0);
    std::size_t off = 0;
    while (off < data.size()) {
        auto chunk = static_cast<uInt>(std::min<std::size_t>(data.size() - off, std::numeric_limits<uInt>::max()));
        crc = crc32(crc, data.data() + off, chunk);
        off += chunk;
    }
    return static_cast<std::uint32_t>(crc);
}

std::pair<std::uint16_t, std::uint16_t> dos_time(std::int64_t unix_time) {
    std::time_t t = static_cast<std::time_t>(unix_time);
    std::tm tm{};
    gmtime_r(&t, &tm);
    if (tm.tm_year < 80) return {0, static_cast<std::uint16_t>((1 << 5) | 1)};
    if (tm.tm_year > 207) tm.tm_year = 207;
    auto time = static_cast<std::uint16_t>((tm.tm_hour << 11) | (tm.tm_min << 5) | (tm.tm_sec / 2));
    auto date = static_cast<std::uint16_t>(((tm.tm_year - 80) << 9) | ((tm.tm_mon + 1) << 5) | tm.tm_mday);
    return {time, date};
}

}  // namespace

Bytes write(const std::vector<Entry>& entries, std::int64_t unix_time) {
    if (entries.size() > 0xffff) throw Error(ErrorCode::InvalidArgument, "zip: too many entries");
    auto [time, date] = dos_time(unix_time);
    Bytes out, central;
    for (const auto& e : entries) {
        if (e.data.size() > 0xffffffffu || e.name.size() > 0xffff || out.size() > 0xffffffffu) {
            throw Error(ErrorCode::InvalidArgument, "zip: entry too large");
        }
        const std::uint32_t crc = crc_of(e.data);
        const auto size = static_cast<std::uint32_t>(e.data.size());
        const auto name_len = static_cast<std::uint16_t>(e.name.size());
        const auto offset = static_cast<std::uint32_t>(out.size());

        put32(out, kLocalSig);
        put16(out, kVersion);
        put16(out, kUtf8Flag);
        put16(out, 0);  // stored
        put16(out, time);
        put16(out, date);
        put32(out, crc);
        put32(out, size);
        put32(out, size);
        put16(out, name_len);
        put16(out, 0);
        out.insert(out.end(), e.name.begin(), e.name.end());
        out.insert(out.end(), e.data.begin(), e.data.end());

        put32(central, kCentralSig);
        put16(central, kVersion);
        put16(central, kVersion);
        put16(central, kUtf8Flag);
        put16(central, 0);
        put16(central, time);
        put16(central, date);
        put32(central, crc);
        put32(central, size);
        put32(central, size);
        put16(central, name_len);
        put16(central, 0);
        put16(central, 0);
        put16(central, 0);
        put16(central, 0);
        put32(central, 0);
        put32(central, offset);
        central.insert(central.end(), e.name.begin(), e.name.end());
    }
    if (out.size() + central.size() > 0xffffffffu) throw Error(ErrorCode::InvalidArgument, "zip: archive too large");
    const auto cd_offset = static_cast<std::uint32_t>(out.size());
    out.insert(out.end(), central.begin(), central.end());
    put32(out, kEndSig);
    put16(out, 0);
    put16(out, 0);
    put16(out, static_cast<std::uint16_t>(entries.size()));
    put16(out, static_cast<std::uint16_t>(entries.size()));
    put32(out, static_cast<std::uint32_t>(central.size()));
    put32(out, cd_offset);
    put16(out, 0);
    return out;
}

std::vector<Entry> read(ByteView in) {
    if (in.size() < kEndSize) corrupt("too short");
    std::size_t end = in.size() - kEndSize;
    const std::size_t floor = in.size() > kEndSize + 0xffff ? in.size() - kEndSize - 0xffff : 0;
    while (get32(in, end) != kEndSig) {
        if (end == floor) corrupt("no end of central directory");
        --end;
    }
    const std::uint16_t count = get16(in, end + 10);
    const std::uint32_t cd_size = get32(in, end + 12);
    const std::uint32_t cd_offset = get32(in, end + 16);
    if (std::size_t{cd_offset} + cd_size > end) corrupt("central directory out of range");

    std::vector<Entry> entries;
    std::size_t at = cd_offset;
    for (std::uint16_t i = 0; i < count; ++i) {
        if (at + kCentralHeaderSize > end || get32(in, at) != kCentralSig) corrupt("bad central header");
        const std::uint16_t method = get16(in, at + 10);
        const std::uint32_t crc = get32(in, at + 16);
        const std::uint32_t csize = get32(in, at + 20);
        const std::uint32_t usize = get32(in, at + 24);
        const std::uint16_t name_len = get16(in, at + 28);
        const std::uint16_t extra_len = get16(in, at + 30);
        const std::uint16_t comment_len = get16(in, at + 32);
        const std::uint32_t local = get32(in, at + 42);
        if (method != 0) corrupt("unsupported compression method " + std::to_string(method));
        if (csize != usize) corrupt("size mismatch");
        if (at + kCentralHeaderSize + name_len > end) corrupt("truncated name");
        std::string name(reinterpret_cast<const char*>(in.data() + at + kCentralHeaderSize), name_len);
        at += kCentralHeaderSize + name_len + extra_len + comment_len;

        if (std::size_t{local} + kLocalHeaderSize > cd_offset || get32(in, local) != kLocalSig) {
            corrupt("bad local header for " + name);
        }
        const std::size_t data_at = std::size_t{local} + kLocalHeaderSize + get16(in, local + 26) + get16(in, local + 28);
        if (data_at + csize > cd_offset) corrupt("entry data out of range for " + name);
        ByteView data = in.subspan(data_at, csize);
        if (crc_of(data) != crc) corrupt("CRC mismatch in " + name);
        entries.push_back(Entry{std::move(name), Bytes(data.begin(), data.end())});
    }
    return entries;
}

}  // namespace dvre::zip
