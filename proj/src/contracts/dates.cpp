#include "dvre/contracts/dates.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

#include "dvre/contracts/types.hpp"

namespace dvre::contracts {
namespace {

[[noreturn]] void bad(std::string_view text) {
    throw Error(ErrorCode::InvalidArgument, "unrecognized date/time '" + std::string(text) + "'");
}

int digits(std::string_view text, std::string_view field) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size()) bad(text);
    return v;
}

}  // namespace

ledger::Timestamp parse_time(std::string_view text, DateBound bound) {
    if (text == "unlimited") {
        if (bound != DateBound::End) bad(text);
        return kUnlimited;
    }
    std::string_view unsigned_part = text.starts_with('-') ? text.substr(1) : text;
    if (!unsigned_part.empty() && unsigned_part.find_first_not_of("0123456789") == std::string_view::npos) {
        ledger::Timestamp v = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc{} || ptr != text.data() + text.size()) bad(text);
        return v;
    }
    if (text.size() < 10 || text[4] != '-' || text[7] != '-') bad(text);
    using namespace std::chrono;
    year_month_day ymd{year{digits(text, text.substr(0, 4))}, month{static_cast<unsigned>(digits(text, text.substr(5, 2)))},
                       day{static_cast<unsigned>(digits(text, text.substr(8, 2)))}};
    if (!ymd.ok()) bad(text);
    const ledger::Timestamp midnight = sys_days{ymd}.time_since_epoch() / seconds{1};
    if (text.size() == 10) return bound == DateBound::Start ? midnight : midnight + 86'399;

    if (text.size() < 20 || (text[10] != 'T' && text[10] != 't' && text[10] != ' ') || text[13] != ':' || text[16] != ':') {
        bad(text);
    }
    int hh = digits(text, text.substr(11, 2));
    int mm = digits(text, text.substr(14, 2));
    int ss = digits(text, text.substr(17, 2));
    if (hh > 23 || mm > 59 || ss > 60) bad(text);
    std::size_t pos = 19;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    }
    std::string_view zone = text.substr(pos);
    ledger::Timestamp offset = 0;
    if (zone == "Z" || zone == "z") {
        offset = 0;
    } else if (zone.size() == 6 && (zone[0] == '+' || zone[0] == '-') && zone[3] == ':') {
        offset = digits(text, zone.substr(1, 2)) * 3600 + digits(text, zone.substr(4, 2)) * 60;
        if (zone[0] == '-') offset = -offset;
    } else {
        bad(text);
    }
    return midnight + hh * 3600 + mm * 60 + ss - offset;
}

std::string format_time(ledger::Timestamp t) {
    if (t == kUnlimited) return "unlimited";
    using namespace std::chrono;
    sys_seconds tp{seconds{t}};
    auto day_point = floor<days>(tp);
    year_month_day ymd{day_point};
    hh_mm_ss hms{tp - day_point};
    char buf[40];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()));
    return buf;
}

}  // namespace dvre::contracts
