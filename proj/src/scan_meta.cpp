#include "hrp/scan_meta.hpp"

#include <charconv>
#include <cstdio>

#include "hrp/errors.hpp"

namespace hrp {

std::string_view to_string(Protocol p) noexcept {
    return p == Protocol::tcp ? "tcp" : "udp";
}

std::optional<Protocol> parse_protocol(std::string_view text) noexcept {
    if (text == "tcp" || text == "TCP") return Protocol::tcp;
    if (text == "udp" || text == "UDP") return Protocol::udp;
    return std::nullopt;
}

namespace {

bool read_fixed(std::string_view s, std::size_t pos, std::size_t width, int& out) {
    if (pos + width > s.size()) return false;
    const char* b = s.data() + pos;
    for (std::size_t i = 0; i < width; ++i) {
        if (b[i] < '0' || b[i] > '9') return false;
    }
    std::from_chars(b, b + width, out);
    return true;
}

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view text) noexcept {
    using namespace std::chrono;
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    if (!read_fixed(text, 0, 4, y) || text.size() < 10 || text[4] != '-' || !read_fixed(text, 5, 2, mo) ||
        text[7] != '-' || !read_fixed(text, 8, 2, d)) {
        return std::nullopt;
    }
    if (text.size() != 10) {
        if (text.size() != 20 || (text[10] != 'T' && text[10] != ' ') || !read_fixed(text, 11, 2, h) ||
            text[13] != ':' || !read_fixed(text, 14, 2, mi) || text[16] != ':' || !read_fixed(text, 17, 2, s) ||
            text[19] != 'Z') {
            return std::nullopt;
        }
        if (h > 23 || mi > 59 || s > 59) return std::nullopt;
    }
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;
    return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
}

std::string format_timestamp(Timestamp t) {
    using namespace std::chrono;
    const auto day_point = floor<days>(t);
    const year_month_day ymd{day_point};
    const hh_mm_ss hms{t - day_point};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()));
    return buf;
}

ScanMeta ScanMeta::make(Protocol protocol, int port, std::string scan_id, std::optional<Timestamp> timestamp,
                        std::string vantage) {
    if (port < 0 || port > 65535) throw UsageError("port out of range: " + std::to_string(port));
    if (scan_id.empty()) throw UsageError("scan_id must not be empty");
    return ScanMeta{protocol, static_cast<std::uint16_t>(port), std::move(scan_id), timestamp, std::move(vantage)};
}

std::string ScanMeta::service() const {
    return std::string(to_string(protocol)) + "/" + std::to_string(port);
}

void require_same_service(const ScanMeta& a, const ScanMeta& b, std::string_view context) {
    if (!a.same_service(b)) {
        throw UsageError(std::string(context) + ": port/protocol mismatch (" + a.service() + " vs " + b.service() + ")");
    }
}

}  // namespace hrp
