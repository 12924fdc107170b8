#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace hrp {

enum class Protocol : std::uint8_t { tcp, udp };

std::string_view to_string(Protocol p) noexcept;
std::optional<Protocol> parse_protocol(std::string_view text) noexcept;

using Timestamp = std::chrono::sys_seconds;

/// Accepts "YYYY-MM-DD", "YYYY-MM-DDTHH:MM:SSZ" and the same with a space separator.
std::optional<Timestamp> parse_timestamp(std::string_view text) noexcept;
/// Formats as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_timestamp(Timestamp t);

/// Identifies one port scan: results are specific to a protocol and port.
struct ScanMeta {
    Protocol protocol = Protocol::tcp;
    std::uint16_t port = 0;
    std::string scan_id = "scan";
    std::optional<Timestamp> timestamp;
    std::string vantage;

    /// Throws UsageError if scan_id is empty.
    static ScanMeta make(Protocol protocol, int port, std::string scan_id,
                         std::optional<Timestamp> timestamp = std::nullopt, std::string vantage = {});

    /// "tcp/443"
    std::string service() const;

    bool same_service(const ScanMeta& other) const noexcept {
        return protocol == other.protocol && port == other.port;
    }

    friend bool operator==(const ScanMeta&, const ScanMeta&) = default;
};

/// Throws UsageError naming both services when they disagree.
void require_same_service(const ScanMeta& a, const ScanMeta& b, std::string_view context);

}  // namespace hrp
