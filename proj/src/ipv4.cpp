#include "hrp/ipv4.hpp"

#include <charconv>

namespace hrp {

std::string_view trim(std::string_view s) noexcept {
    constexpr std::string_view ws = " \t\r\n";
    const auto first = s.find_first_not_of(ws);
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(ws);
    return s.substr(first, last - first + 1);
}

namespace {

bool parse_octet(std::string_view part, std::uint32_t& out) noexcept {
    if (part.empty() || part.size() > 3) return false;
    if (part.size() > 1 && part[0] == '0') return false;
    for (char c : part) {
        if (c < '0' || c > '9') return false;
    }
    unsigned v = 0;
    std::from_chars(part.data(), part.data() + part.size(), v);
    if (v > 255) return false;
    out = v;
    return true;
}

}  // namespace

std::optional<Ipv4Address> Ipv4Address::parse(std::string_view text) noexcept {
    std::uint32_t value = 0;
    for (int i = 0; i < 4; ++i) {
        const auto dot = text.find('.');
        const bool last = (i == 3);
        if (last != (dot == std::string_view::npos)) return std::nullopt;
        const auto part = last ? text : text.substr(0, dot);
        std::uint32_t octet = 0;
        if (!parse_octet(part, octet)) return std::nullopt;
        value = (value << 8) | octet;
        if (!last) text.remove_prefix(dot + 1);
    }
    return Ipv4Address{value};
}

std::string Ipv4Address::to_string() const {
    std::string out;
    out.reserve(15);
    for (int shift = 24; shift >= 0; shift -= 8) {
        out += std::to_string((value >> shift) & 0xFFu);
        if (shift != 0) out += '.';
    }
    return out;
}

std::optional<Cidr> Cidr::parse(std::string_view text) noexcept {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return std::nullopt;
    const auto addr = Ipv4Address::parse(text.substr(0, slash));
    if (!addr) return std::nullopt;
    const auto len_text = text.substr(slash + 1);
    if (len_text.empty() || len_text.size() > 2) return std::nullopt;
    unsigned len = 0;
    const auto [ptr, ec] = std::from_chars(len_text.data(), len_text.data() + len_text.size(), len);
    if (ec != std::errc{} || ptr != len_text.data() + len_text.size() || len > 32) return std::nullopt;
    return Cidr{addr->value, static_cast<std::uint8_t>(len)};
}

std::string Cidr::to_string() const {
    return Ipv4Address{network}.to_string() + "/" + std::to_string(length);
}

}  // namespace hrp
