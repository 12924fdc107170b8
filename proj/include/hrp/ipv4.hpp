#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace hrp {

/// An IPv4 address held as a host-order 32-bit integer (first octet in the top byte).
struct Ipv4Address {
    std::uint32_t value = 0;

    constexpr Ipv4Address() = default;
    constexpr explicit Ipv4Address(std::uint32_t v) : value(v) {}

    /// Parses strict dotted-quad text. Leading zeros, signs, and
    /// surrounding characters are rejected so that parsing and
    /// to_string() round-trip exactly.
    static std::optional<Ipv4Address> parse(std::string_view text) noexcept;

    std::string to_string() const;

    constexpr std::uint8_t host_byte() const noexcept { return static_cast<std::uint8_t>(value & 0xFFu); }

    friend constexpr auto operator<=>(Ipv4Address, Ipv4Address) = default;
};

/// A CIDR block with host bits cleared.
struct Cidr {
    std::uint32_t network = 0;
    std::uint8_t length = 0;

    static constexpr std::uint32_t mask_for(unsigned length) noexcept {
        return length == 0 ? 0u : ~std::uint32_t{0} << (32 - length);
    }

    constexpr bool contains(Ipv4Address a) const noexcept { return (a.value & mask_for(length)) == network; }

    /// Parses "a.b.c.d/len". Host bits are kept as written; see normalized().
    static std::optional<Cidr> parse(std::string_view text) noexcept;

    constexpr bool is_normalized() const noexcept { return (network & ~mask_for(length)) == 0; }
    constexpr Cidr normalized() const noexcept { return Cidr{network & mask_for(length), length}; }

    std::string to_string() const;

    friend constexpr auto operator<=>(const Cidr&, const Cidr&) = default;
};

std::string_view trim(std::string_view s) noexcept;

}  // namespace hrp
