#pragma once

#include <array>
#include <bitset>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hrp/ipv4.hpp"
#include "hrp/scan_meta.hpp"

namespace hrp {

class ScanReader;

/// A /24 prefix, identified by the upper 24 bits of its member addresses.
struct Slash24 {
    std::uint32_t network = 0;  // 24-bit value

    constexpr Slash24() = default;
    constexpr explicit Slash24(std::uint32_t upper24) : network(upper24 & 0x00FFFFFFu) {}

    constexpr Ipv4Address base() const noexcept { return Ipv4Address{network << 8}; }
    constexpr Ipv4Address host(std::uint8_t host_byte) const noexcept { return Ipv4Address{(network << 8) | host_byte}; }

    /// "a.b.c.0/24"
    std::string to_string() const;
    /// Accepts "a.b.c.0/24" (or the bare network address a.b.c.0).
    static std::optional<Slash24> parse(std::string_view text) noexcept;

    friend constexpr auto operator<=>(Slash24, Slash24) = default;
};

constexpr Slash24 slash24_of(Ipv4Address a) noexcept { return Slash24{a.value >> 8}; }

constexpr std::size_t kSlash24Size = 256;

/// Responsive host bytes of one /24: bit i set iff host byte i responded.
using Occupancy = std::bitset<kSlash24Size>;

/// Threshold on the fraction of the 256 addresses that must respond.
class HrpThreshold {
public:
    /// Throws UsageError unless 0 < fraction <= 1.
    static constexpr HrpThreshold from_fraction(double fraction) {
        if (!(fraction > 0.0 && fraction <= 1.0)) throw_invalid_fraction(fraction);
        // fraction * 256 is exact in binary floating point, so the ceiling is exact too.
        const double scaled = fraction * static_cast<double>(kSlash24Size);
        auto m = static_cast<unsigned>(scaled);
        if (static_cast<double>(m) < scaled) ++m;
        return HrpThreshold{fraction, m};
    }

    constexpr double fraction() const noexcept { return fraction_; }
    /// ceil(fraction * 256), in [1, 256].
    constexpr unsigned min_count() const noexcept { return min_count_; }
    constexpr bool classifies(unsigned responsive_count) const noexcept { return responsive_count >= min_count_; }

    friend bool operator==(const HrpThreshold&, const HrpThreshold&) = default;

private:
    constexpr HrpThreshold(double f, unsigned m) : fraction_(f), min_count_(m) {}
    [[noreturn]] static void throw_invalid_fraction(double fraction);
    double fraction_;
    unsigned min_count_;
};

inline constexpr HrpThreshold kDefaultThreshold = HrpThreshold::from_fraction(0.90);
inline constexpr HrpThreshold kStrictThreshold = HrpThreshold::from_fraction(0.95);

/// Per-/24 occupancy for one scan. Only nonempty prefixes are stored;
/// iteration is in ascending prefix order.
class PrefixTable {
public:
    using Map = std::map<Slash24, Occupancy>;

    PrefixTable() = default;
    explicit PrefixTable(ScanMeta meta) : meta_(std::move(meta)) {}

    const ScanMeta& meta() const noexcept { return meta_; }

    void add(Ipv4Address a) { map_[slash24_of(a)].set(a.host_byte()); }
    /// ORs `bits` into the prefix; empty bitmaps are not materialized.
    void add(Slash24 prefix, const Occupancy& bits);
    /// Bitwise OR of every prefix in `other`. Throws UsageError if metadata differ.
    void merge_from(const PrefixTable& other);

    bool contains(Ipv4Address a) const noexcept;
    const Occupancy* find(Slash24 prefix) const noexcept;
    unsigned count(Slash24 prefix) const noexcept;

    std::size_t size() const noexcept { return map_.size(); }
    bool empty() const noexcept { return map_.empty(); }
    std::size_t total_addresses() const noexcept;

    Map::const_iterator begin() const noexcept { return map_.begin(); }
    Map::const_iterator end() const noexcept { return map_.end(); }

    friend bool operator==(const PrefixTable&, const PrefixTable&) = default;

private:
    ScanMeta meta_;
    Map map_;
};

PrefixTable aggregate(std::span<const Ipv4Address> addresses, const ScanMeta& meta);
PrefixTable aggregate(ScanReader& reader, const ScanMeta& meta);
/// Throws UsageError when the two tables carry different metadata.
PrefixTable merge(const PrefixTable& a, const PrefixTable& b);

/// Responsive addresses of one prefix in ascending order.
std::vector<Ipv4Address> members(Slash24 prefix, const Occupancy& bits);

/// Classified /24 with optional routing context.
struct PrefixStat {
    Slash24 prefix;
    ScanMeta meta;
    unsigned responsive_count = 0;
    bool is_hrp = false;
    HrpThreshold threshold = kDefaultThreshold;
    std::optional<std::uint32_t> origin_asn;
    std::optional<Cidr> covering_route;

    friend bool operator==(const PrefixStat&, const PrefixStat&) = default;
};

std::vector<PrefixStat> classify(const PrefixTable& table, const HrpThreshold& threshold);

/// Sorted HRP prefixes of a classified scan.
std::vector<Slash24> hrp_set(std::span<const PrefixStat> stats);

/// Distribution of responsive addresses per /24, indexed by count 1..256.
struct ResponsivenessHistogram {
    std::array<std::size_t, kSlash24Size + 1> prefix_count{};
    std::array<std::size_t, kSlash24Size + 1> address_count{};
    std::array<double, kSlash24Size + 1> cumulative_prefix_share{};
    std::array<double, kSlash24Size + 1> cumulative_address_share{};
    std::size_t total_prefixes = 0;
    std::size_t total_addresses = 0;

    /// Prefixes and addresses in buckets >= min_count.
    std::size_t prefixes_at_or_above(unsigned min_count) const noexcept;
    std::size_t addresses_at_or_above(unsigned min_count) const noexcept;
};

ResponsivenessHistogram responsiveness_histogram(std::span<const PrefixStat> stats);

/// Share of responsive addresses located in HRPs; 0 for empty input.
double hrp_address_share(std::span<const PrefixStat> stats) noexcept;

}  // namespace hrp
