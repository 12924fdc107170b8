#include "hrp/prefix.hpp"

#include <algorithm>

#include "hrp/errors.hpp"
#include "hrp/scan_ingest.hpp"

namespace hrp {

std::string Slash24::to_string() const {
    return base().to_string() + "/24";
}

std::optional<Slash24> Slash24::parse(std::string_view text) noexcept {
    text = trim(text);
    if (text.ends_with("/24")) text.remove_suffix(3);
    const auto addr = Ipv4Address::parse(text);
    if (!addr || addr->host_byte() != 0) return std::nullopt;
    return slash24_of(*addr);
}

void HrpThreshold::throw_invalid_fraction(double fraction) {
    throw UsageError("threshold fraction must be in (0, 1], got " + std::to_string(fraction));
}

void PrefixTable::add(Slash24 prefix, const Occupancy& bits) {
    if (bits.none()) return;
    map_[prefix] |= bits;
}

void PrefixTable::merge_from(const PrefixTable& other) {
    if (!(meta_ == other.meta_)) {
        throw UsageError("cannot merge prefix tables of different scans (" + meta_.scan_id + " " + meta_.service() +
                         " vs " + other.meta_.scan_id + " " + other.meta_.service() + ")");
    }
    for (const auto& [prefix, bits] : other.map_) map_[prefix] |= bits;
}

bool PrefixTable::contains(Ipv4Address a) const noexcept {
    const auto* bits = find(slash24_of(a));
    return bits != nullptr && bits->test(a.host_byte());
}

const Occupancy* PrefixTable::find(Slash24 prefix) const noexcept {
    const auto it = map_.find(prefix);
    return it == map_.end() ? nullptr : &it->second;
}

unsigned PrefixTable::count(Slash24 prefix) const noexcept {
    const auto* bits = find(prefix);
    return bits == nullptr ? 0u : static_cast<unsigned>(bits->count());
}

std::size_t PrefixTable::total_addresses() const noexcept {
    std::size_t total = 0;
    for (const auto& [prefix, bits] : map_) total += bits.count();
    return total;
}

PrefixTable aggregate(std::span<const Ipv4Address> addresses, const ScanMeta& meta) {
    PrefixTable table(meta);
    for (const auto a : addresses) table.add(a);
    return table;
}

PrefixTable aggregate(ScanReader& reader, const ScanMeta& meta) {
    PrefixTable table(meta);
    while (const auto a = reader.next()) table.add(*a);
    return table;
}

PrefixTable merge(const PrefixTable& a, const PrefixTable& b) {
    PrefixTable out = a;
    out.merge_from(b);
    return out;
}

std::vector<Ipv4Address> members(Slash24 prefix, const Occupancy& bits) {
    std::vector<Ipv4Address> out;
    out.reserve(bits.count());
    for (unsigned i = 0; i < kSlash24Size; ++i) {
        if (bits.test(i)) out.push_back(prefix.host(static_cast<std::uint8_t>(i)));
    }
    return out;
}

std::vector<PrefixStat> classify(const PrefixTable& table, const HrpThreshold& threshold) {
    std::vector<PrefixStat> stats;
    stats.reserve(table.size());
    for (const auto& [prefix, bits] : table) {
        PrefixStat s;
        s.prefix = prefix;
        s.meta = table.meta();
        s.responsive_count = static_cast<unsigned>(bits.count());
        s.is_hrp = threshold.classifies(s.responsive_count);
        s.threshold = threshold;
        stats.push_back(std::move(s));
    }
    return stats;
}

std::vector<Slash24> hrp_set(std::span<const PrefixStat> stats) {
    std::vector<Slash24> out;
    for (const auto& s : stats) {
        if (s.is_hrp) out.push_back(s.prefix);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::size_t ResponsivenessHistogram::prefixes_at_or_above(unsigned min_count) const noexcept {
    std::size_t n = 0;
    for (unsigned c = std::max(min_count, 1u); c <= kSlash24Size; ++c) n += prefix_count[c];
    return n;
}

std::size_t ResponsivenessHistogram::addresses_at_or_above(unsigned min_count) const noexcept {
    std::size_t n = 0;
    for (unsigned c = std::max(min_count, 1u); c <= kSlash24Size; ++c) n += address_count[c];
    return n;
}

ResponsivenessHistogram responsiveness_histogram(std::span<const PrefixStat> stats) {
    ResponsivenessHistogram h;
    for (const auto& s : stats) {
        if (s.responsive_count == 0 || s.responsive_count > kSlash24Size) continue;
        ++h.prefix_count[s.responsive_count];
        h.address_count[s.responsive_count] += s.responsive_count;
        ++h.total_prefixes;
        h.total_addresses += s.responsive_count;
    }
    if (h.total_prefixes == 0) return h;
    std::size_t running_prefixes = 0;
    std::size_t running_addresses = 0;
    for (std::size_t c = 1; c <= kSlash24Size; ++c) {
        running_prefixes += h.prefix_count[c];
        running_addresses += h.address_count[c];
        h.cumulative_prefix_share[c] = static_cast<double>(running_prefixes) / static_cast<double>(h.total_prefixes);
        h.cumulative_address_share[c] =
            static_cast<double>(running_addresses) / static_cast<double>(h.total_addresses);
    }
    return h;
}

double hrp_address_share(std::span<const PrefixStat> stats) noexcept {
    std::size_t in_hrps = 0;
    std::size_t total = 0;
    for (const auto& s : stats) {
        total += s.responsive_count;
        if (s.is_hrp) in_hrps += s.responsive_count;
    }
    return total == 0 ? 0.0 : static_cast<double>(in_hrps) / static_cast<double>(total);
}

}  // namespace hrp
