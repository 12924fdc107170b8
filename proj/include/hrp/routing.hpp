#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hrp/ipv4.hpp"
#include "hrp/prefix.hpp"
#include "hrp/report.hpp"
#include "hrp/scan_ingest.hpp"

namespace hrp {

struct RouteEntry {
    Cidr route;
    std::uint32_t origin_asn = 0;

    friend bool operator==(const RouteEntry&, const RouteEntry&) = default;
};

enum class InsertOutcome { inserted, duplicate, conflict };

/// Longest-prefix-match table keyed by (network, length); immutable once
/// loaded, so concurrent lookups need no synchronization.
class RoutingTable {
public:
    /// Entries must be normalized. A second entry for the same block keeps the
    /// first origin and reports duplicate (same ASN) or conflict (other ASN).
    InsertOutcome insert(const RouteEntry& entry);

    std::optional<RouteEntry> lookup(Ipv4Address addr) const noexcept;

    /// True when some entry longer than /24 lies inside `prefix`.
    bool splits(Slash24 prefix) const noexcept { return split_24s_.contains(prefix.network); }

    std::size_t size() const noexcept { return size_; }
    bool empty() const noexcept { return size_ == 0; }

    /// All entries, ordered by (network, length).
    std::vector<RouteEntry> entries() const;

private:
    std::array<std::unordered_map<std::uint32_t, std::uint32_t>, 33> by_length_;
    std::uint64_t populated_lengths_ = 0;  // bit L set iff by_length_[L] nonempty
    std::unordered_set<std::uint32_t> split_24s_;
    std::size_t size_ = 0;
};

struct RouteLoadStats {
    std::size_t lines_read = 0;
    std::size_t entries = 0;
    std::size_t comment_lines = 0;
    std::size_t invalid_lines = 0;
    std::size_t normalized = 0;   // host bits cleared (lenient)
    std::size_t duplicates = 0;   // same block, same origin
    std::size_t conflicts = 0;    // same block, different origin; first kept (lenient)
};

struct LoadedRoutes {
    RoutingTable table;
    RouteLoadStats stats;
};

/// Reads "prefix/length,asn" lines ('#' comments allowed). Strict mode raises
/// IngestError on malformed lines, set host bits, and origin conflicts.
LoadedRoutes load_route_table(std::istream& in, ErrorPolicy policy = ErrorPolicy::lenient);
LoadedRoutes load_route_table_file(const std::string& path, ErrorPolicy policy = ErrorPolicy::lenient);

struct EnrichStats {
    std::size_t matched = 0;
    std::size_t unmatched = 0;
    std::size_t split_prefixes = 0;  // matched on the network address although more-specific routes split the /24
};

/// Attaches origin AS and covering route by looking up each /24's network address.
std::vector<PrefixStat> enrich(std::span<const PrefixStat> stats, const RoutingTable& table,
                               EnrichStats* counters = nullptr);

struct AsSummary {
    std::uint32_t asn = 0;
    std::size_t visible_24s = 0;
    std::size_t hrp_count = 0;
    double hrp_share = 0.0;
    std::size_t ports_visible = 0;
    std::size_t ports_with_hrps = 0;

    friend bool operator==(const AsSummary&, const AsSummary&) = default;
};

/// Per-origin summary across any number of services. Distinct /24s are
/// counted once; a /24 is an HRP if it is one on any service. Sorted by
/// hrp_count descending, then visible_24s descending, then ASN.
std::vector<AsSummary> as_summary(std::span<const PrefixStat> enriched);

Json as_summary_to_json(std::span<const AsSummary> rows);

}  // namespace hrp
