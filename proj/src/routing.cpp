#include "hrp/routing.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <utility>

#include "hrp/errors.hpp"

namespace hrp {

InsertOutcome RoutingTable::insert(const RouteEntry& entry) {
    if (!entry.route.is_normalized()) throw UsageError("route " + entry.route.to_string() + " has host bits set");
    auto& level = by_length_[entry.route.length];
    const auto [it, inserted] = level.try_emplace(entry.route.network, entry.origin_asn);
    if (!inserted) return it->second == entry.origin_asn ? InsertOutcome::duplicate : InsertOutcome::conflict;
    populated_lengths_ |= std::uint64_t{1} << entry.route.length;
    if (entry.route.length > 24) split_24s_.insert(entry.route.network >> 8);
    ++size_;
    return InsertOutcome::inserted;
}

std::optional<RouteEntry> RoutingTable::lookup(Ipv4Address addr) const noexcept {
    for (int len = 32; len >= 0; --len) {
        if ((populated_lengths_ & (std::uint64_t{1} << len)) == 0) continue;
        const auto key = addr.value & Cidr::mask_for(static_cast<unsigned>(len));
        const auto& level = by_length_[static_cast<std::size_t>(len)];
        if (const auto it = level.find(key); it != level.end()) {
            return RouteEntry{Cidr{key, static_cast<std::uint8_t>(len)}, it->second};
        }
    }
    return std::nullopt;
}

std::vector<RouteEntry> RoutingTable::entries() const {
    std::vector<RouteEntry> out;
    out.reserve(size_);
    for (std::size_t len = 0; len < by_length_.size(); ++len) {
        for (const auto& [network, asn] : by_length_[len]) {
            out.push_back(RouteEntry{Cidr{network, static_cast<std::uint8_t>(len)}, asn});
        }
    }
    std::sort(out.begin(), out.end(), [](const RouteEntry& a, const RouteEntry& b) { return a.route < b.route; });
    return out;
}

LoadedRoutes load_route_table(std::istream& in, ErrorPolicy policy) {
    LoadedRoutes out;
    auto& st = out.stats;
    const bool strict = policy == ErrorPolicy::strict;
    std::string line;
    while (std::getline(in, line)) {
        const auto n = ++st.lines_read;
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') {
            ++st.comment_lines;
            continue;
        }
        const auto fields = split_csv(t);
        std::optional<Cidr> route;
        std::optional<unsigned long long> asn;
        if (fields.size() == 2) {
            route = Cidr::parse(fields[0]);
            asn = parse_unsigned(fields[1]);
        }
        if (!route || !asn || *asn > 0xFFFFFFFFull) {
            if (strict) throw IngestError(n, "malformed route line '" + std::string(t) + "'");
            ++st.invalid_lines;
            continue;
        }
        if (!route->is_normalized()) {
            if (strict) throw IngestError(n, "route " + route->to_string() + " has host bits set");
            *route = route->normalized();
            ++st.normalized;
        }
        switch (out.table.insert(RouteEntry{*route, static_cast<std::uint32_t>(*asn)})) {
            case InsertOutcome::inserted:
                ++st.entries;
                break;
            case InsertOutcome::duplicate:
                ++st.duplicates;
                break;
            case InsertOutcome::conflict:
                if (strict) throw IngestError(n, "conflicting origin for " + route->to_string());
                ++st.conflicts;
                break;
        }
    }
    if (in.bad()) throw IoError("read failure in route table");
    return out;
}

LoadedRoutes load_route_table_file(const std::string& path, ErrorPolicy policy) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open route table '" + path + "'");
    return load_route_table(in, policy);
}

std::vector<PrefixStat> enrich(std::span<const PrefixStat> stats, const RoutingTable& table, EnrichStats* counters) {
    EnrichStats local;
    std::vector<PrefixStat> out(stats.begin(), stats.end());
    for (auto& s : out) {
        const auto hit = table.lookup(s.prefix.base());
        if (!hit) {
            s.origin_asn.reset();
            s.covering_route.reset();
            ++local.unmatched;
            continue;
        }
        s.origin_asn = hit->origin_asn;
        s.covering_route = hit->route;
        ++local.matched;
        if (table.splits(s.prefix)) ++local.split_prefixes;
    }
    if (counters != nullptr) *counters = local;
    return out;
}

std::vector<AsSummary> as_summary(std::span<const PrefixStat> enriched) {
    struct Acc {
        std::set<Slash24> visible;
        std::set<Slash24> hrps;
        std::set<std::pair<Protocol, std::uint16_t>> ports_visible;
        std::set<std::pair<Protocol, std::uint16_t>> ports_hrp;
    };
    std::map<std::uint32_t, Acc> by_asn;
    for (const auto& s : enriched) {
        if (!s.origin_asn || s.responsive_count == 0) continue;
        auto& acc = by_asn[*s.origin_asn];
        const auto service = std::make_pair(s.meta.protocol, s.meta.port);
        acc.visible.insert(s.prefix);
        acc.ports_visible.insert(service);
        if (s.is_hrp) {
            acc.hrps.insert(s.prefix);
            acc.ports_hrp.insert(service);
        }
    }
    std::vector<AsSummary> rows;
    rows.reserve(by_asn.size());
    for (const auto& [asn, acc] : by_asn) {
        AsSummary r;
        r.asn = asn;
        r.visible_24s = acc.visible.size();
        r.hrp_count = acc.hrps.size();
        r.hrp_share = static_cast<double>(r.hrp_count) / static_cast<double>(r.visible_24s);
        r.ports_visible = acc.ports_visible.size();
        r.ports_with_hrps = acc.ports_hrp.size();
        rows.push_back(r);
    }
    std::stable_sort(rows.begin(), rows.end(), [](const AsSummary& a, const AsSummary& b) {
        if (a.hrp_count != b.hrp_count) return a.hrp_count > b.hrp_count;
        return a.visible_24s > b.visible_24s;
    });
    return rows;
}

Json as_summary_to_json(std::span<const AsSummary> rows) {
    Json arr = Json::array();
    for (const auto& r : rows) {
        arr.push_back({{"asn", r.asn},
                       {"visible_24s", r.visible_24s},
                       {"hrp_count", r.hrp_count},
                       {"hrp_share", r.hrp_share},
                       {"ports_visible", r.ports_visible},
                       {"ports_with_hrps", r.ports_with_hrps}});
    }
    return arr;
}

}  // namespace hrp
