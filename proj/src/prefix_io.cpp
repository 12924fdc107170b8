#include "hrp/prefix_io.hpp"

#include <fstream>

#include "hrp/errors.hpp"

namespace hrp {

namespace {

std::string asn_field(const PrefixStat& s) {
    return s.origin_asn ? std::to_string(*s.origin_asn) : std::string{};
}

std::string route_field(const PrefixStat& s) {
    return s.covering_route ? s.covering_route->to_string() : std::string{};
}

}  // namespace

void write_stats_csv(std::ostream& out, std::span<const PrefixStat> stats) {
    out << kStatsCsvHeader << '\n';
    for (const auto& s : stats) {
        out << s.prefix.to_string() << ',' << s.meta.port << ',' << to_string(s.meta.protocol) << ','
            << s.responsive_count << ',' << (s.is_hrp ? "true" : "false") << ',' << format_fixed(s.threshold.fraction())
            << ',' << asn_field(s) << ',' << route_field(s) << '\n';
    }
}

Json stat_to_json(const PrefixStat& s) {
    Json j;
    j["prefix"] = s.prefix.to_string();
    j["port"] = s.meta.port;
    j["proto"] = to_string(s.meta.protocol);
    j["count"] = s.responsive_count;
    j["is_hrp"] = s.is_hrp;
    j["threshold_fraction"] = s.threshold.fraction();
    j["origin_asn"] = s.origin_asn ? Json(*s.origin_asn) : Json(nullptr);
    j["covering_prefix"] = s.covering_route ? Json(s.covering_route->to_string()) : Json(nullptr);
    return j;
}

void write_stats_jsonl(std::ostream& out, std::span<const PrefixStat> stats) {
    for (const auto& s : stats) out << dump_line(stat_to_json(s));
}

std::vector<PrefixStat> read_stats_csv(std::istream& in, const std::string& scan_id) {
    std::vector<PrefixStat> stats;
    std::string line;
    std::size_t line_number = 0;
    if (!next_record_line(in, line, line_number)) return stats;
    if (trim(line) != kStatsCsvHeader) {
        throw IngestError(line_number, "expected stats header '" + std::string(kStatsCsvHeader) + "'");
    }
    while (next_record_line(in, line, line_number)) {
        const auto f = split_csv(line);
        if (f.size() != 8) throw IngestError(line_number, "expected 8 stats columns, got " + std::to_string(f.size()));
        PrefixStat s;
        const auto prefix = Slash24::parse(f[0]);
        const auto port = parse_unsigned(f[1]);
        const auto proto = parse_protocol(f[2]);
        const auto count = parse_unsigned(f[3]);
        if (!prefix) throw IngestError(line_number, "bad prefix '" + std::string(f[0]) + "'");
        if (!port || *port > 65535) throw IngestError(line_number, "bad port '" + std::string(f[1]) + "'");
        if (!proto) throw IngestError(line_number, "bad proto '" + std::string(f[2]) + "'");
        if (!count || *count > kSlash24Size) throw IngestError(line_number, "bad count '" + std::string(f[3]) + "'");
        if (f[4] != "true" && f[4] != "false") throw IngestError(line_number, "bad is_hrp '" + std::string(f[4]) + "'");
        double fraction = 0.0;
        try {
            std::size_t used = 0;
            fraction = std::stod(std::string(f[5]), &used);
            if (used != f[5].size()) throw std::invalid_argument("trailing");
            s.threshold = HrpThreshold::from_fraction(fraction);
        } catch (const std::exception&) {
            throw IngestError(line_number, "bad threshold_fraction '" + std::string(f[5]) + "'");
        }
        s.prefix = *prefix;
        s.meta = ScanMeta::make(*proto, static_cast<int>(*port), scan_id);
        s.responsive_count = static_cast<unsigned>(*count);
        s.is_hrp = f[4] == "true";
        if (s.is_hrp != s.threshold.classifies(s.responsive_count)) {
            throw IngestError(line_number, "is_hrp inconsistent with count and threshold");
        }
        if (!f[6].empty()) {
            const auto asn = parse_unsigned(f[6]);
            if (!asn || *asn > 0xFFFFFFFFull) throw IngestError(line_number, "bad origin_asn '" + std::string(f[6]) + "'");
            s.origin_asn = static_cast<std::uint32_t>(*asn);
        }
        if (!f[7].empty()) {
            const auto route = Cidr::parse(f[7]);
            if (!route || !route->is_normalized()) {
                throw IngestError(line_number, "bad covering_prefix '" + std::string(f[7]) + "'");
            }
            s.covering_route = *route;
        }
        if (!stats.empty() && !stats.front().meta.same_service(s.meta)) {
            throw UsageError("stats file mixes services (" + stats.front().meta.service() + " vs " + s.meta.service() +
                             ")");
        }
        stats.push_back(std::move(s));
    }
    return stats;
}

std::vector<PrefixStat> read_stats_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open stats file '" + path + "'");
    return read_stats_csv(in, path);
}

void write_histogram_csv(std::ostream& out, const ResponsivenessHistogram& h) {
    out << "count,prefix_count,address_count,cumulative_prefix_share,cumulative_address_share\n";
    for (std::size_t c = 1; c <= kSlash24Size; ++c) {
        out << c << ',' << h.prefix_count[c] << ',' << h.address_count[c] << ','
            << format_fixed(h.cumulative_prefix_share[c]) << ',' << format_fixed(h.cumulative_address_share[c])
            << '\n';
    }
}

Json histogram_to_json(const ResponsivenessHistogram& h) {
    Json buckets = Json::array();
    for (std::size_t c = 1; c <= kSlash24Size; ++c) {
        if (h.prefix_count[c] == 0) continue;
        buckets.push_back({{"count", c},
                           {"prefix_count", h.prefix_count[c]},
                           {"address_count", h.address_count[c]},
                           {"cumulative_prefix_share", h.cumulative_prefix_share[c]},
                           {"cumulative_address_share", h.cumulative_address_share[c]}});
    }
    return Json{{"total_prefixes", h.total_prefixes}, {"total_addresses", h.total_addresses}, {"buckets", buckets}};
}

}  // namespace hrp
