#include "hrp/applayer.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "hrp/errors.hpp"

namespace hrp {

std::string_view to_string(AppStatus s) noexcept {
    switch (s) {
        case AppStatus::success:
            return "success";
        case AppStatus::app_error:
            return "app_error";
        case AppStatus::unreachable:
            return "unreachable";
    }
    return "unreachable";
}

std::optional<AppStatus> parse_app_status(std::string_view text) noexcept {
    if (text == "success") return AppStatus::success;
    if (text == "app_error") return AppStatus::app_error;
    if (text == "unreachable") return AppStatus::unreachable;
    return std::nullopt;
}

AppResult AppResult::make(Ipv4Address target, ScanMeta meta, AppStatus status, std::optional<std::string> identifier) {
    if (identifier && identifier->empty()) identifier.reset();
    if (identifier && status != AppStatus::success) {
        throw UsageError("identifier present on non-success result for " + target.to_string());
    }
    return AppResult{target, std::move(meta), status, std::move(identifier)};
}

std::vector<AppResult> read_app_results(std::istream& in) {
    std::vector<AppResult> out;
    std::string line;
    std::size_t n = 0;
    if (!next_record_line(in, line, n)) return out;
    if (trim(line) != kAppResultsCsvHeader) {
        throw IngestError(n, "expected results header '" + std::string(kAppResultsCsvHeader) + "'");
    }
    while (next_record_line(in, line, n)) {
        const auto f = split_csv(line);
        if (f.size() != 5) throw IngestError(n, "expected 5 result columns, got " + std::to_string(f.size()));
        const auto ip = Ipv4Address::parse(f[0]);
        const auto port = parse_unsigned(f[1]);
        const auto proto = parse_protocol(f[2]);
        const auto status = parse_app_status(f[3]);
        if (!ip) throw IngestError(n, "bad ip '" + std::string(f[0]) + "'");
        if (!port || *port > 65535) throw IngestError(n, "bad port '" + std::string(f[1]) + "'");
        if (!proto) throw IngestError(n, "bad proto '" + std::string(f[2]) + "'");
        if (!status) throw IngestError(n, "bad status '" + std::string(f[3]) + "'");
        std::optional<std::string> id;
        if (!f[4].empty()) id = std::string(f[4]);
        if (id && *status != AppStatus::success) throw IngestError(n, "identifier on non-success result");
        out.push_back(AppResult::make(*ip, ScanMeta::make(*proto, static_cast<int>(*port), "results"), *status,
                                      std::move(id)));
    }
    return out;
}

std::vector<AppResult> read_app_results_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open results file '" + path + "'");
    return read_app_results(in);
}

void write_app_results(std::ostream& out, std::span<const AppResult> results) {
    out << kAppResultsCsvHeader << '\n';
    for (const auto& r : results) {
        out << r.target.to_string() << ',' << r.meta.port << ',' << to_string(r.meta.protocol) << ','
            << to_string(r.status) << ',' << r.identifier.value_or("") << '\n';
    }
}

namespace {

struct PrefixAcc {
    std::size_t excluded = 0;
    std::size_t successes = 0;
    std::size_t successes_without_id = 0;
    std::map<std::string, std::size_t> identifiers;
};

struct Join {
    std::map<Slash24, PrefixAcc> hrp_prefixes;
    std::size_t anomalies = 0;
    std::size_t duplicates = 0;
    std::size_t excluded = 0;
    std::size_t non_hrp_results = 0;
    std::size_t non_hrp_successes = 0;
    std::size_t hrp_results = 0;
};

Join join_results(std::span<const AppResult> results, std::span<const Slash24> hrps, const PrefixTable& occupancy,
                  const AppLayerOptions& options) {
    std::vector<Slash24> hrp_sorted(hrps.begin(), hrps.end());
    std::sort(hrp_sorted.begin(), hrp_sorted.end());
    Join j;
    for (const auto p : hrp_sorted) {
        if (occupancy.find(p) != nullptr) j.hrp_prefixes.try_emplace(p);
    }
    std::unordered_set<std::uint32_t> seen;
    for (const auto& r : results) {
        require_same_service(occupancy.meta(), r.meta, "application-layer results vs port scan");
        if (!occupancy.contains(r.target)) {
            ++j.anomalies;
            continue;
        }
        if (!seen.insert(r.target.value).second) {
            ++j.duplicates;
            continue;
        }
        if (options.exclude_app_errors && r.status == AppStatus::app_error) {
            ++j.excluded;
            if (auto it = j.hrp_prefixes.find(slash24_of(r.target)); it != j.hrp_prefixes.end()) {
                ++it->second.excluded;
            }
            continue;
        }
        const auto it = j.hrp_prefixes.find(slash24_of(r.target));
        if (it == j.hrp_prefixes.end()) {
            ++j.non_hrp_results;
            if (r.succeeded()) ++j.non_hrp_successes;
            continue;
        }
        ++j.hrp_results;
        if (!r.succeeded()) continue;
        auto& acc = it->second;
        ++acc.successes;
        if (r.identifier) {
            ++acc.identifiers[*r.identifier];
        } else {
            ++acc.successes_without_id;
        }
    }
    return j;
}

HrpAppReport make_report(Slash24 prefix, const PrefixAcc& acc, const PrefixTable& occupancy) {
    HrpAppReport rep;
    rep.prefix = prefix;
    const auto responsive = static_cast<std::size_t>(occupancy.count(prefix));
    rep.denominator = responsive - std::min(responsive, acc.excluded);
    rep.success_count = acc.successes;
    rep.success_fraction =
        rep.denominator == 0 ? 0.0 : static_cast<double>(rep.success_count) / static_cast<double>(rep.denominator);
    rep.any_success = rep.success_count > 0;
    rep.gt90_success = rep.denominator > 0 && exceeds_ninety_percent(rep.success_count, rep.denominator);
    rep.distinct_identifiers = acc.identifiers.size();
    rep.same_identifier = rep.any_success && acc.successes_without_id == 0 && acc.identifiers.size() == 1;
    std::size_t dominant = 0;
    for (const auto& [id, n] : acc.identifiers) dominant = std::max(dominant, n);
    rep.dominant_identifier_share =
        rep.success_count == 0 ? 0.0 : static_cast<double>(dominant) / static_cast<double>(rep.success_count);
    return rep;
}

}  // namespace

HrpAppReports hrp_app_report(std::span<const AppResult> results, std::span<const Slash24> hrps,
                             const PrefixTable& occupancy, const AppLayerOptions& options) {
    const auto j = join_results(results, hrps, occupancy, options);
    HrpAppReports out;
    out.anomalies = j.anomalies;
    out.duplicates = j.duplicates;
    out.non_hrp_results = j.non_hrp_results;
    out.hrp_results = j.hrp_results;
    out.excluded_app_errors = j.excluded;
    out.reports.reserve(j.hrp_prefixes.size());
    for (const auto& [prefix, acc] : j.hrp_prefixes) out.reports.push_back(make_report(prefix, acc, occupancy));
    return out;
}

HrpAppSummary summarize(std::span<const HrpAppReport> reports) {
    HrpAppSummary s;
    s.hrps = reports.size();
    for (const auto& r : reports) {
        if (r.any_success) ++s.any_success;
        if (r.gt90_success) ++s.gt90_success;
        if (r.same_identifier) ++s.same_identifier;
        if (r.same_identifier && r.gt90_success) ++s.same_identifier_gt90;
    }
    if (s.gt90_success > 0) {
        s.same_identifier_share_of_gt90 =
            static_cast<double>(s.same_identifier_gt90) / static_cast<double>(s.gt90_success);
    }
    return s;
}

AddressComparison address_comparison(std::span<const AppResult> results, std::span<const Slash24> hrps,
                                     const PrefixTable& occupancy, const AppLayerOptions& options) {
    const auto j = join_results(results, hrps, occupancy, options);
    AddressComparison c;
    c.anomalies = j.anomalies;
    c.non_hrp_results = j.non_hrp_results;
    c.non_hrp_successes = j.non_hrp_successes;
    c.hrp_results = j.hrp_results;
    for (const auto& [prefix, acc] : j.hrp_prefixes) {
        const auto rep = make_report(prefix, acc, occupancy);
        c.hrp_successes += rep.success_count;
        if (rep.gt90_success) {
            c.gt90_successes += rep.success_count;
            if (rep.same_identifier) c.gt90_same_identifier_successes += rep.success_count;
        }
    }
    const auto rate = [](std::size_t num, std::size_t den) -> std::optional<double> {
        if (den == 0) return std::nullopt;
        return static_cast<double>(num) / static_cast<double>(den);
    };
    c.non_hrp_success_rate = rate(c.non_hrp_successes, c.non_hrp_results);
    c.hrp_success_rate = rate(c.hrp_successes, c.hrp_results);
    c.gt90_subset_share = rate(c.gt90_successes, c.hrp_successes);
    c.gt90_same_identifier_share = rate(c.gt90_same_identifier_successes, c.gt90_successes);
    return c;
}

std::array<double, kSlash24Size + 1> success_cdf(std::span<const HrpAppReport> reports) {
    std::array<std::size_t, kSlash24Size + 1> counts{};
    for (const auto& r : reports) ++counts[std::min(r.success_count, kSlash24Size)];
    std::array<double, kSlash24Size + 1> cdf{};
    if (reports.empty()) return cdf;
    std::size_t running = 0;
    for (std::size_t c = 0; c <= kSlash24Size; ++c) {
        running += counts[c];
        cdf[c] = static_cast<double>(running) / static_cast<double>(reports.size());
    }
    return cdf;
}

Json app_reports_to_json(const HrpAppReports& r, bool include_prefixes) {
    Json j{{"hrps_reported", r.reports.size()},
           {"anomalies", r.anomalies},
           {"duplicates", r.duplicates},
           {"non_hrp_results", r.non_hrp_results},
           {"hrp_results", r.hrp_results},
           {"excluded_app_errors", r.excluded_app_errors}};
    if (include_prefixes) {
        Json rows = Json::array();
        for (const auto& p : r.reports) {
            rows.push_back({{"prefix", p.prefix.to_string()},
                            {"denominator", p.denominator},
                            {"success_count", p.success_count},
                            {"success_fraction", p.success_fraction},
                            {"any_success", p.any_success},
                            {"gt90_success", p.gt90_success},
                            {"same_identifier", p.same_identifier},
                            {"distinct_identifiers", p.distinct_identifiers},
                            {"dominant_identifier_share", p.dominant_identifier_share}});
        }
        j["prefixes"] = rows;
    }
    return j;
}

Json app_summary_to_json(const HrpAppSummary& s) {
    return Json{{"hrps", s.hrps},
                {"any_success", s.any_success},
                {"gt90_success", s.gt90_success},
                {"same_identifier", s.same_identifier},
                {"same_identifier_gt90", s.same_identifier_gt90},
                {"same_identifier_share_of_gt90", optional_number(s.same_identifier_share_of_gt90)}};
}

Json address_comparison_to_json(const AddressComparison& c) {
    return Json{{"non_hrp_results", c.non_hrp_results},
                {"non_hrp_successes", c.non_hrp_successes},
                {"hrp_results", c.hrp_results},
                {"hrp_successes", c.hrp_successes},
                {"gt90_successes", c.gt90_successes},
                {"gt90_same_identifier_successes", c.gt90_same_identifier_successes},
                {"anomalies", c.anomalies},
                {"non_hrp_success_rate", optional_number(c.non_hrp_success_rate)},
                {"hrp_success_rate", optional_number(c.hrp_success_rate)},
                {"gt90_subset_share", optional_number(c.gt90_subset_share)},
                {"gt90_same_identifier_share", optional_number(c.gt90_same_identifier_share)}};
}

void write_success_cdf_csv(std::ostream& out, const std::array<double, kSlash24Size + 1>& cdf) {
    out << "success_count,cdf\n";
    for (std::size_t c = 0; c <= kSlash24Size; ++c) out << c << ',' << format_fixed(cdf[c]) << '\n';
}

}  // namespace hrp
