#include "hrp/analytics.hpp"

#include <algorithm>
#include <iterator>
#include <map>
#include <set>
#include <utility>

#include "hrp/errors.hpp"

namespace hrp {

ClassifiedScan make_classified_scan(const PrefixTable& table, const HrpThreshold& threshold) {
    return ClassifiedScan{table.meta(), classify(table, threshold)};
}

std::size_t PortMatrix::distinct_hrps() const noexcept {
    std::size_t n = 0;
    for (std::size_t k = 1; k < hrp_histogram.size(); ++k) n += hrp_histogram[k];
    return n;
}

double PortMatrix::hrp_share_on_exactly(std::size_t k) const noexcept {
    const auto total = distinct_hrps();
    if (total == 0 || k == 0 || k >= hrp_histogram.size()) return 0.0;
    return static_cast<double>(hrp_histogram[k]) / static_cast<double>(total);
}

PortMatrix port_profile(std::span<const ClassifiedScan> per_port) {
    if (per_port.empty()) throw UsageError("port_profile needs at least one service");
    std::set<std::pair<Protocol, std::uint16_t>> services;
    std::map<Slash24, PortProfile> profiles;
    for (const auto& scan : per_port) {
        if (!services.emplace(scan.meta.protocol, scan.meta.port).second) {
            throw UsageError("service " + scan.meta.service() + " supplied more than once");
        }
        for (const auto& s : scan.stats) {
            if (!s.meta.same_service(scan.meta)) require_same_service(scan.meta, s.meta, "port_profile");
            if (s.responsive_count == 0) continue;
            auto& p = profiles[s.prefix];
            p.prefix = s.prefix;
            ++p.ports_responsive;
            if (s.is_hrp) ++p.ports_hrp;
        }
    }
    PortMatrix m;
    m.port_count = per_port.size();
    m.responsive_histogram.assign(m.port_count + 1, 0);
    m.hrp_histogram.assign(m.port_count + 1, 0);
    m.profiles.reserve(profiles.size());
    for (const auto& [prefix, p] : profiles) {
        ++m.responsive_histogram[p.ports_responsive];
        ++m.hrp_histogram[p.ports_hrp];
        m.profiles.push_back(p);
    }
    return m;
}

Json port_matrix_to_json(const PortMatrix& m) {
    Json rows = Json::array();
    for (std::size_t k = 0; k <= m.port_count; ++k) {
        rows.push_back({{"ports", k},
                        {"prefixes_responsive", m.responsive_histogram[k]},
                        {"prefixes_hrp", m.hrp_histogram[k]},
                        {"hrp_share", m.hrp_share_on_exactly(k)}});
    }
    return Json{{"port_count", m.port_count},
                {"prefixes", m.profiles.size()},
                {"distinct_hrps", m.distinct_hrps()},
                {"histogram", rows}};
}

namespace {

void require_single_service(std::span<const ClassifiedScan> scans, std::string_view context) {
    for (const auto& scan : scans) require_same_service(scans.front().meta, scan.meta, context);
}

}  // namespace

std::vector<StabilityPoint> stability_series(std::span<const ClassifiedScan> scans) {
    if (scans.empty()) return {};
    require_single_service(scans, "stability_series");
    std::optional<Timestamp> last;
    std::vector<StabilityPoint> series;
    series.reserve(scans.size());
    for (const auto& scan : scans) {
        if (scan.meta.timestamp) {
            if (last && *scan.meta.timestamp < *last) {
                throw UsageError("scan '" + scan.meta.scan_id + "' is out of timestamp order");
            }
            last = scan.meta.timestamp;
        }
        std::size_t total = 0, in90 = 0, in95 = 0;
        StabilityPoint p;
        p.scan_id = scan.meta.scan_id;
        p.timestamp = scan.meta.timestamp;
        for (const auto& s : scan.stats) {
            total += s.responsive_count;
            if (kDefaultThreshold.classifies(s.responsive_count)) {
                in90 += s.responsive_count;
                ++p.hrp_count;
            }
            if (kStrictThreshold.classifies(s.responsive_count)) {
                in95 += s.responsive_count;
                ++p.hrp_count_95;
            }
        }
        if (total > 0) {
            p.hrp_address_share_90 = static_cast<double>(in90) / static_cast<double>(total);
            p.hrp_address_share_95 = static_cast<double>(in95) / static_cast<double>(total);
        }
        series.push_back(std::move(p));
    }
    return series;
}

PersistenceSummary persistence(std::span<const ClassifiedScan> scans, std::size_t missing_n) {
    if (scans.size() < 2) throw UsageError("persistence needs at least two scans");
    require_single_service(scans, "persistence");
    std::map<Slash24, PrefixPersistence> all;
    for (const auto& scan : scans) {
        // A prefix listed twice within one scan is still one observation.
        std::set<Slash24> visible, classified;
        for (const auto& s : scan.stats) {
            if (s.responsive_count > 0) visible.insert(s.prefix);
            if (s.is_hrp) classified.insert(s.prefix);
        }
        for (const auto p : visible) ++all[p].scans_visible;
        for (const auto p : classified) ++all[p].scans_classified;
    }
    PersistenceSummary out;
    out.total_scans = scans.size();
    out.missing_n = missing_n;
    out.half_period = (out.total_scans + 1) / 2;
    for (auto& [prefix, rec] : all) {
        if (rec.scans_classified == 0) continue;
        rec.prefix = prefix;
        ++out.distinct_hrps;
        if (rec.scans_classified >= out.half_period) {
            ++out.half_period_count;
            if (rec.scans_visible == out.total_scans) ++out.half_period_always_visible_count;
        }
        if (rec.scans_classified == out.total_scans) ++out.always_classified_count;
        if (out.total_scans - rec.scans_classified <= missing_n) ++out.missing_at_most_n_count;
        out.per_prefix.push_back(rec);
    }
    if (out.distinct_hrps > 0) {
        out.missing_at_most_n_share =
            static_cast<double>(out.missing_at_most_n_count) / static_cast<double>(out.distinct_hrps);
    }
    return out;
}

Json stability_to_json(std::span<const StabilityPoint> series) {
    Json arr = Json::array();
    for (const auto& p : series) {
        arr.push_back({{"scan_id", p.scan_id},
                       {"timestamp", p.timestamp ? Json(format_timestamp(*p.timestamp)) : Json(nullptr)},
                       {"hrp_address_share_90", p.hrp_address_share_90},
                       {"hrp_address_share_95", p.hrp_address_share_95},
                       {"hrp_count", p.hrp_count},
                       {"hrp_count_95", p.hrp_count_95}});
    }
    return arr;
}

void write_stability_csv(std::ostream& out, std::span<const StabilityPoint> series) {
    out << "scan_id,timestamp,hrp_address_share_90,hrp_address_share_95,hrp_count,hrp_count_95\n";
    for (const auto& p : series) {
        out << p.scan_id << ',' << (p.timestamp ? format_timestamp(*p.timestamp) : std::string{}) << ','
            << format_fixed(p.hrp_address_share_90) << ',' << format_fixed(p.hrp_address_share_95) << ','
            << p.hrp_count << ',' << p.hrp_count_95 << '\n';
    }
}

Json persistence_to_json(const PersistenceSummary& p, bool include_per_prefix) {
    Json j{{"total_scans", p.total_scans},
           {"half_period", p.half_period},
           {"distinct_hrps", p.distinct_hrps},
           {"half_period_count", p.half_period_count},
           {"half_period_always_visible_count", p.half_period_always_visible_count},
           {"always_classified_count", p.always_classified_count},
           {"missing_n", p.missing_n},
           {"missing_at_most_n_count", p.missing_at_most_n_count},
           {"missing_at_most_n_share", p.missing_at_most_n_share}};
    if (include_per_prefix) {
        Json rows = Json::array();
        for (const auto& r : p.per_prefix) {
            rows.push_back({{"prefix", r.prefix.to_string()},
                            {"scans_classified", r.scans_classified},
                            {"scans_visible", r.scans_visible}});
        }
        j["per_prefix"] = rows;
    }
    return j;
}

VantageDiff vantage_diff(std::vector<Slash24> a, std::vector<Slash24> b) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    VantageDiff d;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(d.only_a));
    std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(d.only_b));
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(d.both));
    const auto differing = d.only_a.size() + d.only_b.size();
    const auto all = differing + d.both.size();
    d.divergence = all == 0 ? 0.0 : static_cast<double>(differing) / static_cast<double>(all);
    return d;
}

Json vantage_to_json(const VantageDiff& d, bool include_sets) {
    Json j{{"only_a_count", d.only_a.size()},
           {"only_b_count", d.only_b.size()},
           {"both_count", d.both.size()},
           {"divergence", d.divergence}};
    if (include_sets) {
        const auto names = [](const std::vector<Slash24>& v) {
            Json arr = Json::array();
            for (const auto p : v) arr.push_back(p.to_string());
            return arr;
        };
        j["only_a"] = names(d.only_a);
        j["only_b"] = names(d.only_b);
        j["both"] = names(d.both);
    }
    return j;
}

}  // namespace hrp
