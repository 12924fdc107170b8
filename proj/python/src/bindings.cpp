#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "hrp/analytics.hpp"
#include "hrp/applayer.hpp"
#include "hrp/errors.hpp"
#include "hrp/planner.hpp"
#include "hrp/prefix.hpp"
#include "hrp/prefix_io.hpp"
#include "hrp/routing.hpp"
#include "hrp/scan_ingest.hpp"

namespace py = pybind11;
using namespace hrp;

namespace {

Ipv4Address address(const std::string& text) {
    const auto a = Ipv4Address::parse(text);
    if (!a) throw UsageError("not an IPv4 address: '" + text + "'");
    return *a;
}

Slash24 slash24(const std::string& text) {
    const auto p = Slash24::parse(text);
    if (!p) throw UsageError("not a /24 prefix: '" + text + "'");
    return *p;
}

std::vector<Slash24> slash24s(const std::vector<std::string>& texts) {
    std::vector<Slash24> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(slash24(t));
    return out;
}

std::vector<std::string> strings(const std::vector<Slash24>& prefixes) {
    std::vector<std::string> out;
    out.reserve(prefixes.size());
    for (const auto& p : prefixes) out.push_back(p.to_string());
    return out;
}

ScanMeta make_meta(const std::string& proto, int port, const std::string& scan_id) {
    const auto p = parse_protocol(proto);
    if (!p) throw UsageError("unknown protocol '" + proto + "'");
    return ScanMeta::make(*p, port, scan_id);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Highly responsive prefix detection and HRP-aware scan planning.";

    auto error = py::register_exception<Error>(m, "Error");
    py::register_exception<UsageError>(m, "UsageError", error);
    py::register_exception<IngestError>(m, "IngestError", error);
    py::register_exception<IoError>(m, "IoError", error);

    py::class_<ScanMeta>(m, "ScanMeta")
        .def(py::init(&make_meta), py::arg("proto"), py::arg("port"), py::arg("scan_id") = "scan")
        .def_property_readonly("proto", [](const ScanMeta& s) { return std::string(to_string(s.protocol)); })
        .def_readonly("port", &ScanMeta::port)
        .def_readonly("scan_id", &ScanMeta::scan_id)
        .def_property_readonly("service", &ScanMeta::service)
        .def("__repr__", [](const ScanMeta& s) { return "ScanMeta(" + s.service() + ", '" + s.scan_id + "')"; });

    py::class_<HrpThreshold>(m, "HrpThreshold")
        .def(py::init(&HrpThreshold::from_fraction), py::arg("fraction"))
        .def_property_readonly("fraction", &HrpThreshold::fraction)
        .def_property_readonly("min_count", &HrpThreshold::min_count)
        .def("classifies", &HrpThreshold::classifies, py::arg("responsive_count"));
    m.attr("DEFAULT_THRESHOLD") = kDefaultThreshold;
    m.attr("STRICT_THRESHOLD") = kStrictThreshold;

    py::class_<PrefixTable>(m, "PrefixTable")
        .def(py::init<ScanMeta>(), py::arg("meta"))
        .def_property_readonly("meta", &PrefixTable::meta)
        .def("add", [](PrefixTable& t, const std::string& a) { t.add(address(a)); })
        .def("merge_from", &PrefixTable::merge_from)
        .def("count", [](const PrefixTable& t, const std::string& p) { return t.count(slash24(p)); })
        .def("__contains__", [](const PrefixTable& t, const std::string& a) { return t.contains(address(a)); })
        .def("__len__", &PrefixTable::size)
        .def_property_readonly("total_addresses", &PrefixTable::total_addresses)
        .def("prefixes", [](const PrefixTable& t) {
            std::vector<std::string> out;
            for (const auto& [p, bits] : t) out.push_back(p.to_string());
            return out;
        });

    m.def(
        "aggregate",
        [](const std::vector<std::string>& addresses, const ScanMeta& meta) {
            std::vector<Ipv4Address> parsed;
            parsed.reserve(addresses.size());
            for (const auto& a : addresses) parsed.push_back(address(a));
            return aggregate(parsed, meta);
        },
        py::arg("addresses"), py::arg("meta"));
    m.def(
        "aggregate_file",
        [](const std::string& path, const ScanMeta& meta, const std::string& format, const std::string& policy) {
            const auto f = parse_scan_format(format);
            const auto p = parse_error_policy(policy);
            if (!f || !p) throw UsageError("unknown format or policy");
            ScanFile file(path, *f, *p);
            return aggregate(file.reader(), meta);
        },
        py::arg("path"), py::arg("meta"), py::arg("format") = "plain", py::arg("policy") = "lenient");

    py::class_<PrefixStat>(m, "PrefixStat")
        .def_property_readonly("prefix", [](const PrefixStat& s) { return s.prefix.to_string(); })
        .def_readonly("meta", &PrefixStat::meta)
        .def_readonly("responsive_count", &PrefixStat::responsive_count)
        .def_readonly("is_hrp", &PrefixStat::is_hrp)
        .def_readonly("origin_asn", &PrefixStat::origin_asn)
        .def_property_readonly("covering_prefix", [](const PrefixStat& s) -> std::optional<std::string> {
            if (!s.covering_route) return std::nullopt;
            return s.covering_route->to_string();
        });

    m.def("classify", &classify, py::arg("table"), py::arg("threshold") = kDefaultThreshold);
    m.def(
        "hrp_set", [](const std::vector<PrefixStat>& stats) { return strings(hrp_set(stats)); }, py::arg("stats"));
    m.def(
        "hrp_address_share", [](const std::vector<PrefixStat>& stats) { return hrp_address_share(stats); },
        py::arg("stats"));
    m.def(
        "histogram",
        [](const std::vector<PrefixStat>& stats) {
            const auto h = responsiveness_histogram(stats);
            py::dict d;
            d["prefix_count"] = std::vector<std::size_t>(h.prefix_count.begin(), h.prefix_count.end());
            d["address_count"] = std::vector<std::size_t>(h.address_count.begin(), h.address_count.end());
            d["total_prefixes"] = h.total_prefixes;
            d["total_addresses"] = h.total_addresses;
            return d;
        },
        py::arg("stats"));
    m.def(
        "stats_csv",
        [](const std::vector<PrefixStat>& stats) {
            std::ostringstream out;
            write_stats_csv(out, stats);
            return out.str();
        },
        py::arg("stats"));

    py::class_<RoutingTable>(m, "RoutingTable")
        .def_static(
            "from_text",
            [](const std::string& text, const std::string& policy) {
                const auto p = parse_error_policy(policy);
                if (!p) throw UsageError("unknown policy '" + policy + "'");
                std::istringstream in(text);
                return load_route_table(in, *p).table;
            },
            py::arg("text"), py::arg("policy") = "lenient")
        .def_static(
            "from_file",
            [](const std::string& path, const std::string& policy) {
                const auto p = parse_error_policy(policy);
                if (!p) throw UsageError("unknown policy '" + policy + "'");
                return load_route_table_file(path, *p).table;
            },
            py::arg("path"), py::arg("policy") = "lenient")
        .def("__len__", &RoutingTable::size)
        .def(
            "lookup",
            [](const RoutingTable& t, const std::string& a) -> std::optional<std::pair<std::string, std::uint32_t>> {
                const auto e = t.lookup(address(a));
                if (!e) return std::nullopt;
                return std::pair{e->route.to_string(), e->origin_asn};
            },
            py::arg("address"));
    m.def(
        "enrich", [](const std::vector<PrefixStat>& stats, const RoutingTable& t) { return enrich(stats, t); },
        py::arg("stats"), py::arg("routes"));

    py::class_<AppResult>(m, "AppResult")
        .def(py::init([](const std::string& target, const ScanMeta& meta, const std::string& status,
                         std::optional<std::string> identifier) {
                 const auto s = parse_app_status(status);
                 if (!s) throw UsageError("unknown status '" + status + "'");
                 return AppResult::make(address(target), meta, *s, std::move(identifier));
             }),
             py::arg("target"), py::arg("meta"), py::arg("status"), py::arg("identifier") = std::nullopt)
        .def_property_readonly("target", [](const AppResult& r) { return r.target.to_string(); })
        .def_property_readonly("status", [](const AppResult& r) { return std::string(to_string(r.status)); })
        .def_readonly("identifier", &AppResult::identifier);

    py::class_<SamplePolicy>(m, "SamplePolicy")
        .def(py::init([](std::size_t k, std::uint64_t rng_seed, double proxy_max, double cdn_min, bool unresponsive) {
                 SamplePolicy p{k, rng_seed, proxy_max, cdn_min, unresponsive};
                 p.validate();
                 return p;
             }),
             py::arg("k") = 10, py::arg("rng_seed") = 0, py::arg("proxy_max_success") = 0.10,
             py::arg("cdn_min_success") = 0.90, py::arg("include_unresponsive_seeds") = true)
        .def_readonly("k", &SamplePolicy::k)
        .def_readonly("rng_seed", &SamplePolicy::rng_seed);

    py::class_<TargetPlan>(m, "TargetPlan")
        .def_property_readonly("target_count", &TargetPlan::target_count)
        .def("targets",
             [](const TargetPlan& plan) {
                 std::vector<std::tuple<std::string, std::string, std::string, std::string>> rows;
                 for (const auto& pp : plan.prefixes) {
                     for (const auto& t : pp.targets) {
                         rows.emplace_back(t.address.to_string(), pp.prefix.to_string(),
                                           std::string(to_string(pp.strategy)), std::string(to_string(t.provenance)));
                     }
                 }
                 return rows;
             })
        .def("to_csv", [](const TargetPlan& plan) {
            std::ostringstream out;
            write_plan_csv(out, plan);
            return out.str();
        });

    m.def(
        "build_plan",
        [](const PrefixTable& occupancy, const std::vector<std::string>& hrps,
           const std::vector<std::pair<std::string, std::size_t>>& seeds, const SamplePolicy& policy) {
            std::vector<DnsSeed> parsed;
            for (const auto& [a, n] : seeds) parsed.push_back({address(a), n});
            return build_plan(occupancy, slash24s(hrps), parsed, policy);
        },
        py::arg("occupancy"), py::arg("hrps"), py::arg("seeds") = std::vector<std::pair<std::string, std::size_t>>{},
        py::arg("policy") = SamplePolicy{});
    m.def(
        "classify_sample",
        [](const std::vector<AppResult>& results, const SamplePolicy& policy) {
            return std::string(to_string(classify_sample(results, policy)));
        },
        py::arg("results"), py::arg("policy") = SamplePolicy{});
    m.def(
        "escalate",
        [](const TargetPlan& plan, const std::vector<AppResult>& sample_results, const PrefixTable& occupancy,
           const SamplePolicy& policy) {
            return escalate(plan, classify_samples(plan, sample_results, policy), occupancy);
        },
        py::arg("plan"), py::arg("sample_results"), py::arg("occupancy"), py::arg("policy") = SamplePolicy{});
    m.def(
        "evaluate_plan",
        [](const TargetPlan& plan, const std::vector<AppResult>& truth) {
            const auto r = evaluate_plan(plan, truth);
            py::dict d;
            d["handshakes_planned"] = r.handshakes_planned;
            d["handshakes_full_baseline"] = r.handshakes_full_baseline;
            d["reduction"] = r.reduction;
            d["identifiers_reached"] = r.identifiers_reached;
            d["identifiers_total"] = r.identifiers_total;
            d["identifier_coverage"] = r.identifier_coverage;
            return d;
        },
        py::arg("plan"), py::arg("truth"));

    m.def(
        "vantage_diff",
        [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
            const auto d = vantage_diff(slash24s(a), slash24s(b));
            py::dict out;
            out["only_a"] = strings(d.only_a);
            out["only_b"] = strings(d.only_b);
            out["both"] = strings(d.both);
            out["divergence"] = d.divergence;
            return out;
        },
        py::arg("a"), py::arg("b"));
}
