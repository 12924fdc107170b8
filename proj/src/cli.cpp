#include "hrp/cli.hpp"

#include <fstream>
#include <future>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hrp/analytics.hpp"
#include "hrp/applayer.hpp"
#include "hrp/errors.hpp"
#include "hrp/planner.hpp"
#include "hrp/prefix_io.hpp"
#include "hrp/routing.hpp"
#include "hrp/scan_ingest.hpp"

namespace hrp::cli {

namespace {

struct RunConfig {
    std::vector<std::string> inputs;
    std::vector<std::string> scans;
    std::string routes;
    std::string output;
    std::string summary;
    std::string extra_csv;
    std::string export_ips;
    std::string format = "plain";
    std::string policy = "lenient";
    std::string proto = "tcp";
    int port = -1;
    double threshold = 0.90;
    std::string scan_id;
    std::string timestamp;
    std::string vantage;
    std::vector<std::string> timestamps;
    std::size_t persistence_n = 5;
    bool json = false;
    bool per_prefix = false;
    bool no_sets = false;
    bool exclude_app_errors = false;
    bool escalate = false;
    SamplePolicy sample;
    bool no_unresponsive_seeds = false;
};

/// Writes `text` to `path`, or to `fallback` when the path is empty.
void emit(const std::string& path, const std::string& text, std::ostream& fallback) {
    if (path.empty()) {
        fallback << text;
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open output '" + path + "'");
    f << text;
    if (!f) throw IoError("write failure on '" + path + "'");
}

ScanFormat scan_format(const RunConfig& c) {
    const auto f = parse_scan_format(c.format);
    if (!f) throw UsageError("unknown --format '" + c.format + "' (expected plain or csv_saddr)");
    return *f;
}

ErrorPolicy error_policy(const RunConfig& c) {
    const auto p = parse_error_policy(c.policy);
    if (!p) throw UsageError("unknown --policy '" + c.policy + "' (expected strict or lenient)");
    return *p;
}

Protocol protocol(const RunConfig& c) {
    const auto p = parse_protocol(c.proto);
    if (!p) throw UsageError("unknown --proto '" + c.proto + "' (expected tcp or udp)");
    return *p;
}

HrpThreshold threshold(const RunConfig& c) {
    return HrpThreshold::from_fraction(c.threshold);
}

std::optional<Timestamp> timestamp_flag(const std::string& text) {
    if (text.empty()) return std::nullopt;
    const auto t = parse_timestamp(text);
    if (!t) throw UsageError("bad timestamp '" + text + "' (expected YYYY-MM-DD or YYYY-MM-DDTHH:MM:SSZ)");
    return t;
}

Json ingest_to_json(const IngestStats& s) {
    return Json{{"lines_read", s.lines_read},
                {"addresses_emitted", s.addresses_emitted},
                {"invalid_lines", s.invalid_lines},
                {"comment_lines", s.comment_lines}};
}

struct ShardResult {
    PrefixTable table;
    IngestStats stats;
};

/// Aggregates every file concurrently, then merges the shards in argument order.
ShardResult ingest_scans(const std::vector<std::string>& paths, const ScanMeta& meta, ScanFormat format,
                         ErrorPolicy policy, Json* per_file = nullptr) {
    std::vector<std::future<ShardResult>> jobs;
    jobs.reserve(paths.size());
    for (const auto& path : paths) {
        jobs.push_back(std::async(std::launch::async, [&path, &meta, format, policy] {
            ScanFile file(path, format, policy);
            auto table = aggregate(file.reader(), meta);
            return ShardResult{std::move(table), file.reader().stats()};
        }));
    }
    ShardResult total{PrefixTable(meta), {}};
    std::exception_ptr first_error;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        try {
            auto shard = jobs[i].get();
            total.table.merge_from(shard.table);
            total.stats += shard.stats;
            if (per_file != nullptr) (*per_file)[paths[i]] = ingest_to_json(shard.stats);
        } catch (const IngestError& e) {
            if (!first_error) first_error = std::make_exception_ptr(IngestError(e.line_number(), e.detail(), paths[i]));
        } catch (...) {
            if (!first_error) first_error = std::current_exception();
        }
    }
    if (first_error) std::rethrow_exception(first_error);
    return total;
}

/// Checks a CLI-provided service against one read from a file.
void check_flags_against(const RunConfig& c, const ScanMeta& file_meta, const std::string& what) {
    if (c.port >= 0) {
        const auto flags = ScanMeta::make(protocol(c), c.port, "flags");
        require_same_service(flags, file_meta, "--port/--proto vs " + what);
    }
}

std::vector<ClassifiedScan> read_classified(const std::vector<std::string>& paths) {
    std::vector<ClassifiedScan> scans;
    for (const auto& path : paths) {
        auto stats = read_stats_csv_file(path);
        ClassifiedScan scan;
        scan.meta.scan_id = path;
        if (!stats.empty()) scan.meta = stats.front().meta;
        scan.meta.scan_id = path;
        scan.stats = std::move(stats);
        scans.push_back(std::move(scan));
    }
    return scans;
}

void require_one_service(const std::vector<ClassifiedScan>& scans) {
    const ClassifiedScan* ref = nullptr;
    for (const auto& s : scans) {
        if (s.stats.empty()) continue;
        if (ref == nullptr) {
            ref = &s;
            continue;
        }
        if (!ref->meta.same_service(s.meta)) {
            throw UsageError("schema mismatch: " + ref->meta.scan_id + " is " + ref->meta.service() + " but " +
                             s.meta.scan_id + " is " + s.meta.service());
        }
    }
}

/// Occupancy for stats-driven subcommands. The scan files take the service of
/// the stats file; per-prefix counts must agree with it.
PrefixTable occupancy_for(const RunConfig& c, const std::vector<PrefixStat>& stats, const std::string& stats_path) {
    ScanMeta meta = stats.empty() ? ScanMeta::make(protocol(c), std::max(c.port, 0), "scan") : stats.front().meta;
    if (!stats.empty()) check_flags_against(c, meta, stats_path);
    meta.scan_id = "scan";
    auto table = ingest_scans(c.scans, meta, scan_format(c), error_policy(c)).table;
    for (const auto& s : stats) {
        const auto n = table.count(s.prefix);
        if (n != s.responsive_count) {
            throw UsageError("schema mismatch: " + stats_path + " reports " + std::to_string(s.responsive_count) +
                             " responsive addresses in " + s.prefix.to_string() + " but the scan holds " +
                             std::to_string(n));
        }
    }
    if (table.size() != stats.size()) {
        throw UsageError("schema mismatch: scan has " + std::to_string(table.size()) + " prefixes but " + stats_path +
                         " lists " + std::to_string(stats.size()));
    }
    return table;
}

void validate_sample(RunConfig& c) {
    c.sample.include_unresponsive_seeds = !c.no_unresponsive_seeds;
    c.sample.validate();
}

// ---- subcommands ------------------------------------------------------------

int cmd_detect(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const auto th = threshold(c);
    const auto format = scan_format(c);
    const auto policy = error_policy(c);
    if (c.port < 0) throw UsageError("--port is required");
    const auto meta = ScanMeta::make(protocol(c), c.port, c.scan_id.empty() ? c.inputs.front() : c.scan_id,
                                     timestamp_flag(c.timestamp), c.vantage);

    Json per_file = Json::object();
    const auto result = ingest_scans(c.inputs, meta, format, policy, &per_file);
    const auto stats = classify(result.table, th);

    std::ostringstream body;
    if (c.json) {
        write_stats_jsonl(body, stats);
    } else {
        write_stats_csv(body, stats);
    }
    emit(c.output, body.str(), out);

    if (!c.extra_csv.empty()) {
        std::ostringstream hist;
        write_histogram_csv(hist, responsiveness_histogram(stats));
        emit(c.extra_csv, hist.str(), out);
    }

    const auto hrps = hrp_set(stats);
    Json summary{{"service", meta.service()},
                 {"scan_id", meta.scan_id},
                 {"threshold_fraction", th.fraction()},
                 {"min_count", th.min_count()},
                 {"prefixes", stats.size()},
                 {"hrps", hrps.size()},
                 {"responsive_addresses", result.table.total_addresses()},
                 {"hrp_address_share", hrp_address_share(stats)},
                 {"ingest", ingest_to_json(result.stats)},
                 {"files", per_file}};
    if (c.summary.empty()) {
        err << dump_line(summary);
    } else {
        emit(c.summary, dump_report(summary), err);
    }
    return kOk;
}

int cmd_enrich(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const auto policy = error_policy(c);
    const auto loaded = load_route_table_file(c.routes, policy);
    std::vector<PrefixStat> all;
    EnrichStats totals;
    for (const auto& path : c.inputs) {
        const auto stats = read_stats_csv_file(path);
        EnrichStats counters;
        auto enriched = enrich(stats, loaded.table, &counters);
        totals.matched += counters.matched;
        totals.unmatched += counters.unmatched;
        totals.split_prefixes += counters.split_prefixes;
        all.insert(all.end(), std::make_move_iterator(enriched.begin()), std::make_move_iterator(enriched.end()));
    }
    std::ostringstream body;
    if (c.json) {
        write_stats_jsonl(body, all);
    } else {
        write_stats_csv(body, all);
    }
    emit(c.output, body.str(), out);
    if (!c.extra_csv.empty()) emit(c.extra_csv, dump_report(as_summary_to_json(as_summary(all))), out);

    const auto& ls = loaded.stats;
    Json summary{{"routes",
                  {{"lines_read", ls.lines_read},
                   {"entries", ls.entries},
                   {"comment_lines", ls.comment_lines},
                   {"invalid_lines", ls.invalid_lines},
                   {"normalized", ls.normalized},
                   {"duplicates", ls.duplicates},
                   {"conflicts", ls.conflicts}}},
                 {"matched", totals.matched},
                 {"unmatched", totals.unmatched},
                 {"split_prefixes", totals.split_prefixes}};
    if (c.summary.empty()) {
        err << dump_line(summary);
    } else {
        emit(c.summary, dump_report(summary), err);
    }
    return kOk;
}

int cmd_portmatrix(const RunConfig& c, std::ostream& out) {
    const auto scans = read_classified(c.inputs);
    const auto m = port_profile(scans);
    emit(c.output, dump_report(port_matrix_to_json(m)), out);
    if (!c.extra_csv.empty()) {
        std::ostringstream csv;
        csv << "ports,prefixes_responsive,prefixes_hrp,hrp_share\n";
        for (std::size_t k = 0; k <= m.port_count; ++k) {
            csv << k << ',' << m.responsive_histogram[k] << ',' << m.hrp_histogram[k] << ','
                << format_fixed(m.hrp_share_on_exactly(k)) << '\n';
        }
        emit(c.extra_csv, csv.str(), out);
    }
    return kOk;
}

int cmd_stability(const RunConfig& c, std::ostream& out) {
    if (!c.timestamps.empty() && c.timestamps.size() != c.inputs.size()) {
        throw UsageError("--timestamps needs one value per input (" + std::to_string(c.inputs.size()) + ")");
    }
    std::vector<std::optional<Timestamp>> ts;
    for (const auto& t : c.timestamps) ts.push_back(timestamp_flag(t));
    auto scans = read_classified(c.inputs);
    require_one_service(scans);
    for (std::size_t i = 0; i < ts.size(); ++i) scans[i].meta.timestamp = ts[i];
    // Empty stats files carry no service; give them the common one.
    for (auto& s : scans) {
        if (s.stats.empty()) {
            for (const auto& other : scans) {
                if (!other.stats.empty()) {
                    s.meta.protocol = other.meta.protocol;
                    s.meta.port = other.meta.port;
                    break;
                }
            }
        }
    }
    const auto series = stability_series(scans);
    Json report{{"series", stability_to_json(series)}};
    if (scans.size() >= 2) {
        report["persistence"] = persistence_to_json(persistence(scans, c.persistence_n), c.per_prefix);
    } else {
        report["persistence"] = nullptr;
    }
    emit(c.output, dump_report(report), out);
    if (!c.extra_csv.empty()) {
        std::ostringstream csv;
        write_stability_csv(csv, series);
        emit(c.extra_csv, csv.str(), out);
    }
    return kOk;
}

int cmd_vantage(const RunConfig& c, std::ostream& out) {
    if (c.inputs.size() != 2) throw UsageError("vantage takes exactly two stats files");
    const auto scans = read_classified(c.inputs);
    require_one_service(scans);
    const auto d = vantage_diff(hrp_set(scans[0].stats), hrp_set(scans[1].stats));
    Json report{{"a", c.inputs[0]}, {"b", c.inputs[1]}};
    report.update(vantage_to_json(d, !c.no_sets));
    emit(c.output, dump_report(report), out);
    return kOk;
}

int cmd_applayer(const RunConfig& c, std::ostream& out) {
    if (c.inputs.size() != 2) throw UsageError("applayer takes a stats file and a results file");
    if (c.scans.empty()) throw UsageError("--scan is required");
    const auto stats = read_stats_csv_file(c.inputs[0]);
    const auto results = read_app_results_file(c.inputs[1]);
    if (!stats.empty() && !results.empty() && !stats.front().meta.same_service(results.front().meta)) {
        throw UsageError("schema mismatch: " + c.inputs[0] + " is " + stats.front().meta.service() + " but " +
                         c.inputs[1] + " is " + results.front().meta.service());
    }
    const auto occupancy = occupancy_for(c, stats, c.inputs[0]);
    const auto hrps = hrp_set(stats);
    AppLayerOptions options;
    options.exclude_app_errors = c.exclude_app_errors;
    const auto reports = hrp_app_report(results, hrps, occupancy, options);
    const auto comparison = address_comparison(results, hrps, occupancy, options);
    const auto cdf = success_cdf(reports.reports);
    Json report{{"service", occupancy.meta().service()},
                {"exclude_app_errors", c.exclude_app_errors},
                {"summary", app_summary_to_json(summarize(reports.reports))},
                {"addresses", address_comparison_to_json(comparison)},
                {"reports", app_reports_to_json(reports, c.per_prefix)}};
    emit(c.output, dump_report(report), out);
    if (!c.extra_csv.empty()) {
        std::ostringstream csv;
        write_success_cdf_csv(csv, cdf);
        emit(c.extra_csv, csv.str(), out);
    }
    return kOk;
}

int cmd_plan(RunConfig c, std::ostream& out, std::ostream& err) {
    validate_sample(c);
    if (c.inputs.empty() || c.inputs.size() > 2) throw UsageError("plan takes a stats file and an optional seeds file");
    if (c.scans.empty()) throw UsageError("--scan is required");
    const auto stats = read_stats_csv_file(c.inputs[0]);
    const auto seeds = c.inputs.size() == 2 ? read_seeds_file(c.inputs[1]) : std::vector<DnsSeed>{};
    const auto occupancy = occupancy_for(c, stats, c.inputs[0]);
    const auto plan = build_plan(occupancy, hrp_set(stats), seeds, c.sample);

    std::ostringstream body;
    write_plan_csv(body, plan);
    emit(c.output, body.str(), out);
    if (!c.export_ips.empty()) {
        std::ostringstream ips;
        write_plan_ips(ips, plan);
        emit(c.export_ips, ips.str(), out);
    }
    const auto summary = plan_summary_to_json(plan, c.sample);
    if (c.summary.empty()) {
        err << dump_line(summary);
    } else {
        emit(c.summary, dump_report(summary), err);
    }
    return kOk;
}

Json class_counts(const std::map<Slash24, ScenarioClass>& classes) {
    std::size_t proxy = 0, cdn = 0, diverse = 0;
    for (const auto& [p, cls] : classes) {
        switch (cls) {
            case ScenarioClass::proxy:
                ++proxy;
                break;
            case ScenarioClass::cdn_like:
                ++cdn;
                break;
            case ScenarioClass::diverse:
                ++diverse;
                break;
        }
    }
    return Json{{"proxy", proxy}, {"cdn_like", cdn}, {"diverse", diverse}};
}

int cmd_escalate(RunConfig c, std::ostream& out, std::ostream& err) {
    validate_sample(c);
    if (c.inputs.size() != 2) throw UsageError("escalate takes a plan file and a sample results file");
    if (c.scans.empty()) throw UsageError("--scan is required");
    const auto plan = read_plan_csv_file(c.inputs[0]);
    const auto results = read_app_results_file(c.inputs[1]);
    ScanMeta meta;
    if (!results.empty()) {
        meta = results.front().meta;
        check_flags_against(c, meta, c.inputs[1]);
    } else {
        meta = ScanMeta::make(protocol(c), std::max(c.port, 0), "scan");
    }
    const auto occupancy = ingest_scans(c.scans, meta, scan_format(c), error_policy(c)).table;
    const auto classes = classify_samples(plan, results, c.sample);
    const auto escalated = escalate(plan, classes, occupancy);
    std::ostringstream body;
    write_plan_csv(body, escalated);
    emit(c.output, body.str(), out);
    Json summary = plan_summary_to_json(escalated, c.sample);
    summary["classes"] = class_counts(classes);
    if (c.summary.empty()) {
        err << dump_line(summary);
    } else {
        emit(c.summary, dump_report(summary), err);
    }
    return kOk;
}

int cmd_evaluate(RunConfig c, std::ostream& out) {
    validate_sample(c);
    if (c.inputs.size() != 2) throw UsageError("evaluate takes a plan file and a ground-truth results file");
    auto plan = read_plan_csv_file(c.inputs[0]);
    const auto truth = read_app_results_file(c.inputs[1]);
    for (const auto& r : truth) {
        if (!truth.front().meta.same_service(r.meta)) {
            throw UsageError("schema mismatch: ground truth mixes " + truth.front().meta.service() + " and " +
                             r.meta.service());
        }
    }
    Json report = Json::object();
    if (c.escalate) {
        const auto classes = classify_samples(plan, truth, c.sample);
        plan = escalate(plan, classes, occupancy_from_results(truth));
        report["classes"] = class_counts(classes);
    }
    report["metrics"] = plan_metrics_to_json(evaluate_plan(plan, truth));
    emit(c.output, dump_report(report), out);
    return kOk;
}

void add_sample_flags(CLI::App* sub, RunConfig& c) {
    sub->add_option("--k", c.sample.k, "Targets per HRP")->capture_default_str();
    sub->add_option("--rng-seed", c.sample.rng_seed, "Seed for uniform sampling")->capture_default_str();
    sub->add_option("--proxy-max", c.sample.proxy_max_success, "Max sample success rate of a proxy HRP")
        ->capture_default_str();
    sub->add_option("--cdn-min", c.sample.cdn_min_success, "Min sample success rate of a CDN-like HRP")
        ->capture_default_str();
}

void add_scan_flags(CLI::App* sub, RunConfig& c) {
    sub->add_option("--format", c.format, "Scan file format: plain | csv_saddr")->capture_default_str();
    sub->add_option("--policy", c.policy, "Error policy: strict | lenient")->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Highly responsive prefix detection and HRP-aware scan planning", "hrp"};
    app.require_subcommand(1);
    RunConfig c;

    auto* detect = app.add_subcommand("detect", "Aggregate scan output into /24 stats and flag HRPs");
    detect->add_option("scans", c.inputs, "Scan result files (shards of one scan)")->required();
    detect->add_option("--port", c.port, "Scanned port")->required()->check(CLI::Range(0, 65535));
    detect->add_option("--proto", c.proto, "tcp | udp")->capture_default_str();
    detect->add_option("--threshold", c.threshold, "HRP threshold fraction in (0, 1]")->capture_default_str();
    detect->add_option("--scan-id", c.scan_id, "Scan identifier (default: first file name)");
    detect->add_option("--timestamp", c.timestamp, "Scan date (UTC)");
    detect->add_option("--vantage", c.vantage, "Vantage point label");
    detect->add_option("--output", c.output, "Stats output (default stdout)");
    detect->add_option("--summary", c.summary, "Summary JSON file (default: one line on stderr)");
    detect->add_option("--histogram", c.extra_csv, "Responsiveness histogram CSV");
    detect->add_flag("--json", c.json, "Write JSON lines instead of CSV");
    add_scan_flags(detect, c);

    auto* enrich_cmd = app.add_subcommand("enrich", "Attach origin AS and covering route to stats");
    enrich_cmd->add_option("stats", c.inputs, "Stats CSV files")->required();
    enrich_cmd->add_option("--routes", c.routes, "Route snapshot CSV (prefix/length,asn)")->required();
    enrich_cmd->add_option("--policy", c.policy, "Error policy: strict | lenient")->capture_default_str();
    enrich_cmd->add_option("--output", c.output, "Enriched stats output (default stdout)");
    enrich_cmd->add_option("--as-summary", c.extra_csv, "Per-AS summary JSON");
    enrich_cmd->add_option("--summary", c.summary, "Summary JSON file (default: one line on stderr)");
    enrich_cmd->add_flag("--json", c.json, "Write JSON lines instead of CSV");

    auto* portmatrix = app.add_subcommand("portmatrix", "Cross-port responsiveness of /24 prefixes");
    portmatrix->add_option("stats", c.inputs, "One stats CSV per service")->required();
    portmatrix->add_option("--output", c.output, "Report JSON (default stdout)");
    portmatrix->add_option("--csv", c.extra_csv, "Histogram CSV");

    auto* stability = app.add_subcommand("stability", "HRP share time series and persistence");
    stability->add_option("stats", c.inputs, "Stats CSV files in scan order")->required();
    stability->add_option("--timestamps", c.timestamps, "One scan date per input")->delimiter(',');
    stability->add_option("--persistence-n", c.persistence_n, "Allowed missing scans")->capture_default_str();
    stability->add_option("--output", c.output, "Report JSON (default stdout)");
    stability->add_option("--csv", c.extra_csv, "Time series CSV");
    stability->add_flag("--per-prefix", c.per_prefix, "Include per-prefix persistence rows");

    auto* vantage = app.add_subcommand("vantage", "Compare HRP sets seen from two vantage points");
    vantage->add_option("stats", c.inputs, "Two stats CSV files")->required()->expected(2);
    vantage->add_option("--output", c.output, "Report JSON (default stdout)");
    vantage->add_flag("--no-sets", c.no_sets, "Only report counts");

    auto* applayer = app.add_subcommand("applayer", "Application-layer success and identifiers inside HRPs");
    applayer->add_option("inputs", c.inputs, "stats.csv results.csv")->required()->expected(2);
    applayer->add_option("--scan", c.scans, "Port scan files behind the stats")->required();
    applayer->add_option("--port", c.port, "Expected port")->check(CLI::Range(0, 65535));
    applayer->add_option("--proto", c.proto, "Expected protocol")->capture_default_str();
    applayer->add_option("--output", c.output, "Report JSON (default stdout)");
    applayer->add_option("--cdf-csv", c.extra_csv, "Success-count CDF CSV");
    applayer->add_flag("--exclude-app-errors", c.exclude_app_errors, "Drop app_error outcomes from denominators");
    applayer->add_flag("--per-prefix", c.per_prefix, "Include one row per HRP");
    add_scan_flags(applayer, c);

    auto* plan = app.add_subcommand("plan", "Build an HRP-aware application-layer target plan");
    plan->add_option("inputs", c.inputs, "stats.csv [seeds.csv]")->required()->expected(1, 2);
    plan->add_option("--scan", c.scans, "Port scan files behind the stats")->required();
    plan->add_option("--port", c.port, "Expected port")->check(CLI::Range(0, 65535));
    plan->add_option("--proto", c.proto, "Expected protocol")->capture_default_str();
    plan->add_option("--output", c.output, "Plan CSV (default stdout)");
    plan->add_option("--summary", c.summary, "Summary JSON file (default: one line on stderr)");
    plan->add_option("--export-ips", c.export_ips, "Also write one target IP per line");
    plan->add_flag("--no-unresponsive-seeds", c.no_unresponsive_seeds, "Only use seeds that were port-responsive");
    add_sample_flags(plan, c);
    add_scan_flags(plan, c);

    auto* escalate_cmd = app.add_subcommand("escalate", "Classify sampled HRPs and expand diverse ones");
    escalate_cmd->add_option("inputs", c.inputs, "plan.csv sample_results.csv")->required()->expected(2);
    escalate_cmd->add_option("--scan", c.scans, "Port scan files behind the plan")->required();
    escalate_cmd->add_option("--port", c.port, "Expected port")->check(CLI::Range(0, 65535));
    escalate_cmd->add_option("--proto", c.proto, "Expected protocol")->capture_default_str();
    escalate_cmd->add_option("--output", c.output, "Plan CSV (default stdout)");
    escalate_cmd->add_option("--summary", c.summary, "Summary JSON file (default: one line on stderr)");
    add_sample_flags(escalate_cmd, c);
    add_scan_flags(escalate_cmd, c);

    auto* evaluate = app.add_subcommand("evaluate", "Score a plan against full-scan ground truth");
    evaluate->add_option("inputs", c.inputs, "plan.csv truth.csv")->required()->expected(2);
    evaluate->add_option("--output", c.output, "Report JSON (default stdout)");
    evaluate->add_flag("--escalate", c.escalate, "Classify samples from the truth and escalate diverse HRPs first");
    add_sample_flags(evaluate, c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        scan_format(c);
        error_policy(c);
        protocol(c);
        if (*detect) return cmd_detect(c, out, err);
        if (*enrich_cmd) return cmd_enrich(c, out, err);
        if (*portmatrix) return cmd_portmatrix(c, out);
        if (*stability) return cmd_stability(c, out);
        if (*vantage) return cmd_vantage(c, out);
        if (*applayer) return cmd_applayer(c, out);
        if (*plan) return cmd_plan(c, out, err);
        if (*escalate_cmd) return cmd_escalate(c, out, err);
        if (*evaluate) return cmd_evaluate(c, out);
    } catch (const UsageError& e) {
        err << "hrp: " << e.what() << '\n';
        return kUsage;
    } catch (const IngestError& e) {
        err << "hrp: " << e.what() << '\n';
        return kIngest;
    } catch (const IoError& e) {
        err << "hrp: " << e.what() << '\n';
        return kIo;
    } catch (const std::exception& e) {
        err << "hrp: internal error: " << e.what() << '\n';
        return kInternal;
    }
    return kUsage;
}

}  // namespace hrp::cli
