#include "hrp/planner.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "hrp/errors.hpp"

namespace hrp {

std::vector<DnsSeed> dedupe_seeds(std::vector<DnsSeed> seeds) {
    std::sort(seeds.begin(), seeds.end(), [](const DnsSeed& a, const DnsSeed& b) { return a.address < b.address; });
    std::vector<DnsSeed> out;
    for (const auto& s : seeds) {
        if (!out.empty() && out.back().address == s.address) {
            out.back().name_count += s.name_count;
        } else {
            out.push_back(s);
        }
    }
    return out;
}

std::vector<DnsSeed> read_seeds(std::istream& in) {
    std::vector<DnsSeed> seeds;
    std::string line;
    std::size_t n = 0;
    if (!next_record_line(in, line, n)) return seeds;
    if (trim(line) != "ip,name_count") throw IngestError(n, "expected seeds header 'ip,name_count'");
    while (next_record_line(in, line, n)) {
        const auto f = split_csv(line);
        if (f.size() != 2) throw IngestError(n, "expected 2 seed columns, got " + std::to_string(f.size()));
        const auto ip = Ipv4Address::parse(f[0]);
        const auto count = parse_unsigned(f[1]);
        if (!ip) throw IngestError(n, "bad seed ip '" + std::string(f[0]) + "'");
        if (!count || *count == 0) throw IngestError(n, "name_count must be a positive integer");
        seeds.push_back(DnsSeed{*ip, static_cast<std::size_t>(*count)});
    }
    return dedupe_seeds(std::move(seeds));
}

std::vector<DnsSeed> read_seeds_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open seeds file '" + path + "'");
    return read_seeds(in);
}

void SamplePolicy::validate() const {
    if (k < 1 || k > kSlash24Size) throw UsageError("k must be in [1, 256], got " + std::to_string(k));
    if (!(proxy_max_success >= 0.0 && proxy_max_success < cdn_min_success && cdn_min_success <= 1.0)) {
        throw UsageError("scenario thresholds must satisfy 0 <= proxy_max_success < cdn_min_success <= 1");
    }
}

std::string_view to_string(Strategy s) noexcept {
    return s == Strategy::full ? "full" : "sampled";
}

std::string_view to_string(Provenance p) noexcept {
    switch (p) {
        case Provenance::non_hrp_full:
            return "non_hrp_full";
        case Provenance::dns_seed:
            return "dns_seed";
        case Provenance::uniform_fill:
            return "uniform_fill";
        case Provenance::escalation:
            return "escalation";
    }
    return "non_hrp_full";
}

std::string_view to_string(ScenarioClass c) noexcept {
    switch (c) {
        case ScenarioClass::proxy:
            return "proxy";
        case ScenarioClass::cdn_like:
            return "cdn_like";
        case ScenarioClass::diverse:
            return "diverse";
    }
    return "diverse";
}

std::optional<Strategy> parse_strategy(std::string_view text) noexcept {
    if (text == "full") return Strategy::full;
    if (text == "sampled") return Strategy::sampled;
    return std::nullopt;
}

std::optional<Provenance> parse_provenance(std::string_view text) noexcept {
    if (text == "non_hrp_full") return Provenance::non_hrp_full;
    if (text == "dns_seed") return Provenance::dns_seed;
    if (text == "uniform_fill") return Provenance::uniform_fill;
    if (text == "escalation") return Provenance::escalation;
    return std::nullopt;
}

std::size_t TargetPlan::target_count() const noexcept {
    std::size_t n = 0;
    for (const auto& p : prefixes) n += p.targets.size();
    return n;
}

const PrefixPlan* TargetPlan::find(Slash24 prefix) const noexcept {
    const auto it = std::lower_bound(prefixes.begin(), prefixes.end(), prefix,
                                     [](const PrefixPlan& p, Slash24 key) { return p.prefix < key; });
    return it != prefixes.end() && it->prefix == prefix ? &*it : nullptr;
}

std::size_t TargetPlan::count(Provenance p) const noexcept {
    std::size_t n = 0;
    for (const auto& pp : prefixes) {
        n += static_cast<std::size_t>(std::count_if(pp.targets.begin(), pp.targets.end(),
                                                    [p](const PlannedTarget& t) { return t.provenance == p; }));
    }
    return n;
}

std::uint64_t SampleRng::splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

SampleRng::SampleRng(std::uint64_t rng_seed, Slash24 prefix)
    : engine_(splitmix64(rng_seed ^ splitmix64(prefix.network))) {}

std::uint64_t SampleRng::below(std::uint64_t bound) {
    // Reject the low (2^64 mod bound) values so every residue is equally likely.
    const std::uint64_t threshold = (0 - bound) % bound;
    while (true) {
        const std::uint64_t r = engine_();
        if (r >= threshold) return r % bound;
    }
}

TargetPlan build_plan(const PrefixTable& occupancy, std::span<const Slash24> hrps, std::span<const DnsSeed> seeds,
                      const SamplePolicy& policy) {
    policy.validate();
    const std::set<Slash24> hrp_set(hrps.begin(), hrps.end());
    std::map<Slash24, std::vector<DnsSeed>> seeds_by_prefix;
    for (const auto& s : dedupe_seeds(std::vector<DnsSeed>(seeds.begin(), seeds.end()))) {
        seeds_by_prefix[slash24_of(s.address)].push_back(s);
    }

    TargetPlan plan;
    plan.prefixes.reserve(occupancy.size());
    for (const auto& [prefix, bits] : occupancy) {
        PrefixPlan pp;
        pp.prefix = prefix;
        const auto responsive = members(prefix, bits);
        if (!hrp_set.contains(prefix)) {
            pp.strategy = Strategy::full;
            for (const auto a : responsive) pp.targets.push_back({a, Provenance::non_hrp_full});
            plan.prefixes.push_back(std::move(pp));
            continue;
        }

        pp.strategy = Strategy::sampled;
        std::vector<DnsSeed> candidates;
        if (const auto it = seeds_by_prefix.find(prefix); it != seeds_by_prefix.end()) {
            for (const auto& s : it->second) {
                if (policy.include_unresponsive_seeds || bits.test(s.address.host_byte())) candidates.push_back(s);
            }
        }
        std::sort(candidates.begin(), candidates.end(), [](const DnsSeed& a, const DnsSeed& b) {
            if (a.name_count != b.name_count) return a.name_count > b.name_count;
            return a.address < b.address;
        });
        if (candidates.size() > policy.k) candidates.resize(policy.k);

        Occupancy chosen;
        for (const auto& s : candidates) {
            pp.targets.push_back({s.address, Provenance::dns_seed});
            chosen.set(s.address.host_byte());
        }

        std::vector<Ipv4Address> pool;
        for (const auto a : responsive) {
            if (!chosen.test(a.host_byte())) pool.push_back(a);
        }
        const auto wanted = std::min(policy.k - candidates.size(), pool.size());
        SampleRng rng(policy.rng_seed, prefix);
        for (std::size_t i = 0; i < wanted; ++i) {
            const auto j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
            std::swap(pool[i], pool[j]);
        }
        std::sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(wanted));
        for (std::size_t i = 0; i < wanted; ++i) pp.targets.push_back({pool[i], Provenance::uniform_fill});
        plan.prefixes.push_back(std::move(pp));
    }
    return plan;
}

ScenarioClass classify_sample(std::span<const AppResult> sample_results, const SamplePolicy& policy) {
    if (sample_results.empty()) throw UsageError("classify_sample needs at least one result");
    std::size_t successes = 0;
    bool identical = true;
    const std::string* first_id = nullptr;
    for (const auto& r : sample_results) {
        if (!r.succeeded()) continue;
        ++successes;
        if (!r.identifier) {
            identical = false;
        } else if (first_id == nullptr) {
            first_id = &*r.identifier;
        } else if (*first_id != *r.identifier) {
            identical = false;
        }
    }
    const double rate = static_cast<double>(successes) / static_cast<double>(sample_results.size());
    if (rate <= policy.proxy_max_success) return ScenarioClass::proxy;
    if (rate >= policy.cdn_min_success && identical) return ScenarioClass::cdn_like;
    return ScenarioClass::diverse;
}

std::map<Slash24, ScenarioClass> classify_samples(const TargetPlan& plan, std::span<const AppResult> results,
                                                  const SamplePolicy& policy) {
    std::unordered_set<std::uint32_t> sampled_targets;
    for (const auto& pp : plan.prefixes) {
        if (pp.strategy != Strategy::sampled) continue;
        for (const auto& t : pp.targets) sampled_targets.insert(t.address.value);
    }
    std::map<Slash24, std::vector<AppResult>> grouped;
    std::unordered_set<std::uint32_t> seen;
    for (const auto& r : results) {
        if (!sampled_targets.contains(r.target.value) || !seen.insert(r.target.value).second) continue;
        grouped[slash24_of(r.target)].push_back(r);
    }
    std::map<Slash24, ScenarioClass> classes;
    for (const auto& [prefix, rs] : grouped) classes.emplace(prefix, classify_sample(rs, policy));
    return classes;
}

TargetPlan escalate(const TargetPlan& plan, const std::map<Slash24, ScenarioClass>& classes,
                    const PrefixTable& occupancy) {
    TargetPlan out = plan;
    for (const auto& [prefix, cls] : classes) {
        auto it = std::lower_bound(out.prefixes.begin(), out.prefixes.end(), prefix,
                                   [](const PrefixPlan& p, Slash24 key) { return p.prefix < key; });
        if (it == out.prefixes.end() || it->prefix != prefix || it->strategy != Strategy::sampled) {
            throw UsageError("scenario class given for " + prefix.to_string() + ", which is not a sampled prefix");
        }
        if (cls != ScenarioClass::diverse) continue;
        Occupancy planned;
        for (const auto& t : it->targets) planned.set(t.address.host_byte());
        if (const auto* bits = occupancy.find(prefix)) {
            for (const auto a : members(prefix, *bits & ~planned)) it->targets.push_back({a, Provenance::escalation});
        }
        it->strategy = Strategy::full;
    }
    return out;
}

PlanMetrics evaluate_plan(const TargetPlan& plan, std::span<const AppResult> truth) {
    std::unordered_map<std::uint32_t, const AppResult*> by_target;
    std::unordered_set<std::string> all_ids;
    for (const auto& r : truth) {
        if (!by_target.emplace(r.target.value, &r).second) continue;
        if (r.succeeded() && r.identifier) all_ids.insert(*r.identifier);
    }
    PlanMetrics m;
    m.handshakes_full_baseline = by_target.size();
    std::unordered_set<std::string> reached;
    for (const auto& pp : plan.prefixes) {
        for (const auto& t : pp.targets) {
            const auto it = by_target.find(t.address.value);
            if (it == by_target.end()) {
                throw UsageError("ground truth has no result for planned target " + t.address.to_string());
            }
            ++m.handshakes_planned;
            const auto& r = *it->second;
            if (r.succeeded() && r.identifier) reached.insert(*r.identifier);
        }
    }
    m.identifiers_reached = reached.size();
    m.identifiers_total = all_ids.size();
    if (m.handshakes_full_baseline > 0) {
        const double ratio =
            static_cast<double>(m.handshakes_planned) / static_cast<double>(m.handshakes_full_baseline);
        m.reduction = std::clamp(1.0 - ratio, 0.0, 1.0);
    }
    m.identifier_coverage = m.identifiers_total == 0 ? 1.0
                                                     : static_cast<double>(m.identifiers_reached) /
                                                           static_cast<double>(m.identifiers_total);
    return m;
}

void write_plan_csv(std::ostream& out, const TargetPlan& plan) {
    out << kPlanCsvHeader << '\n';
    for (const auto& pp : plan.prefixes) {
        const auto prefix = pp.prefix.to_string();
        for (const auto& t : pp.targets) {
            out << t.address.to_string() << ',' << prefix << ',' << to_string(pp.strategy) << ','
                << to_string(t.provenance) << '\n';
        }
    }
}

void write_plan_ips(std::ostream& out, const TargetPlan& plan) {
    for (const auto& pp : plan.prefixes) {
        for (const auto& t : pp.targets) out << t.address.to_string() << '\n';
    }
}

TargetPlan read_plan_csv(std::istream& in) {
    std::map<Slash24, PrefixPlan> by_prefix;
    std::unordered_set<std::uint32_t> seen;
    std::string line;
    std::size_t n = 0;
    if (next_record_line(in, line, n)) {
        if (trim(line) != kPlanCsvHeader) throw IngestError(n, "expected plan header '" + std::string(kPlanCsvHeader) + "'");
        while (next_record_line(in, line, n)) {
            const auto f = split_csv(line);
            if (f.size() != 4) throw IngestError(n, "expected 4 plan columns, got " + std::to_string(f.size()));
            const auto ip = Ipv4Address::parse(f[0]);
            const auto prefix = Slash24::parse(f[1]);
            const auto strategy = parse_strategy(f[2]);
            const auto provenance = parse_provenance(f[3]);
            if (!ip || !prefix || !strategy || !provenance) throw IngestError(n, "malformed plan row");
            if (slash24_of(*ip) != *prefix) throw IngestError(n, ip->to_string() + " is outside " + prefix->to_string());
            if (!seen.insert(ip->value).second) throw IngestError(n, "duplicate target " + ip->to_string());
            auto [it, inserted] = by_prefix.try_emplace(*prefix);
            auto& pp = it->second;
            if (inserted) {
                pp.prefix = *prefix;
                pp.strategy = *strategy;
            } else if (pp.strategy != *strategy) {
                throw IngestError(n, "inconsistent strategy for " + prefix->to_string());
            }
            pp.targets.push_back({*ip, *provenance});
        }
    }
    TargetPlan plan;
    plan.prefixes.reserve(by_prefix.size());
    for (auto& [prefix, pp] : by_prefix) plan.prefixes.push_back(std::move(pp));
    return plan;
}

TargetPlan read_plan_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open plan file '" + path + "'");
    return read_plan_csv(in);
}

Json plan_summary_to_json(const TargetPlan& plan, const SamplePolicy& policy) {
    std::size_t sampled = 0, full = 0;
    for (const auto& pp : plan.prefixes) (pp.strategy == Strategy::sampled ? sampled : full) += 1;
    return Json{{"prefixes", plan.prefixes.size()},
                {"prefixes_full", full},
                {"prefixes_sampled", sampled},
                {"targets", plan.target_count()},
                {"targets_non_hrp_full", plan.count(Provenance::non_hrp_full)},
                {"targets_dns_seed", plan.count(Provenance::dns_seed)},
                {"targets_uniform_fill", plan.count(Provenance::uniform_fill)},
                {"targets_escalation", plan.count(Provenance::escalation)},
                {"k", policy.k},
                {"rng_seed", policy.rng_seed},
                {"include_unresponsive_seeds", policy.include_unresponsive_seeds}};
}

Json plan_metrics_to_json(const PlanMetrics& m) {
    return Json{{"handshakes_planned", m.handshakes_planned},
                {"handshakes_full_baseline", m.handshakes_full_baseline},
                {"reduction", m.reduction},
                {"identifiers_reached", m.identifiers_reached},
                {"identifiers_total", m.identifiers_total},
                {"identifier_coverage", m.identifier_coverage}};
}

PrefixTable occupancy_from_results(std::span<const AppResult> truth) {
    PrefixTable table(truth.empty() ? ScanMeta{} : truth.front().meta);
    for (const auto& r : truth) table.add(r.target);
    return table;
}

}  // namespace hrp
