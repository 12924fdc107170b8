#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "hrp/errors.hpp"
#include "hrp/planner.hpp"
#include "test_util.hpp"

using namespace hrp;
using namespace hrp::testing;

namespace {

PrefixTable full_table(std::initializer_list<Slash24> prefixes) {
    PrefixTable t(tcp(443));
    Occupancy all;
    all.set();
    for (auto p : prefixes) t.add(p, all);
    return t;
}

std::vector<AppResult> truth_for(const PrefixTable& occ, const std::function<AppResult(Ipv4Address)>& outcome) {
    std::vector<AppResult> out;
    for (const auto& [p, bits] : occ) {
        for (const auto a : members(p, bits)) out.push_back(outcome(a));
    }
    return out;
}

std::vector<AppResult> results_for(const TargetPlan& plan, const std::vector<AppResult>& truth) {
    std::map<std::uint32_t, AppResult> by;
    for (const auto& r : truth) by.emplace(r.target.value, r);
    std::vector<AppResult> out;
    for (const auto& pp : plan.prefixes) {
        for (const auto& t : pp.targets) out.push_back(by.at(t.address.value));
    }
    return out;
}

}  // namespace

TEST_CASE("policy validation") {
    CHECK_THROWS_AS((SamplePolicy{.k = 0}.validate()), UsageError);
    CHECK_THROWS_AS((SamplePolicy{.k = 257}.validate()), UsageError);
    CHECK_THROWS_AS((SamplePolicy{.proxy_max_success = 0.9, .cdn_min_success = 0.5}.validate()), UsageError);
    CHECK_NOTHROW(SamplePolicy{}.validate());
}

TEST_CASE("seed dedupe sums name counts") {
    const auto d = dedupe_seeds({{ip("10.0.0.2"), 1}, {ip("10.0.0.1"), 2}, {ip("10.0.0.2"), 3}});
    CHECK(d == std::vector<DnsSeed>{{ip("10.0.0.1"), 2}, {ip("10.0.0.2"), 4}});
}

TEST_CASE("five seeds and five fills") {
    const Slash24 p = net("10.0.0.0/24");
    const auto occ = full_table({p});
    std::vector<DnsSeed> seeds;
    for (unsigned h = 1; h <= 5; ++h) seeds.push_back({p.host(static_cast<std::uint8_t>(h)), h});
    const std::vector<Slash24> hrps{p};
    const auto plan = build_plan(occ, hrps, seeds, {});
    REQUIRE(plan.prefixes.size() == 1);
    const auto& pp = plan.prefixes[0];
    CHECK(pp.strategy == Strategy::sampled);
    REQUIRE(pp.targets.size() == 10);
    // Most names first.
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(pp.targets[i].provenance == Provenance::dns_seed);
        CHECK(pp.targets[i].address == p.host(static_cast<std::uint8_t>(5 - i)));
    }
    std::set<std::uint32_t> seen;
    for (const auto& t : pp.targets) seen.insert(t.address.value);
    CHECK(seen.size() == 10);
    CHECK(plan.count(Provenance::uniform_fill) == 5);
}

TEST_CASE("more seeds than k keeps the k most named") {
    const Slash24 p = net("10.0.0.0/24");
    std::vector<DnsSeed> seeds;
    for (unsigned h = 0; h < 12; ++h) seeds.push_back({p.host(static_cast<std::uint8_t>(h)), 1 + h % 4});
    const std::vector<Slash24> hrps{p};
    const auto plan = build_plan(full_table({p}), hrps, seeds, {});
    CHECK(plan.target_count() == 10);
    CHECK(plan.count(Provenance::dns_seed) == 10);
    CHECK(plan.count(Provenance::uniform_fill) == 0);
    // Oracle: order by (name_count desc, address asc) and keep the first 10.
    auto ranked = seeds;
    std::sort(ranked.begin(), ranked.end(), [](const DnsSeed& x, const DnsSeed& y) {
        return x.name_count != y.name_count ? x.name_count > y.name_count : x.address < y.address;
    });
    for (std::size_t i = 0; i < 10; ++i) CHECK(plan.prefixes[0].targets[i].address == ranked[i].address);
}

TEST_CASE("non-HRP prefixes are planned in full") {
    PrefixTable occ(tcp(443));
    for (const char* a : {"10.0.1.3", "10.0.1.9", "10.0.1.200"}) occ.add(ip(a));
    const auto plan = build_plan(occ, {}, {}, {});
    REQUIRE(plan.prefixes.size() == 1);
    CHECK(plan.prefixes[0].strategy == Strategy::full);
    CHECK(plan.count(Provenance::non_hrp_full) == 3);
}

TEST_CASE("unresponsive seeds are optional") {
    const Slash24 p = net("10.0.0.0/24");
    PrefixTable occ(tcp(443));
    for (const auto a : host_range(p, 0, 239)) occ.add(a);
    const std::vector<DnsSeed> seeds{{p.host(250), 1}};
    const std::vector<Slash24> hrps{p};
    CHECK(build_plan(occ, hrps, seeds, {}).count(Provenance::dns_seed) == 1);
    CHECK(build_plan(occ, hrps, seeds, {.include_unresponsive_seeds = false}).count(Provenance::dns_seed) == 0);
}

TEST_CASE("classify_sample examples") {
    const SamplePolicy policy;
    const Slash24 p = net("10.0.0.0/24");
    std::vector<AppResult> sample;
    for (unsigned h = 0; h < 10; ++h) sample.push_back(AppResult::make(p.host(static_cast<std::uint8_t>(h)), tcp(443), AppStatus::success, "c"));
    CHECK(classify_sample(sample, policy) == ScenarioClass::cdn_like);
    sample[3] = AppResult::make(p.host(3), tcp(443), AppStatus::success, "d");
    CHECK(classify_sample(sample, policy) == ScenarioClass::diverse);
    for (unsigned h = 0; h < 10; ++h) sample[h] = AppResult::make(p.host(static_cast<std::uint8_t>(h)), tcp(443), h == 0 ? AppStatus::success : AppStatus::unreachable);
    CHECK(classify_sample(sample, policy) == ScenarioClass::proxy);  // 1/10 is at the proxy bound
    sample[1] = AppResult::make(p.host(1), tcp(443), AppStatus::success);
    CHECK(classify_sample(sample, policy) == ScenarioClass::diverse);
    CHECK_THROWS_AS(classify_sample({}, policy), UsageError);
}

TEST_CASE("escalation adds the remaining responsive addresses of diverse prefixes") {
    const Slash24 a = net("10.0.0.0/24"), b = net("10.0.1.0/24");
    const auto occ = full_table({a, b});
    const std::vector<Slash24> hrps{a, b};
    const auto plan = build_plan(occ, hrps, {}, {});
    const auto same = escalate(plan, {}, occ);
    CHECK(same == plan);

    const auto grown = escalate(plan, {{a, ScenarioClass::diverse}, {b, ScenarioClass::cdn_like}}, occ);
    CHECK(grown.count(Provenance::escalation) == 246);
    CHECK(grown.find(a)->strategy == Strategy::full);
    CHECK(grown.find(a)->targets.size() == 256);
    CHECK(grown.find(b)->targets.size() == 10);
    CHECK_THROWS_AS(escalate(plan, {{net("10.0.9.0/24"), ScenarioClass::diverse}}, occ), UsageError);
}

TEST_CASE("evaluation: a full plan is the baseline") {
    PrefixTable occ(tcp(443));
    for (const auto a : host_range(net("10.0.0.0/24"), 0, 20)) occ.add(a);
    const auto truth = truth_for(occ, [](Ipv4Address a) {
        return AppResult::make(a, tcp(443), AppStatus::success, std::to_string(a.host_byte() % 3));
    });
    const auto m = evaluate_plan(build_plan(occ, {}, {}, {}), truth);
    CHECK(m.handshakes_planned == 21);
    CHECK(m.handshakes_full_baseline == 21);
    CHECK(m.reduction == 0.0);
    CHECK(m.identifier_coverage == 1.0);
    CHECK(m.identifiers_total == 3);
}

TEST_CASE("evaluation: CDN-like corpus is reduced without losing identifiers") {
    PrefixTable occ(tcp(443));
    Occupancy all;
    all.set();
    std::vector<Slash24> hrps;
    for (std::uint32_t i = 0; i < 100; ++i) {
        hrps.push_back(Slash24{0x0A0000u + i});
        occ.add(hrps.back(), all);
    }
    const auto truth = truth_for(occ, [](Ipv4Address a) {
        return AppResult::make(a, tcp(443), AppStatus::success, "cdn" + std::to_string(a.value >> 8));
    });
    const SamplePolicy policy;
    const auto plan = build_plan(occ, hrps, {}, policy);
    const auto classes = classify_samples(plan, results_for(plan, truth), policy);
    CHECK(std::all_of(classes.begin(), classes.end(), [](const auto& kv) { return kv.second == ScenarioClass::cdn_like; }));
    const auto m = evaluate_plan(escalate(plan, classes, occ), truth);
    CHECK(m.handshakes_planned == 1000);
    CHECK(m.reduction == doctest::Approx(1.0 - 1000.0 / 25600.0));
    CHECK(m.identifier_coverage == 1.0);
}

TEST_CASE("evaluation: diverse prefixes are escalated to full coverage") {
    PrefixTable occ(tcp(443));
    Occupancy all;
    all.set();
    std::vector<Slash24> hrps;
    for (std::uint32_t i = 0; i < 20; ++i) {
        hrps.push_back(Slash24{0x0B0000u + i});
        occ.add(hrps.back(), all);
    }
    const auto truth = truth_for(occ, [](Ipv4Address a) {
        const bool diverse = (a.value >> 8) == 0x0B0000u;
        const auto id = diverse ? "d" + std::to_string(a.host_byte() % 3) : "c" + std::to_string(a.value >> 8);
        return AppResult::make(a, tcp(443), AppStatus::success, id);
    });
    const SamplePolicy policy;
    const auto plan = build_plan(occ, hrps, {}, policy);
    const auto classes = classify_samples(plan, results_for(plan, truth), policy);
    CHECK(classes.at(Slash24{0x0B0000u}) == ScenarioClass::diverse);
    const auto m = evaluate_plan(escalate(plan, classes, occ), truth);
    CHECK(m.identifier_coverage == 1.0);
    CHECK(m.handshakes_planned == 256 + 19 * 10);
}

TEST_CASE("evaluation requires ground truth for every planned target") {
    PrefixTable occ(tcp(443));
    occ.add(ip("10.0.0.1"));
    CHECK_THROWS_AS(evaluate_plan(build_plan(occ, {}, {}, {}), {}), UsageError);
}

TEST_CASE("property: plans are deterministic and only the rng seed changes the fill") {
    std::mt19937_64 rng(21);
    for (int round = 0; round < 20; ++round) {
        const auto occ = aggregate(clustered_addresses(rng, 3000, 8), tcp(443));
        const auto hrps = hrp_set(classify(occ, HrpThreshold::from_fraction(0.3)));
        std::vector<DnsSeed> seeds;
        for (const auto& [p, bits] : occ) {
            if (rng() % 2) seeds.push_back({p.host(static_cast<std::uint8_t>(rng())), 1 + rng() % 5});
        }
        const SamplePolicy a{.k = 1 + rng() % 20, .rng_seed = rng()};
        SamplePolicy b = a;
        b.rng_seed ^= 0x9E3779B97F4A7C15ull;
        const auto pa = build_plan(occ, hrps, seeds, a);
        CHECK(build_plan(occ, hrps, seeds, a) == pa);
        const auto pb = build_plan(occ, hrps, seeds, b);
        REQUIRE(pa.prefixes.size() == pb.prefixes.size());
        for (std::size_t i = 0; i < pa.prefixes.size(); ++i) {
            const auto& x = pa.prefixes[i];
            const auto& y = pb.prefixes[i];
            CHECK(x.targets.size() == y.targets.size());
            std::vector<PlannedTarget> xs, ys;
            std::set<std::uint32_t> seeded;
            for (const auto& t : x.targets) {
                if (t.provenance != Provenance::uniform_fill) xs.push_back(t);
                if (t.provenance == Provenance::dns_seed) seeded.insert(t.address.value);
            }
            for (const auto& t : y.targets) {
                if (t.provenance != Provenance::uniform_fill) ys.push_back(t);
            }
            CHECK(xs == ys);
            for (const auto& t : x.targets) {
                if (t.provenance == Provenance::uniform_fill) {
                    CHECK_FALSE(seeded.contains(t.address.value));
                    CHECK(occ.contains(t.address));
                }
            }
            if (x.strategy == Strategy::sampled) CHECK(x.targets.size() <= a.k);
        }
    }
}

TEST_CASE("property: fill is roughly uniform over the pool") {
    // Oracle: each of the 256 addresses is drawn with probability 10/256 per seed.
    const Slash24 p = net("10.0.0.0/24");
    const auto occ = full_table({p});
    const std::vector<Slash24> hrps{p};
    std::array<int, 256> hits{};
    const int runs = 4000;
    for (int s = 0; s < runs; ++s) {
        const auto plan = build_plan(occ, hrps, {}, {.rng_seed = static_cast<std::uint64_t>(s)});
        for (const auto& t : plan.prefixes[0].targets) {
            ++hits[t.address.host_byte()];
        }
    }
    const double expected = runs * 10.0 / 256.0;  // 156.25, sd about 12
    for (int h : hits) CHECK(std::abs(h - expected) < 70);
}

TEST_CASE("plan CSV round-trip") {
    const Slash24 p = net("10.0.0.0/24");
    PrefixTable occ = full_table({p});
    occ.add(ip("10.0.5.1"));
    const std::vector<Slash24> hrps{p};
    const std::vector<DnsSeed> seeds{{p.host(7), 2}};
    const auto plan = build_plan(occ, hrps, seeds, {.rng_seed = 9});
    std::stringstream io;
    write_plan_csv(io, plan);
    CHECK(read_plan_csv(io) == plan);
    std::istringstream dup(std::string(kPlanCsvHeader) + "\n10.0.0.1,10.0.0.0/24,full,non_hrp_full\n10.0.0.1,10.0.0.0/24,full,non_hrp_full\n");
    CHECK_THROWS_AS(read_plan_csv(dup), IngestError);
}
