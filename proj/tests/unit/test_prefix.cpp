#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <unordered_set>

#include "hrp/errors.hpp"
#include "hrp/prefix.hpp"
#include "test_util.hpp"

using namespace hrp;
using namespace hrp::testing;

TEST_CASE("slash24_of truncates to the top 24 bits") {
    CHECK(slash24_of(ip("198.51.100.7")).to_string() == "198.51.100.0/24");
    CHECK(slash24_of(ip("198.51.100.0")) == slash24_of(ip("198.51.100.255")));
    CHECK(slash24_of(ip("198.51.101.0")) != slash24_of(ip("198.51.100.3")));
    CHECK(Slash24::parse("198.51.100.0/24") == slash24_of(ip("198.51.100.9")));
    CHECK_FALSE(Slash24::parse("198.51.100.1/24"));
}

TEST_CASE("aggregate uses set semantics") {
    const std::vector<Ipv4Address> in{ip("198.51.100.1"), ip("198.51.100.2"), ip("198.51.100.1")};
    const auto t = aggregate(in, tcp(443));
    CHECK(t.size() == 1);
    CHECK(t.count(net("198.51.100.0/24")) == 2);
    CHECK(t.contains(ip("198.51.100.2")));
    CHECK_FALSE(t.contains(ip("198.51.100.3")));
}

TEST_CASE("aggregate saturates at 256 and handles empty input") {
    const auto full = aggregate(host_range(net("203.0.113.0/24"), 0, 255), tcp(443));
    CHECK(full.count(net("203.0.113.0/24")) == 256);
    CHECK(aggregate(std::vector<Ipv4Address>{}, tcp(443)).empty());
}

TEST_CASE("merge ORs overlapping occupancies") {
    const auto p = net("192.0.2.0/24");
    const auto a = aggregate(host_range(p, 0, 99), tcp(80));
    const auto b = aggregate(host_range(p, 50, 199), tcp(80));
    // Oracle: size of the union of host-byte sets.
    std::set<unsigned> oracle;
    for (unsigned h = 0; h <= 99; ++h) oracle.insert(h);
    for (unsigned h = 50; h <= 199; ++h) oracle.insert(h);
    REQUIRE(oracle.size() == 200);
    CHECK(merge(a, b).count(p) == oracle.size());
    CHECK(merge(a, PrefixTable(tcp(80))) == a);

    const auto c = aggregate(host_range(net("192.0.3.0/24"), 0, 3), tcp(80));
    CHECK(merge(a, c).size() == 2);
}

TEST_CASE("merge rejects tables from different scans") {
    const auto a = aggregate(host_range(net("192.0.2.0/24"), 0, 3), tcp(80));
    const auto b = aggregate(host_range(net("192.0.2.0/24"), 0, 3), tcp(443));
    CHECK_THROWS_AS(merge(a, b), UsageError);
}

TEST_CASE("threshold min_count uses the ceiling rule") {
    CHECK(HrpThreshold::from_fraction(0.90).min_count() == 231);
    CHECK(HrpThreshold::from_fraction(0.95).min_count() == 244);
    CHECK(HrpThreshold::from_fraction(1.0).min_count() == 256);
    CHECK(HrpThreshold::from_fraction(0.5).min_count() == 128);
    CHECK(HrpThreshold::from_fraction(1e-9).min_count() == 1);
    CHECK_THROWS_AS(HrpThreshold::from_fraction(0.0), UsageError);
    CHECK_THROWS_AS(HrpThreshold::from_fraction(1.5), UsageError);
    CHECK_THROWS_AS(HrpThreshold::from_fraction(-0.1), UsageError);
    static_assert(kDefaultThreshold.min_count() == 231);
    static_assert(kStrictThreshold.min_count() == 244);
}

TEST_CASE("classify flags HRPs at the threshold boundary") {
    PrefixTable t(tcp(443));
    const auto p231 = net("10.0.1.0/24"), p230 = net("10.0.2.0/24"), p243 = net("10.0.3.0/24"),
               p244 = net("10.0.4.0/24");
    for (const auto& [p, n] : std::vector<std::pair<Slash24, unsigned>>{{p231, 231}, {p230, 230}, {p243, 243}, {p244, 244}}) {
        for (const auto a : host_range(p, 0, n - 1)) t.add(a);
    }
    const auto s90 = classify(t, kDefaultThreshold);
    const auto s95 = classify(t, kStrictThreshold);
    const auto flag = [](const std::vector<PrefixStat>& s, Slash24 p) {
        for (const auto& x : s) {
            if (x.prefix == p) return x.is_hrp;
        }
        FAIL("missing prefix");
        return false;
    };
    CHECK(flag(s90, p231));
    CHECK_FALSE(flag(s90, p230));
    CHECK_FALSE(flag(s95, p243));
    CHECK(flag(s95, p244));
    CHECK(s90.size() == 4);
    CHECK(classify(t, kDefaultThreshold) == s90);  // pure
    for (std::size_t i = 1; i < s90.size(); ++i) CHECK(s90[i - 1].prefix < s90[i].prefix);
}

TEST_CASE("responsiveness histogram arithmetic") {
    PrefixTable t(tcp(443));
    for (const auto a : host_range(net("10.0.0.0/24"), 0, 2)) t.add(a);
    for (const auto a : host_range(net("10.0.1.0/24"), 0, 255)) t.add(a);
    const auto stats = classify(t, kDefaultThreshold);
    const auto h = responsiveness_histogram(stats);
    CHECK(h.total_addresses == 259);
    CHECK(h.address_count[256] == 256);
    CHECK(static_cast<double>(h.address_count[256]) / static_cast<double>(h.total_addresses) ==
          doctest::Approx(256.0 / 259.0));
    CHECK(h.cumulative_prefix_share[256] == 1.0);
    CHECK(h.cumulative_address_share[2] == 0.0);
    CHECK(h.cumulative_address_share[3] == doctest::Approx(3.0 / 259.0));
}

TEST_CASE("histogram for the planted 978x8 + 22x256 corpus") {
    PrefixTable t(tcp(443));
    for (std::uint32_t i = 0; i < 978; ++i) {
        for (const auto a : host_range(Slash24{0x0A0000u + i}, 0, 7)) t.add(a);
    }
    for (std::uint32_t i = 0; i < 22; ++i) {
        for (const auto a : host_range(Slash24{0x0B0000u + i}, 0, 255)) t.add(a);
    }
    const auto stats = classify(t, kDefaultThreshold);
    // Oracle: brute-force sums over the construction.
    std::size_t total = 0, hrp = 0;
    for (int i = 0; i < 978; ++i) total += 8;
    for (int i = 0; i < 22; ++i) {
        total += 256;
        hrp += 256;
    }
    REQUIRE(total == 13456);
    REQUIRE(hrp == 5632);
    const auto h = responsiveness_histogram(stats);
    CHECK(h.total_addresses == total);
    CHECK(h.addresses_at_or_above(231) == hrp);
    CHECK(hrp_address_share(stats) == doctest::Approx(5632.0 / 13456.0));
    CHECK(hrp_address_share(stats) == doctest::Approx(0.4186).epsilon(1e-4));
}

TEST_CASE("single prefix histogram and empty input") {
    PrefixTable t(tcp(443));
    t.add(ip("10.0.0.1"));
    const auto h = responsiveness_histogram(classify(t, kDefaultThreshold));
    CHECK(h.cumulative_prefix_share[1] == 1.0);
    CHECK(h.cumulative_address_share[1] == 1.0);
    const auto empty = responsiveness_histogram({});
    CHECK(empty.total_prefixes == 0);
    CHECK(empty.total_addresses == 0);
    CHECK(empty.cumulative_address_share[256] == 0.0);
}

TEST_CASE("hrp_address_share edge cases") {
    PrefixTable t(tcp(80));
    for (const auto a : host_range(net("10.0.0.0/24"), 0, 255)) t.add(a);
    // 744 scattered addresses: 8 per prefix across 93 non-HRP prefixes.
    for (std::uint32_t i = 0; i < 93; ++i) {
        for (const auto a : host_range(Slash24{0x0C0000u + i}, 0, 7)) t.add(a);
    }
    CHECK(t.total_addresses() == 1000);
    CHECK(hrp_address_share(classify(t, kDefaultThreshold)) == doctest::Approx(0.256));

    PrefixTable none(tcp(80));
    none.add(ip("10.0.0.1"));
    CHECK(hrp_address_share(classify(none, kDefaultThreshold)) == 0.0);
    CHECK(hrp_address_share({}) == 0.0);

    PrefixTable all(tcp(80));
    for (const auto a : host_range(net("10.0.0.0/24"), 0, 240)) all.add(a);
    CHECK(hrp_address_share(classify(all, kDefaultThreshold)) == 1.0);
}

TEST_CASE("property: sharded aggregation equals a hash-set oracle") {
    std::mt19937_64 rng(7);
    for (int round = 0; round < 50; ++round) {
        const auto addrs = clustered_addresses(rng, 2000, 1 + rng() % 20);
        const auto meta = tcp(443);
        const std::size_t shards = 1 + rng() % 5;
        std::vector<std::vector<Ipv4Address>> parts(shards);
        for (const auto a : addrs) parts[rng() % shards].push_back(a);
        PrefixTable merged(meta);
        for (const auto& part : parts) merged = merge(merged, aggregate(part, meta));
        CHECK(merged == aggregate(addrs, meta));

        std::unordered_set<std::uint32_t> distinct;
        std::map<std::uint32_t, unsigned> per_prefix;
        for (const auto a : addrs) {
            if (distinct.insert(a.value).second) ++per_prefix[a.value >> 8];
        }
        CHECK(merged.total_addresses() == distinct.size());
        for (const auto& [p, n] : per_prefix) CHECK(merged.count(Slash24{p}) == n);

        // merge laws
        const auto a = aggregate(parts[0], meta);
        const auto b = aggregate(parts.back(), meta);
        CHECK(merge(a, b) == merge(b, a));
        CHECK(merge(a, a) == a);
        CHECK(merge(merge(a, b), merged) == merge(a, merge(b, merged)));
    }
}

TEST_CASE("property: HRP set shrinks as the threshold grows") {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 30; ++round) {
        const auto t = aggregate(clustered_addresses(rng, 5000, 1 + rng() % 15), tcp(443));
        const double f1 = 0.5 + 0.5 * static_cast<double>(rng() % 1000) / 1000.0;
        const double f2 = std::min(1.0, f1 + 0.5 * static_cast<double>(rng() % 1000) / 1000.0);
        const auto low = hrp_set(classify(t, HrpThreshold::from_fraction(f1)));
        const auto high = hrp_set(classify(t, HrpThreshold::from_fraction(f2)));
        CHECK(std::includes(low.begin(), low.end(), high.begin(), high.end()));
    }
}
