#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hrp/cli.hpp"
#include "hrp/prefix_io.hpp"
#include "test_util.hpp"

using namespace hrp;
using namespace hrp::testing;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome hrp_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "hrp");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string addresses(Slash24 p, unsigned first, unsigned last) {
    std::string s;
    for (const auto a : host_range(p, first, last)) s += a.to_string() + "\n";
    return s;
}

}  // namespace

TEST_CASE("detect writes stats CSV and a summary line") {
    const auto scan = write_file("cli_scan.txt", addresses(net("10.0.0.0/24"), 0, 230) + "10.0.1.5\n");
    const auto r = hrp_cli({"detect", scan, "--port", "443", "--scan-id", "s1"});
    CHECK(r.code == 0);
    CHECK(r.out ==
          std::string(kStatsCsvHeader) + "\n10.0.0.0/24,443,tcp,231,true,0.900000,,\n10.0.1.0/24,443,tcp,1,false,0.900000,,\n");
    const auto summary = nlohmann::json::parse(r.err);
    CHECK(summary["hrps"] == 1);
    CHECK(summary["prefixes"] == 2);
    CHECK(summary["min_count"] == 231);

    const auto strict = hrp_cli({"detect", scan, "--port", "443", "--threshold", "0.95"});
    CHECK(strict.out.find("231,false,0.950000") != std::string::npos);
}

TEST_CASE("shards give the same stats as one file") {
    const Slash24 p = net("10.0.0.0/24");
    const auto whole = write_file("cli_whole.txt", addresses(p, 0, 255));
    const auto a = write_file("cli_a.txt", addresses(p, 0, 140));
    const auto b = write_file("cli_b.txt", addresses(p, 100, 255));
    const auto one = hrp_cli({"detect", whole, "--port", "80", "--scan-id", "x"});
    const auto two = hrp_cli({"detect", a, b, "--port", "80", "--scan-id", "x"});
    CHECK(one.code == 0);
    CHECK(one.out == two.out);
}

TEST_CASE("detect exit codes") {
    const auto empty = write_file("cli_empty.txt", "");
    const auto e = hrp_cli({"detect", empty, "--port", "443"});
    CHECK(e.code == cli::kOk);
    CHECK(e.out == std::string(kStatsCsvHeader) + "\n");

    CHECK(hrp_cli({"detect", empty, "--port", "443", "--threshold", "1.5"}).code == cli::kUsage);
    CHECK(hrp_cli({"detect", empty}).code == cli::kUsage);
    CHECK(hrp_cli({"detect", empty, "--port", "443", "--proto", "sctp"}).code == cli::kUsage);
    CHECK(hrp_cli({}).code == cli::kUsage);

    const auto bad = write_file("cli_bad.txt", "10.0.0.1\nnot-an-ip\n");
    const auto strict = hrp_cli({"detect", bad, "--port", "443", "--policy", "strict"});
    CHECK(strict.code == cli::kIngest);
    CHECK(strict.err.find("line 2") != std::string::npos);
    CHECK(hrp_cli({"detect", bad, "--port", "443"}).code == cli::kOk);

    CHECK(hrp_cli({"detect", (temp_dir() / "missing.txt").string(), "--port", "443"}).code == cli::kIo);
}

TEST_CASE("reports end with a newline") {
    const auto s1 = write_file("cli_v1.csv", std::string(kStatsCsvHeader) + "\n10.0.0.0/24,443,tcp,256,true,0.9,,\n");
    const auto s2 = write_file("cli_v2.csv", std::string(kStatsCsvHeader) + "\n10.0.1.0/24,443,tcp,256,true,0.9,,\n");
    const auto r = hrp_cli({"vantage", s1, s2});
    CHECK(r.code == 0);
    REQUIRE_FALSE(r.out.empty());
    CHECK(r.out.back() == '\n');
    CHECK(nlohmann::json::parse(r.out)["divergence"] == 1.0);
}

TEST_CASE("stability refuses scans of different services") {
    const auto a = write_file("cli_st_a.csv", std::string(kStatsCsvHeader) + "\n10.0.0.0/24,443,tcp,256,true,0.9,,\n");
    const auto b = write_file("cli_st_b.csv", std::string(kStatsCsvHeader) + "\n10.0.0.0/24,80,tcp,256,true,0.9,,\n");
    const auto r = hrp_cli({"stability", a, b});
    CHECK(r.code == cli::kUsage);
    CHECK(r.err.find("tcp/443") != std::string::npos);
    CHECK(r.err.find("tcp/80") != std::string::npos);
    CHECK(hrp_cli({"stability", a, a}).code == cli::kOk);
}

TEST_CASE("plan, escalate and evaluate round trip") {
    const Slash24 hrp = net("10.0.0.0/24");
    const auto scan = write_file("cli_plan_scan.txt", addresses(hrp, 0, 255) + "10.0.7.1\n10.0.7.2\n");
    const auto stats = (temp_dir() / "cli_plan_stats.csv").string();
    REQUIRE(hrp_cli({"detect", scan, "--port", "443", "--output", stats}).code == 0);
    const auto seeds = write_file("cli_seeds.csv", "ip,name_count\n10.0.0.9,3\n");

    const auto plan_path = (temp_dir() / "cli_plan.csv").string();
    const auto p1 = hrp_cli({"plan", stats, seeds, "--scan", scan, "--rng-seed", "4", "--output", plan_path});
    REQUIRE(p1.code == 0);
    const auto first = read_file(plan_path);
    REQUIRE(hrp_cli({"plan", stats, seeds, "--scan", scan, "--rng-seed", "4", "--output", plan_path}).code == 0);
    CHECK(read_file(plan_path) == first);
    CHECK(first.find("10.0.0.9,10.0.0.0/24,sampled,dns_seed") != std::string::npos);
    CHECK(first.find("10.0.7.1,10.0.7.0/24,full,non_hrp_full") != std::string::npos);

    // Every responsive address answers with its own certificate: the HRP is diverse.
    std::string truth = "ip,port,proto,status,identifier\n";
    for (const auto a : host_range(hrp, 0, 255)) truth += a.to_string() + ",443,tcp,success,c" + std::to_string(a.host_byte()) + "\n";
    truth += "10.0.7.1,443,tcp,unreachable,\n10.0.7.2,443,tcp,success,z\n";
    const auto truth_path = write_file("cli_truth.csv", truth);

    const auto plain = hrp_cli({"evaluate", plan_path, truth_path});
    REQUIRE(plain.code == 0);
    const auto m = nlohmann::json::parse(plain.out)["metrics"];
    CHECK(m["handshakes_planned"] == 12);
    CHECK(m["handshakes_full_baseline"] == 258);
    CHECK(m["identifier_coverage"].get<double>() == doctest::Approx(11.0 / 257.0).epsilon(1e-5));

    const auto esc = hrp_cli({"evaluate", plan_path, truth_path, "--escalate"});
    REQUIRE(esc.code == 0);
    CHECK(nlohmann::json::parse(esc.out)["metrics"]["identifier_coverage"] == 1.0);

    const auto escalated = (temp_dir() / "cli_escalated.csv").string();
    const auto e = hrp_cli({"escalate", plan_path, truth_path, "--scan", scan, "--output", escalated});
    REQUIRE(e.code == 0);
    CHECK(read_file(escalated).find(",escalation") != std::string::npos);

    const auto mismatch = write_file("cli_other_scan.txt", "10.0.7.1\n");
    CHECK(hrp_cli({"plan", stats, "--scan", mismatch}).code == cli::kUsage);
}
