#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hrp/applayer.hpp"
#include "hrp/prefix.hpp"
#include "hrp/report.hpp"

namespace hrp {

/// An address known from DNS, with the number of names resolving to it.
struct DnsSeed {
    Ipv4Address address;
    std::size_t name_count = 1;

    friend bool operator==(const DnsSeed&, const DnsSeed&) = default;
};

/// Merges repeated addresses (name counts are summed) and sorts by address.
std::vector<DnsSeed> dedupe_seeds(std::vector<DnsSeed> seeds);

// Seeds CSV: "ip,name_count" with that header row.
std::vector<DnsSeed> read_seeds(std::istream& in);
std::vector<DnsSeed> read_seeds_file(const std::string& path);

struct SamplePolicy {
    std::size_t k = 10;
    std::uint64_t rng_seed = 0;
    double proxy_max_success = 0.10;
    double cdn_min_success = 0.90;
    /// Seeds that were not port-responsive still become dns_seed targets.
    bool include_unresponsive_seeds = true;

    /// Throws UsageError unless 1 <= k <= 256 and 0 <= proxy_max < cdn_min <= 1.
    void validate() const;
};

enum class Strategy { full, sampled };
enum class Provenance { non_hrp_full, dns_seed, uniform_fill, escalation };
enum class ScenarioClass { proxy, cdn_like, diverse };

std::string_view to_string(Strategy s) noexcept;
std::string_view to_string(Provenance p) noexcept;
std::string_view to_string(ScenarioClass c) noexcept;
std::optional<Strategy> parse_strategy(std::string_view text) noexcept;
std::optional<Provenance> parse_provenance(std::string_view text) noexcept;

struct PlannedTarget {
    Ipv4Address address;
    Provenance provenance = Provenance::non_hrp_full;

    friend bool operator==(const PlannedTarget&, const PlannedTarget&) = default;
};

struct PrefixPlan {
    Slash24 prefix;
    Strategy strategy = Strategy::full;
    std::vector<PlannedTarget> targets;

    friend bool operator==(const PrefixPlan&, const PrefixPlan&) = default;
};

struct TargetPlan {
    std::vector<PrefixPlan> prefixes;  // ascending prefix order

    std::size_t target_count() const noexcept;
    const PrefixPlan* find(Slash24 prefix) const noexcept;
    std::size_t count(Provenance p) const noexcept;

    friend bool operator==(const TargetPlan&, const TargetPlan&) = default;
};

/// Deterministic per-prefix random stream.
///
/// The stream seed is splitmix64(rng_seed ^ splitmix64(prefix)); draws come
/// from std::mt19937_64 (whose output sequence is fixed by the C++ standard)
/// and are reduced to a range by rejection sampling, so plans are identical
/// across platforms and independent of the order prefixes are processed in.
class SampleRng {
public:
    SampleRng(std::uint64_t rng_seed, Slash24 prefix);

    /// Uniform integer in [0, bound); bound must be > 0.
    std::uint64_t below(std::uint64_t bound);

    static std::uint64_t splitmix64(std::uint64_t x) noexcept;

private:
    std::mt19937_64 engine_;
};

/// Non-HRP prefixes are planned in full. Each HRP gets up to k targets:
/// DNS-seeded addresses first (most names first, then ascending address),
/// then a uniform sample without replacement of its remaining responsive
/// addresses.
TargetPlan build_plan(const PrefixTable& occupancy, std::span<const Slash24> hrps, std::span<const DnsSeed> seeds,
                      const SamplePolicy& policy);

/// Scenario of one sampled HRP; needs at least one result.
ScenarioClass classify_sample(std::span<const AppResult> sample_results, const SamplePolicy& policy);

/// Groups results by sampled prefix and classifies each prefix that has results.
std::map<Slash24, ScenarioClass> classify_samples(const TargetPlan& plan, std::span<const AppResult> results,
                                                  const SamplePolicy& policy);

/// Diverse prefixes gain every remaining responsive address (provenance
/// escalation) and switch to the full strategy. Throws UsageError for a
/// class whose prefix is not a sampled prefix of the plan.
TargetPlan escalate(const TargetPlan& plan, const std::map<Slash24, ScenarioClass>& classes,
                    const PrefixTable& occupancy);

struct PlanMetrics {
    std::size_t handshakes_planned = 0;
    std::size_t handshakes_full_baseline = 0;
    double reduction = 0.0;
    std::size_t identifiers_reached = 0;
    std::size_t identifiers_total = 0;
    double identifier_coverage = 1.0;  // 1 when the ground truth holds no identifiers
};

/// `truth` covers every responsive address. Throws UsageError when a planned
/// target is missing from it.
PlanMetrics evaluate_plan(const TargetPlan& plan, std::span<const AppResult> truth);

// Plan CSV: "ip,prefix,strategy,provenance".
inline constexpr const char* kPlanCsvHeader = "ip,prefix,strategy,provenance";

void write_plan_csv(std::ostream& out, const TargetPlan& plan);
void write_plan_ips(std::ostream& out, const TargetPlan& plan);
TargetPlan read_plan_csv(std::istream& in);
TargetPlan read_plan_csv_file(const std::string& path);

Json plan_summary_to_json(const TargetPlan& plan, const SamplePolicy& policy);
Json plan_metrics_to_json(const PlanMetrics& m);

/// The occupancy implied by a ground-truth result set: every target is a responsive address.
PrefixTable occupancy_from_results(std::span<const AppResult> truth);

}  // namespace hrp
