#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hrp/prefix.hpp"
#include "hrp/report.hpp"

namespace hrp {

/// One scan's classified prefixes.
struct ClassifiedScan {
    ScanMeta meta;
    std::vector<PrefixStat> stats;
};

ClassifiedScan make_classified_scan(const PrefixTable& table, const HrpThreshold& threshold);

// ---- cross-port -------------------------------------------------------------

struct PortProfile {
    Slash24 prefix;
    std::size_t ports_responsive = 0;
    std::size_t ports_hrp = 0;

    friend bool operator==(const PortProfile&, const PortProfile&) = default;
};

struct PortMatrix {
    std::size_t port_count = 0;  // the supplied services form the universe
    std::vector<PortProfile> profiles;
    /// Index k = number of prefixes responsive (resp. HRP) on exactly k services.
    std::vector<std::size_t> responsive_histogram;
    std::vector<std::size_t> hrp_histogram;

    /// Prefixes that are an HRP on at least one service.
    std::size_t distinct_hrps() const noexcept;
    /// Fraction of distinct HRPs that are HRPs on exactly `k` services.
    double hrp_share_on_exactly(std::size_t k) const noexcept;
};

/// Throws UsageError for an empty list or a repeated service.
PortMatrix port_profile(std::span<const ClassifiedScan> per_port);

Json port_matrix_to_json(const PortMatrix& m);

// ---- temporal ---------------------------------------------------------------

struct StabilityPoint {
    std::string scan_id;
    std::optional<Timestamp> timestamp;
    double hrp_address_share_90 = 0.0;
    double hrp_address_share_95 = 0.0;
    std::size_t hrp_count = 0;     // HRPs at 0.90
    std::size_t hrp_count_95 = 0;  // HRPs at 0.95

    friend bool operator==(const StabilityPoint&, const StabilityPoint&) = default;
};

/// Reclassifies every scan's counts at 0.90 and 0.95. Throws UsageError when
/// services differ or timestamps decrease.
std::vector<StabilityPoint> stability_series(std::span<const ClassifiedScan> scans);

struct PrefixPersistence {
    Slash24 prefix;
    std::size_t scans_classified = 0;  // scans where is_hrp
    std::size_t scans_visible = 0;     // scans with count >= 1

    friend bool operator==(const PrefixPersistence&, const PrefixPersistence&) = default;
};

struct PersistenceSummary {
    std::size_t total_scans = 0;
    std::size_t missing_n = 5;
    std::size_t half_period = 0;  // ceil(total_scans / 2)
    std::size_t distinct_hrps = 0;
    std::vector<PrefixPersistence> per_prefix;  // distinct HRPs, ascending prefix
    /// HRP in at least half_period scans.
    std::size_t half_period_count = 0;
    /// HRP in at least half_period scans and visible in every scan.
    std::size_t half_period_always_visible_count = 0;
    /// HRP in every scan.
    std::size_t always_classified_count = 0;
    /// HRPs missing the classification in at most missing_n scans.
    std::size_t missing_at_most_n_count = 0;
    double missing_at_most_n_share = 0.0;
};

/// Uses each stat's own is_hrp flag. Requires at least two scans of one service.
PersistenceSummary persistence(std::span<const ClassifiedScan> scans, std::size_t missing_n = 5);

Json stability_to_json(std::span<const StabilityPoint> series);
void write_stability_csv(std::ostream& out, std::span<const StabilityPoint> series);
Json persistence_to_json(const PersistenceSummary& p, bool include_per_prefix = false);

// ---- vantage points ---------------------------------------------------------

struct VantageDiff {
    std::vector<Slash24> only_a;
    std::vector<Slash24> only_b;
    std::vector<Slash24> both;
    double divergence = 0.0;  // |only_a ∪ only_b| / |a ∪ b|, 0 when both are empty
};

/// Inputs need not be sorted or unique.
VantageDiff vantage_diff(std::vector<Slash24> a, std::vector<Slash24> b);

Json vantage_to_json(const VantageDiff& d, bool include_sets = true);

}  // namespace hrp
