#pragma once

#include <array>
#include <cstddef>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hrp/prefix.hpp"
#include "hrp/report.hpp"

namespace hrp {

enum class AppStatus { success, app_error, unreachable };

std::string_view to_string(AppStatus s) noexcept;
std::optional<AppStatus> parse_app_status(std::string_view text) noexcept;

/// Outcome of one application-layer handshake. The identifier (certificate
/// or body hash) is only present on successes.
struct AppResult {
    Ipv4Address target;
    ScanMeta meta;
    AppStatus status = AppStatus::unreachable;
    std::optional<std::string> identifier;

    /// Throws UsageError when an identifier accompanies a non-success.
    static AppResult make(Ipv4Address target, ScanMeta meta, AppStatus status,
                          std::optional<std::string> identifier = std::nullopt);

    bool succeeded() const noexcept { return status == AppStatus::success; }
};

// CSV: ip,port,proto,status,identifier (identifier empty when absent).
inline constexpr const char* kAppResultsCsvHeader = "ip,port,proto,status,identifier";

std::vector<AppResult> read_app_results(std::istream& in);
std::vector<AppResult> read_app_results_file(const std::string& path);
void write_app_results(std::ostream& out, std::span<const AppResult> results);

struct AppLayerOptions {
    /// Drop app_error outcomes (e.g. TLS alerts for a missing SNI) from every
    /// denominator instead of counting them as failures.
    bool exclude_app_errors = false;
};

struct HrpAppReport {
    Slash24 prefix;
    std::size_t denominator = 0;  // previously responsive addresses
    std::size_t success_count = 0;
    double success_fraction = 0.0;
    bool any_success = false;
    bool gt90_success = false;     // success_count / denominator > 0.90, compared exactly
    bool same_identifier = false;  // >= 1 success, each carrying the same identifier
    double dominant_identifier_share = 0.0;
    std::size_t distinct_identifiers = 0;
};

/// Exact test for success / denominator > 9/10.
constexpr bool exceeds_ninety_percent(std::size_t success, std::size_t denominator) noexcept {
    return success * 10 > denominator * 9;
}

struct HrpAppReports {
    std::vector<HrpAppReport> reports;  // one per HRP present in the occupancy table, ascending
    std::size_t anomalies = 0;          // results whose target has no occupancy bit
    std::size_t duplicates = 0;         // repeated targets; first outcome kept
    std::size_t non_hrp_results = 0;
    std::size_t hrp_results = 0;
    std::size_t excluded_app_errors = 0;
};

/// Joins results with the port scan that preceded them. Throws UsageError
/// when a result's service differs from the occupancy table's.
HrpAppReports hrp_app_report(std::span<const AppResult> results, std::span<const Slash24> hrps,
                             const PrefixTable& occupancy, const AppLayerOptions& options = {});

/// Prefix-level roll-up of the per-HRP reports.
struct HrpAppSummary {
    std::size_t hrps = 0;
    std::size_t any_success = 0;
    std::size_t gt90_success = 0;
    std::size_t same_identifier = 0;
    std::size_t same_identifier_gt90 = 0;
    std::optional<double> same_identifier_share_of_gt90;
};

HrpAppSummary summarize(std::span<const HrpAppReport> reports);

/// Address-level comparison; rates are empty (undefined) when their partition is empty.
struct AddressComparison {
    std::size_t non_hrp_results = 0;
    std::size_t non_hrp_successes = 0;
    std::size_t hrp_results = 0;
    std::size_t hrp_successes = 0;
    std::size_t gt90_successes = 0;
    std::size_t gt90_same_identifier_successes = 0;
    std::size_t anomalies = 0;
    std::optional<double> non_hrp_success_rate;
    std::optional<double> hrp_success_rate;
    std::optional<double> gt90_subset_share;           // HRP successes inside >90% prefixes
    std::optional<double> gt90_same_identifier_share;  // of those, inside same-identifier prefixes
};

AddressComparison address_comparison(std::span<const AppResult> results, std::span<const Slash24> hrps,
                                     const PrefixTable& occupancy, const AppLayerOptions& options = {});

/// cdf[c] = share of reports with success_count <= c, for c in 0..256.
/// All zeros for an empty input.
std::array<double, kSlash24Size + 1> success_cdf(std::span<const HrpAppReport> reports);

Json app_reports_to_json(const HrpAppReports& r, bool include_prefixes = true);
Json app_summary_to_json(const HrpAppSummary& s);
Json address_comparison_to_json(const AddressComparison& c);
void write_success_cdf_csv(std::ostream& out, const std::array<double, kSlash24Size + 1>& cdf);

}  // namespace hrp
