#pragma once

#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "hrp/prefix.hpp"
#include "hrp/report.hpp"

namespace hrp {

// PrefixStat exchange format. CSV columns:
//   prefix,port,proto,count,is_hrp,threshold_fraction,origin_asn,covering_prefix
// Unset optionals are empty fields. The JSON-lines form uses the same names.

inline constexpr const char* kStatsCsvHeader =
    "prefix,port,proto,count,is_hrp,threshold_fraction,origin_asn,covering_prefix";

void write_stats_csv(std::ostream& out, std::span<const PrefixStat> stats);
void write_stats_jsonl(std::ostream& out, std::span<const PrefixStat> stats);
Json stat_to_json(const PrefixStat& s);

/// Reads a stats CSV (header required). Rows must agree on port and protocol.
/// Malformed rows raise IngestError; `scan_id` is stored in every row's meta.
std::vector<PrefixStat> read_stats_csv(std::istream& in, const std::string& scan_id = "scan");
std::vector<PrefixStat> read_stats_csv_file(const std::string& path);

/// CSV export of the responsiveness histogram, one row per count 1..256.
void write_histogram_csv(std::ostream& out, const ResponsivenessHistogram& h);
Json histogram_to_json(const ResponsivenessHistogram& h);

}  // namespace hrp
