#pragma once

#include <cstddef>
#include <fstream>
#include <istream>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hrp/ipv4.hpp"

namespace hrp {

enum class ScanFormat { plain, csv_saddr };
enum class ErrorPolicy { strict, lenient };

std::optional<ScanFormat> parse_scan_format(std::string_view text) noexcept;
std::optional<ErrorPolicy> parse_error_policy(std::string_view text) noexcept;

/// Line accounting for one scan source.
/// lines_read == addresses_emitted + invalid_lines + comment_lines always holds;
/// the csv_saddr header row is accounted as a comment line.
struct IngestStats {
    std::size_t lines_read = 0;
    std::size_t addresses_emitted = 0;
    std::size_t invalid_lines = 0;
    std::size_t comment_lines = 0;

    IngestStats& operator+=(const IngestStats& o) noexcept {
        lines_read += o.lines_read;
        addresses_emitted += o.addresses_emitted;
        invalid_lines += o.invalid_lines;
        comment_lines += o.comment_lines;
        return *this;
    }
    friend bool operator==(const IngestStats&, const IngestStats&) = default;
};

/// Parses the address of a single data line. For csv_saddr, `saddr_column`
/// is the index of the "saddr" column found in the header.
std::optional<Ipv4Address> parse_address_line(std::string_view line, ScanFormat format,
                                              std::size_t saddr_column = 0) noexcept;

/// Finds the "saddr" column of a csv_saddr header row.
std::optional<std::size_t> find_saddr_column(std::string_view header) noexcept;

/// Single-pass reader yielding addresses in file order.
///
/// Lines starting with '#' are comments. Under the strict policy the first
/// invalid line raises IngestError carrying its 1-based line number; under
/// lenient it is skipped and counted. Duplicates are passed through.
class ScanReader {
public:
    ScanReader(std::istream& in, ScanFormat format, ErrorPolicy policy = ErrorPolicy::lenient);

    std::optional<Ipv4Address> next();
    const IngestStats& stats() const noexcept { return stats_; }

private:
    std::istream* in_;
    ScanFormat format_;
    ErrorPolicy policy_;
    std::optional<std::size_t> saddr_column_;
    std::string line_;
    IngestStats stats_;
};

/// Owns the file stream behind a ScanReader. Throws IoError when the path cannot be opened.
class ScanFile {
public:
    ScanFile(const std::string& path, ScanFormat format, ErrorPolicy policy = ErrorPolicy::lenient);

    ScanReader& reader() noexcept { return *reader_; }

private:
    std::unique_ptr<std::ifstream> stream_;
    std::unique_ptr<ScanReader> reader_;
};

struct IngestResult {
    std::vector<Ipv4Address> addresses;
    IngestStats stats;
};

IngestResult read_all_addresses(std::istream& in, ScanFormat format, ErrorPolicy policy = ErrorPolicy::lenient);

}  // namespace hrp
