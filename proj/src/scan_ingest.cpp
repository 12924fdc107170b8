#include "hrp/scan_ingest.hpp"

#include "hrp/errors.hpp"

namespace hrp {

std::optional<ScanFormat> parse_scan_format(std::string_view text) noexcept {
    if (text == "plain") return ScanFormat::plain;
    if (text == "csv_saddr") return ScanFormat::csv_saddr;
    return std::nullopt;
}

std::optional<ErrorPolicy> parse_error_policy(std::string_view text) noexcept {
    if (text == "strict") return ErrorPolicy::strict;
    if (text == "lenient") return ErrorPolicy::lenient;
    return std::nullopt;
}

namespace {

std::string_view csv_field(std::string_view line, std::size_t column) noexcept {
    for (std::size_t i = 0; i < column; ++i) {
        const auto comma = line.find(',');
        if (comma == std::string_view::npos) return {};
        line.remove_prefix(comma + 1);
    }
    return line.substr(0, line.find(','));
}

bool is_comment(std::string_view trimmed) noexcept {
    return !trimmed.empty() && trimmed.front() == '#';
}

}  // namespace

std::optional<std::size_t> find_saddr_column(std::string_view header) noexcept {
    std::size_t column = 0;
    while (true) {
        const auto comma = header.find(',');
        auto name = trim(header.substr(0, comma));
        if (name.size() >= 2 && name.front() == '"' && name.back() == '"') name = name.substr(1, name.size() - 2);
        if (name == "saddr") return column;
        if (comma == std::string_view::npos) return std::nullopt;
        header.remove_prefix(comma + 1);
        ++column;
    }
}

std::optional<Ipv4Address> parse_address_line(std::string_view line, ScanFormat format,
                                              std::size_t saddr_column) noexcept {
    if (format == ScanFormat::csv_saddr) line = csv_field(line, saddr_column);
    return Ipv4Address::parse(trim(line));
}

ScanReader::ScanReader(std::istream& in, ScanFormat format, ErrorPolicy policy)
    : in_(&in), format_(format), policy_(policy) {}

std::optional<Ipv4Address> ScanReader::next() {
    while (std::getline(*in_, line_)) {
        ++stats_.lines_read;
        const auto trimmed = trim(line_);
        if (is_comment(trimmed)) {
            ++stats_.comment_lines;
            continue;
        }
        if (format_ == ScanFormat::csv_saddr && !saddr_column_) {
            saddr_column_ = find_saddr_column(trimmed);
            if (!saddr_column_) throw IngestError(stats_.lines_read, "csv header lacks an 'saddr' column");
            ++stats_.comment_lines;
            continue;
        }
        if (auto addr = parse_address_line(trimmed, format_, saddr_column_.value_or(0))) {
            ++stats_.addresses_emitted;
            return addr;
        }
        if (policy_ == ErrorPolicy::strict) {
            throw IngestError(stats_.lines_read, "invalid address line '" + std::string(trimmed) + "'");
        }
        ++stats_.invalid_lines;
    }
    if (in_->bad()) throw IoError("read failure after line " + std::to_string(stats_.lines_read));
    return std::nullopt;
}

ScanFile::ScanFile(const std::string& path, ScanFormat format, ErrorPolicy policy)
    : stream_(std::make_unique<std::ifstream>(path)) {
    if (!*stream_) throw IoError("cannot open scan file '" + path + "'");
    reader_ = std::make_unique<ScanReader>(*stream_, format, policy);
}

IngestResult read_all_addresses(std::istream& in, ScanFormat format, ErrorPolicy policy) {
    ScanReader reader(in, format, policy);
    IngestResult result;
    while (auto a = reader.next()) result.addresses.push_back(*a);
    result.stats = reader.stats();
    return result;
}

}  // namespace hrp
