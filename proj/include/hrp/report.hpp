#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace hrp {

using Json = nlohmann::ordered_json;

/// Rationals in every report are printed with exactly six fractional digits.
std::string format_fixed(double value);

/// Serializes `value` with two-space indentation, floating-point numbers in
/// fixed six-digit form, and a trailing newline.
std::string dump_report(const Json& value);

/// Single-line variant used for JSON-lines output (trailing newline included).
std::string dump_line(const Json& value);

/// Splits a comma-separated line. Fields are trimmed; no quoting is supported.
std::vector<std::string_view> split_csv(std::string_view line);

/// Reads the next non-blank, non-comment line. Returns false at end of input.
bool next_record_line(std::istream& in, std::string& line, std::size_t& line_number);

std::optional<unsigned long long> parse_unsigned(std::string_view text) noexcept;

/// Null when the optional is empty.
inline Json optional_number(const std::optional<double>& v) {
    return v ? Json(*v) : Json(nullptr);
}

}  // namespace hrp
