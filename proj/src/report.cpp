#include "hrp/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "hrp/ipv4.hpp"

namespace hrp {

std::string format_fixed(double value) {
    if (!std::isfinite(value)) return "null";
    if (value == 0.0) value = 0.0;  // normalizes -0.0
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", value);
    return buf;
}

namespace {

void write_json(const Json& v, std::string& out, int indent, int depth) {
    const auto newline = [&](int d) {
        if (indent < 0) return;
        out += '\n';
        out.append(static_cast<std::size_t>(d * indent), ' ');
    };
    switch (v.type()) {
        case Json::value_t::object: {
            if (v.empty()) {
                out += "{}";
                return;
            }
            out += '{';
            bool first = true;
            for (const auto& [key, item] : v.items()) {
                if (!first) out += indent < 0 ? ", " : ",";
                first = false;
                newline(depth + 1);
                out += Json(key).dump();
                out += ": ";
                write_json(item, out, indent, depth + 1);
            }
            newline(depth);
            out += '}';
            return;
        }
        case Json::value_t::array: {
            if (v.empty()) {
                out += "[]";
                return;
            }
            out += '[';
            bool first = true;
            for (const auto& item : v) {
                if (!first) out += indent < 0 ? ", " : ",";
                first = false;
                newline(depth + 1);
                write_json(item, out, indent, depth + 1);
            }
            newline(depth);
            out += ']';
            return;
        }
        case Json::value_t::number_float:
            out += format_fixed(v.get<double>());
            return;
        default:
            out += v.dump();
            return;
    }
}

}  // namespace

std::string dump_report(const Json& value) {
    std::string out;
    write_json(value, out, 2, 0);
    out += '\n';
    return out;
}

std::string dump_line(const Json& value) {
    std::string out;
    write_json(value, out, -1, 0);
    out += '\n';
    return out;
}

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> fields;
    while (true) {
        const auto comma = line.find(',');
        fields.push_back(trim(line.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        line.remove_prefix(comma + 1);
    }
    return fields;
}

bool next_record_line(std::istream& in, std::string& line, std::size_t& line_number) {
    while (std::getline(in, line)) {
        ++line_number;
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        return true;
    }
    return false;
}

std::optional<unsigned long long> parse_unsigned(std::string_view text) noexcept {
    unsigned long long v = 0;
    if (text.empty()) return std::nullopt;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
    return v;
}

}  // namespace hrp
