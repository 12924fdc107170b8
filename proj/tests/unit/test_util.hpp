#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hrp/ipv4.hpp"
#include "hrp/prefix.hpp"

namespace hrp::testing {

inline Ipv4Address ip(const char* text) {
    return *Ipv4Address::parse(text);
}

inline Slash24 net(const char* text) {
    return *Slash24::parse(text);
}

inline ScanMeta tcp(int port, std::string id = "scan") {
    return ScanMeta::make(Protocol::tcp, port, std::move(id));
}

/// All host bytes in [first, last] of `prefix`.
inline std::vector<Ipv4Address> host_range(Slash24 prefix, unsigned first, unsigned last) {
    std::vector<Ipv4Address> out;
    for (unsigned h = first; h <= last; ++h) out.push_back(prefix.host(static_cast<std::uint8_t>(h)));
    return out;
}

/// Random addresses clustered in a small pool of /24s so that some prefixes fill up.
inline std::vector<Ipv4Address> clustered_addresses(std::mt19937_64& rng, std::size_t n, std::size_t prefixes) {
    std::vector<std::uint32_t> pool(prefixes);
    for (auto& p : pool) p = static_cast<std::uint32_t>(rng() & 0xFFFFFFu);
    std::vector<Ipv4Address> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto p = pool[rng() % pool.size()];
        out.emplace_back((p << 8) | static_cast<std::uint32_t>(rng() & 0xFFu));
    }
    return out;
}

inline std::filesystem::path temp_dir() {
    std::filesystem::path dir(HRP_TEST_TMPDIR);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string write_file(const std::string& name, const std::string& content) {
    const auto path = temp_dir() / name;
    std::ofstream(path, std::ios::binary | std::ios::trunc) << content;
    return path.string();
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace hrp::testing
