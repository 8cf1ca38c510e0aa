#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pathloss/errors.hpp"

namespace pathloss {

// Locale-independent number formatting. to_chars emits the shortest string
// that round-trips, which keeps CSV and model files byte-stable.
inline std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

inline double parse_double(std::string_view s, const std::string& what) {
    double v = 0;
    // skip leading spaces; from_chars accepts none
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos)
        throw DataError("empty numeric field in " + what);
    std::size_t e = s.find_last_not_of(" \t\r");
    auto sub = s.substr(b, e - b + 1);
    auto [p, ec] = std::from_chars(sub.data(), sub.data() + sub.size(), v);
    if (ec != std::errc() || p != sub.data() + sub.size())
        throw DataError("bad numeric value '" + std::string(s) + "' in " + what);
    return v;
}

inline long parse_long(std::string_view s, const std::string& what) {
    long v = 0;
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos)
        throw DataError("empty integer field in " + what);
    std::size_t e = s.find_last_not_of(" \t\r");
    auto sub = s.substr(b, e - b + 1);
    auto [p, ec] = std::from_chars(sub.data(), sub.data() + sub.size(), v);
    if (ec != std::errc() || p != sub.data() + sub.size())
        throw DataError("bad integer value '" + std::string(s) + "' in " + what);
    return v;
}

inline std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(line.substr(start));
            break;
        }
        out.emplace_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    if (!out.empty() && !out.back().empty() && out.back().back() == '\r')
        out.back().pop_back();
    return out;
}

inline std::string trim(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out << text;
}

} // namespace pathloss
