#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace cellinj {

/// Shortest representation that parses back to the same double. Locale independent.
inline std::string format_shortest(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

/// %.17g-style output (17 significant digits). Locale independent.
inline std::string format_sig17(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

}  // namespace cellinj
