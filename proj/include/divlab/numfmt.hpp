#pragma once

#include <charconv>
#include <cstdio>
#include <string>
#include <system_error>

namespace divlab {

/// Shortest decimal string that round-trips to the same double.
inline std::string to_shortest(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

/// Fixed significant-digit formatting (printf %g style).
inline std::string format_sig(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return std::string(buf);
}

} // namespace divlab
