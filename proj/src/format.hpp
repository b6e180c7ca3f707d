#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace trajacast::detail {

/// Shortest round-trip decimal form; identical on every run and platform.
inline std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

} // namespace trajacast::detail
