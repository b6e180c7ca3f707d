#pragma once

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace trajacast::detail {

inline std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> parts;
    std::size_t begin = 0;
    while (true) {
        const auto pos = text.find(sep, begin);
        parts.emplace_back(text.substr(begin, pos == std::string_view::npos ? std::string_view::npos : pos - begin));
        if (pos == std::string_view::npos) {
            break;
        }
        begin = pos + 1;
    }
    return parts;
}

inline std::string trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return std::string(s);
}

inline double parse_number(std::string_view token, std::string_view context) {
    double v = 0.0;
    const auto* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
        throw std::invalid_argument("bad number '" + std::string(token) + "' in '" + std::string(context) + "'");
    }
    return v;
}

inline std::size_t parse_count(std::string_view token, std::string_view context) {
    std::size_t v = 0;
    const auto* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        throw std::invalid_argument("bad integer '" + std::string(token) + "' in '" + std::string(context) + "'");
    }
    return v;
}

} // namespace trajacast::detail
