#include "trajacast/calendar.hpp"

#include <array>
#include <ctime>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace trajacast {
namespace {

bool try_parse(std::string_view text, std::string_view format, Timestamp& out) {
    std::tm tm{};
    std::istringstream in{std::string(text)};
    in >> std::get_time(&tm, std::string(format).c_str());
    if (in.fail()) {
        return false;
    }
    in >> std::ws;
    if (!in.eof()) {
        return false;
    }
    using namespace std::chrono;
    const year_month_day ymd{year{tm.tm_year + 1900}, month{static_cast<unsigned>(tm.tm_mon + 1)},
                             day{static_cast<unsigned>(tm.tm_mday)}};
    if (!ymd.ok() || tm.tm_hour > 23 || tm.tm_min > 59) {
        return false;
    }
    out = time_point_cast<minutes>(sys_days{ymd}) + hours{tm.tm_hour} + minutes{tm.tm_min};
    return true;
}

constexpr std::array<std::string_view, 6> kAutoFormats{
    "%Y-%m-%dT%H:%M:%S", "%Y-%m-%d %H:%M:%S", "%m/%d/%Y %H:%M:%S",
    "%Y-%m-%dT%H:%M",    "%Y-%m-%d %H:%M",    "%Y-%m-%d",
};

} // namespace

Timestamp parse_timestamp(std::string_view text, std::string_view format) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '"')) {
        text.remove_prefix(1);
    }
    while (!text.empty() && (text.back() == ' ' || text.back() == '"' || text.back() == '\r')) {
        text.remove_suffix(1);
    }
    Timestamp t{};
    if (!format.empty()) {
        if (try_parse(text, format, t)) {
            return t;
        }
    } else {
        for (auto f : kAutoFormats) {
            if (try_parse(text, f, t)) {
                return t;
            }
        }
    }
    throw std::invalid_argument("unparseable timestamp '" + std::string(text) + "'");
}

std::string format_timestamp(Timestamp t) {
    using namespace std::chrono;
    const auto day_start = floor<days>(t);
    const year_month_day ymd{day_start};
    const auto mins = (t - day_start).count();
    std::ostringstream out;
    out << std::setfill('0') << std::setw(4) << static_cast<int>(ymd.year()) << '-' << std::setw(2)
        << static_cast<unsigned>(ymd.month()) << '-' << std::setw(2) << static_cast<unsigned>(ymd.day())
        << 'T' << std::setw(2) << mins / 60 << ':' << std::setw(2) << mins % 60 << ":00";
    return out.str();
}

int minute_of_day(Timestamp t) {
    using namespace std::chrono;
    return static_cast<int>((t - floor<days>(t)).count());
}

} // namespace trajacast
