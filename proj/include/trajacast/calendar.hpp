#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace trajacast {

/// Wall-clock instant at minute resolution. Station data carries no time zone,
/// so timestamps are treated as naive civil time on the system clock.
using Timestamp = std::chrono::sys_time<std::chrono::minutes>;

inline constexpr int kSlotMinutes = 15;
inline constexpr int kSlotsPerDay = 24 * 60 / kSlotMinutes;
inline constexpr int kSlotsPerWeek = 7 * kSlotsPerDay;

/// Parses `text` with a strftime-style `format` (%Y %m %d %H %M %S and literals).
/// An empty format tries ISO-8601 (`T` or space separated) and `MM/DD/YYYY HH:MM:SS`.
/// Throws std::invalid_argument when nothing matches.
Timestamp parse_timestamp(std::string_view text, std::string_view format = {});

/// ISO-8601 `YYYY-MM-DDTHH:MM:SS`.
std::string format_timestamp(Timestamp t);

int minute_of_day(Timestamp t);

/// 15-minute slot within the day, in [0, 95].
inline int slot_of_day(Timestamp t) { return minute_of_day(t) / kSlotMinutes; }

} // namespace trajacast
