#pragma once

#include "trajacast/calendar.hpp"

#include <chrono>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace trajacast {

struct RawRecord {
    Timestamp time;
    std::optional<double> flow; ///< nullopt is the missing-marker
};

/// Timestamped flow observations as read from disk. Timestamps are strictly
/// increasing; absent cadence slots are read as missing by the aggregation step.
struct RawSeries {
    std::vector<RawRecord> records;
    std::chrono::minutes cadence{5};

    std::size_t missing_count() const;
};

/// Fixed 15-minute cadence flow series with no missing values.
///
/// Storage is 0-based; dataset-level APIs address it 1-based, so `at(i)` is x_i.
class TimeSeries {
public:
    TimeSeries(Timestamp start, std::vector<double> values);

    Timestamp start() const { return start_; }
    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }

    /// 1-based access, x_i.
    double at(std::size_t i) const { return values_[i - 1]; }

    /// Timestamp of 1-based index i.
    Timestamp time_at(std::size_t i) const;

    /// Slot-of-day (0..95) of the first observation.
    int start_slot() const { return slot_of_day(start_); }

    /// Slot-of-day of 1-based index i.
    int slot_at(std::size_t i) const;

    /// 1-based index of the first observation at or after `t` (size()+1 if none).
    std::size_t index_at_or_after(Timestamp t) const;

private:
    Timestamp start_;
    std::vector<double> values_;
};

/// Converts a clean series back into a 15-minute RawSeries.
RawSeries to_raw(const TimeSeries& ts);

} // namespace trajacast
