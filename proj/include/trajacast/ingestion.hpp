#pragma once

#include "trajacast/series.hpp"

#include <cstddef>
#include <filesystem>
#include <string>

namespace trajacast {

struct ColumnMap {
    std::string timestamp_column = "timestamp";
    std::string flow_column = "flow";
    std::string time_format;   ///< empty: auto-detect ISO-8601 / MM/DD/YYYY
    std::string missing_token; ///< extra sentinel besides the empty cell
};

/// Reads a headered CSV. Rows whose timestamp cannot be parsed are skipped;
/// unparseable, negative, or sentinel flow cells become missing. The cadence
/// is the smallest gap between consecutive timestamps.
RawSeries parse_csv(const std::filesystem::path& path, const ColumnMap& columns);

/// Sums non-overlapping 3-tuples of 5-minute slots into 15-minute slots.
/// Absent timestamps count as missing; the leading partial tuple (before the
/// first 15-minute boundary) and the trailing partial tuple are dropped.
RawSeries aggregate_15min(const RawSeries& raw);

struct ImputationReport {
    std::size_t previous_week = 0;   ///< slots filled from one week earlier
    std::size_t three_week_mean = 0; ///< slots filled with the 3-week donor mean
    std::size_t total() const { return previous_week + three_week_mean; }
};

struct ImputationResult {
    TimeSeries series;
    ImputationReport report;
};

/// Gap shorter than one hour (<= 3 slots) gets the value one week earlier;
/// longer gaps get the mean of the values 1, 2 and 3 weeks earlier. Gaps are
/// filled in chronological order so imputed values may serve as donors.
ImputationResult impute_missing_with_report(const RawSeries& raw);

TimeSeries impute_missing(const RawSeries& raw);

/// Canonical series file: `timestamp,flow` header, ISO-8601 timestamps.
void write_series_csv(const std::filesystem::path& path, const TimeSeries& ts);
TimeSeries read_series_csv(const std::filesystem::path& path);

} // namespace trajacast
