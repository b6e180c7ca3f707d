#include "trajacast/ingestion.hpp"

#include "format.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string_view>

namespace trajacast {
namespace {

constexpr std::size_t kShortGapLimit = 4; // gaps of fewer slots use the previous week

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (char c : line) {
        if (c == '"') {
            quoted = !quoted;
        } else if (c == ',' && !quoted) {
            cells.push_back(std::move(cell));
            cell.clear();
        } else if (c != '\r') {
            cell.push_back(c);
        }
    }
    cells.push_back(std::move(cell));
    return cells;
}

std::string trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
        s.remove_suffix(1);
    }
    return std::string(s);
}

std::optional<double> parse_flow(const std::string& cell, const std::string& missing_token) {
    const auto text = trim(cell);
    if (text.empty() || (!missing_token.empty() && text == missing_token)) {
        return std::nullopt;
    }
    double v = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v) || v < 0.0) {
        return std::nullopt;
    }
    return v;
}

std::size_t find_column(const std::vector<std::string>& header, const std::string& name,
                        const std::filesystem::path& path) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (trim(header[i]) == name) {
            return i;
        }
    }
    throw std::runtime_error(path.string() + ":1: column '" + name + "' not found in header");
}

// Lays records onto a contiguous grid at the given cadence; absent slots become missing.
std::vector<RawRecord> regularize(const RawSeries& raw) {
    std::vector<RawRecord> out;
    if (raw.records.empty()) {
        return out;
    }
    const auto step = raw.cadence;
    out.reserve(raw.records.size());
    for (const auto& rec : raw.records) {
        if (!out.empty()) {
            auto next = out.back().time + step;
            while (next < rec.time) {
                out.push_back({next, std::nullopt});
                next += step;
            }
            if (next != rec.time) {
                throw std::invalid_argument("timestamp " + format_timestamp(rec.time) +
                                            " is off the " + std::to_string(step.count()) +
                                            "-minute cadence");
            }
        }
        out.push_back(rec);
    }
    return out;
}

} // namespace

RawSeries parse_csv(const std::filesystem::path& path, const ColumnMap& columns) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error(path.string() + ": cannot open file");
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error(path.string() + ": empty file");
    }
    const auto header = split_csv_line(line);
    const auto ts_col = find_column(header, columns.timestamp_column, path);
    const auto flow_col = find_column(header, columns.flow_column, path);

    RawSeries raw;
    std::vector<std::size_t> line_numbers;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto cells = split_csv_line(line);
        if (cells.size() <= std::max(ts_col, flow_col)) {
            continue;
        }
        Timestamp t{};
        try {
            t = parse_timestamp(cells[ts_col], columns.time_format);
        } catch (const std::invalid_argument&) {
            continue;
        }
        raw.records.push_back({t, parse_flow(cells[flow_col], columns.missing_token)});
        line_numbers.push_back(line_no);
    }
    if (raw.records.empty()) {
        throw std::runtime_error(path.string() + ": no parseable rows");
    }

    std::vector<std::size_t> order(raw.records.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return raw.records[a].time < raw.records[b].time;
    });
    std::vector<RawRecord> sorted;
    sorted.reserve(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        const auto& rec = raw.records[order[k]];
        if (!sorted.empty() && sorted.back().time == rec.time) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_numbers[order[k]]) +
                                     ": duplicate timestamp " + format_timestamp(rec.time));
        }
        sorted.push_back(rec);
    }
    raw.records = std::move(sorted);

    std::chrono::minutes cadence{5};
    if (raw.records.size() > 1) {
        cadence = raw.records[1].time - raw.records[0].time;
        for (std::size_t i = 2; i < raw.records.size(); ++i) {
            cadence = std::min(cadence, std::chrono::minutes{raw.records[i].time - raw.records[i - 1].time});
        }
    }
    raw.cadence = cadence;
    return raw;
}

RawSeries aggregate_15min(const RawSeries& raw) {
    if (raw.cadence != std::chrono::minutes{5}) {
        throw std::invalid_argument("cadence not 5 minutes (found " + std::to_string(raw.cadence.count()) +
                                    " minutes)");
    }
    std::vector<RawRecord> grid;
    try {
        grid = regularize(raw);
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("cadence not 5 minutes: ") + e.what());
    }

    std::size_t first = 0;
    while (first < grid.size() && minute_of_day(grid[first].time) % kSlotMinutes != 0) {
        ++first;
    }
    RawSeries out;
    out.cadence = std::chrono::minutes{kSlotMinutes};
    const std::size_t tuples = (grid.size() - first) / 3;
    out.records.reserve(tuples);
    for (std::size_t k = 0; k < tuples; ++k) {
        const auto base = first + 3 * k;
        std::optional<double> sum = 0.0;
        for (std::size_t j = 0; j < 3; ++j) {
            const auto& f = grid[base + j].flow;
            if (!f) {
                sum.reset();
                break;
            }
            *sum += *f;
        }
        out.records.push_back({grid[base].time, sum});
    }
    return out;
}

ImputationResult impute_missing_with_report(const RawSeries& raw) {
    if (raw.cadence != std::chrono::minutes{kSlotMinutes}) {
        throw std::invalid_argument("imputation expects a 15-minute series");
    }
    const auto grid = regularize(raw);
    if (grid.empty()) {
        throw std::invalid_argument("cannot impute an empty series");
    }
    const std::size_t week = kSlotsPerWeek;
    const std::size_t three_weeks = 3 * week;

    std::vector<double> values(grid.size(), 0.0);
    std::vector<bool> present(grid.size(), false);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i].flow) {
            values[i] = *grid[i].flow;
            present[i] = true;
        } else if (i < three_weeks) {
            throw std::invalid_argument("missing data within the first 3 weeks at " +
                                        format_timestamp(grid[i].time));
        }
    }

    ImputationReport report;
    std::size_t i = three_weeks;
    while (i < grid.size()) {
        if (present[i]) {
            ++i;
            continue;
        }
        std::size_t gap_end = i;
        while (gap_end < grid.size() && !present[gap_end]) {
            ++gap_end;
        }
        const bool short_gap = gap_end - i < kShortGapLimit;
        for (std::size_t k = i; k < gap_end; ++k) {
            // Chronological fill: every donor index is < k and already present or imputed.
            if (!present[k - week] || (!short_gap && (!present[k - 2 * week] || !present[k - three_weeks]))) {
                throw std::runtime_error("donor slot missing while imputing " + format_timestamp(grid[k].time));
            }
            if (short_gap) {
                values[k] = values[k - week];
                ++report.previous_week;
            } else {
                values[k] = (values[k - week] + values[k - 2 * week] + values[k - three_weeks]) / 3.0;
                ++report.three_week_mean;
            }
            present[k] = true;
        }
        i = gap_end;
    }
    return {TimeSeries(grid.front().time, std::move(values)), report};
}

TimeSeries impute_missing(const RawSeries& raw) { return impute_missing_with_report(raw).series; }

void write_series_csv(const std::filesystem::path& path, const TimeSeries& ts) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error(path.string() + ": cannot open for writing");
    }
    out << "timestamp,flow\n";
    for (std::size_t i = 1; i <= ts.size(); ++i) {
        out << format_timestamp(ts.time_at(i)) << ',' << detail::format_double(ts.at(i)) << '\n';
    }
    if (!out) {
        throw std::runtime_error(path.string() + ": write failed");
    }
}

TimeSeries read_series_csv(const std::filesystem::path& path) {
    const auto raw = parse_csv(path, ColumnMap{});
    if (raw.records.size() > 1 && raw.cadence != std::chrono::minutes{kSlotMinutes}) {
        throw std::runtime_error(path.string() + ": series file must have a 15-minute cadence");
    }
    std::vector<double> values;
    values.reserve(raw.records.size());
    for (std::size_t i = 0; i < raw.records.size(); ++i) {
        const auto& rec = raw.records[i];
        if (i > 0 && rec.time - raw.records[i - 1].time != std::chrono::minutes{kSlotMinutes}) {
            throw std::runtime_error(path.string() + ": gap in series at " + format_timestamp(rec.time));
        }
        if (!rec.flow) {
            throw std::runtime_error(path.string() + ": missing value at " + format_timestamp(rec.time));
        }
        values.push_back(*rec.flow);
    }
    return TimeSeries(raw.records.front().time, std::move(values));
}

} // namespace trajacast
