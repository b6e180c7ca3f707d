#include "trajacast/series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace trajacast {

std::size_t RawSeries::missing_count() const {
    return static_cast<std::size_t>(
        std::count_if(records.begin(), records.end(), [](const RawRecord& r) { return !r.flow; }));
}

TimeSeries::TimeSeries(Timestamp start, std::vector<double> values)
    : start_(start), values_(std::move(values)) {
    if (values_.empty()) {
        throw std::invalid_argument("time series must hold at least one value");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i]) || values_[i] < 0.0) {
            throw std::invalid_argument("time series value at index " + std::to_string(i + 1) +
                                        " is negative or non-finite");
        }
    }
}

Timestamp TimeSeries::time_at(std::size_t i) const {
    return start_ + std::chrono::minutes{kSlotMinutes * static_cast<long>(i - 1)};
}

int TimeSeries::slot_at(std::size_t i) const {
    return static_cast<int>((static_cast<std::size_t>(start_slot()) + i - 1) % kSlotsPerDay);
}

std::size_t TimeSeries::index_at_or_after(Timestamp t) const {
    if (t <= start_) {
        return 1;
    }
    const auto mins = (t - start_).count();
    const auto idx = static_cast<std::size_t>((mins + kSlotMinutes - 1) / kSlotMinutes) + 1;
    return std::min(idx, values_.size() + 1);
}

RawSeries to_raw(const TimeSeries& ts) {
    RawSeries raw;
    raw.cadence = std::chrono::minutes{kSlotMinutes};
    raw.records.reserve(ts.size());
    for (std::size_t i = 1; i <= ts.size(); ++i) {
        raw.records.push_back({ts.time_at(i), ts.at(i)});
    }
    return raw;
}

} // namespace trajacast
