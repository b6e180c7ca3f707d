#include "trajacast/dataset.hpp"

#include <stdexcept>
#include <string>

namespace trajacast {

std::vector<TrajectoryView> make_trajectories(std::size_t series_length, std::size_t window, std::size_t step) {
    if (window < 2 || step < 1) {
        throw std::invalid_argument("trajectories need L >= 2 and h >= 1");
    }
    if (series_length < window + step) {
        throw std::invalid_argument("series of length " + std::to_string(series_length) +
                                    " is too short for L=" + std::to_string(window) +
                                    ", h=" + std::to_string(step));
    }
    std::vector<TrajectoryView> views;
    const auto count = series_length - window - step + 1;
    views.reserve(count);
    for (std::size_t i = 1; i <= count; ++i) {
        views.push_back({i, window, step});
    }
    return views;
}

std::vector<TrajectoryView> make_trajectories(const TimeSeries& ts, std::size_t window, std::size_t step) {
    return make_trajectories(ts.size(), window, step);
}

std::string to_string(Side side) { return side == Side::Tune ? "tune" : "test"; }

SplitConfig make_split(std::size_t series_length, std::size_t window, std::size_t step, std::size_t u,
                       std::size_t s, ReferenceFloor floor) {
    if (window < 2 || step < 1 || series_length < window + step) {
        throw std::invalid_argument("split needs L >= 2, h >= 1 and T >= L + h");
    }
    SplitConfig split{series_length, window, step, u, s, 1};
    const auto last = split.last_query();
    if (u < 1 || s <= u || s > last) {
        throw std::invalid_argument("split indices out of range: u=" + std::to_string(u) +
                                    ", s=" + std::to_string(s) + ", last query=" + std::to_string(last));
    }
    const auto tune_size = s - u;
    const auto test_size = last - s + 1;
    if (tune_size != test_size) {
        throw std::invalid_argument("tune and test query sets differ in size: tune=" + std::to_string(tune_size) +
                                    " (u=" + std::to_string(u) + ".." + std::to_string(s - 1) +
                                    "), test=" + std::to_string(test_size) + " (s=" + std::to_string(s) + ".." +
                                    std::to_string(last) + ")");
    }
    split.w = floor == ReferenceFloor::EqualHistory ? last - s + 1 : 1;
    return split;
}

TargetSplit make_target_split(std::size_t series_length, std::size_t tune_first_target,
                              std::size_t test_first_target) {
    auto a = tune_first_target;
    const auto b = test_first_target;
    const auto T = series_length;
    if (a < 2 || b <= a || b > T) {
        throw std::invalid_argument("split boundaries out of range: tune target " + std::to_string(a) +
                                    ", test target " + std::to_string(b) + ", T=" + std::to_string(T));
    }
    if ((T + a + 1) % 2 != 0) {
        ++a;
    }
    const auto ideal = (T + a + 1) / 2;
    const auto diff = ideal > b ? ideal - b : b - ideal;
    if (diff > 1 || ideal <= a) {
        throw std::invalid_argument("tune/test query sides are unequal beyond one index: tune=" +
                                    std::to_string(b - tune_first_target) + ", test=" + std::to_string(T - b + 1) +
                                    " (tune target start " + std::to_string(tune_first_target) +
                                    ", test target start " + std::to_string(b) + ", T=" + std::to_string(T) + ")");
    }
    return {a, ideal, T};
}

SplitConfig split_for(const TargetSplit& targets, std::size_t window, std::size_t step, ReferenceFloor floor) {
    const auto offset = window + step - 1;
    if (targets.tune_first_target <= offset + 1) {
        throw std::invalid_argument("tune query range starts too early for L=" + std::to_string(window) +
                                    ", h=" + std::to_string(step));
    }
    return make_split(targets.last_target, window, step, targets.tune_first_target - offset,
                      targets.test_first_target - offset, floor);
}

TargetSplit build_target_split(const TimeSeries& ts, const SplitDates& dates) {
    const auto a = ts.index_at_or_after(dates.tune_query_start);
    const auto b = ts.index_at_or_after(dates.test_query_start);
    if (a > ts.size() || b > ts.size()) {
        throw std::invalid_argument("split boundary dates fall outside the series");
    }
    return make_target_split(ts.size(), a, b);
}

SplitConfig build_split(const TimeSeries& ts, const SplitDates& dates, std::size_t window, std::size_t step,
                        ReferenceFloor floor) {
    return split_for(build_target_split(ts, dates), window, step, floor);
}

ReferenceSet reference_for(std::size_t q, const SplitConfig& split, Side side) {
    if (q < split.first_query(side) || q > split.last_query(side)) {
        throw std::out_of_range("query " + std::to_string(q) + " is outside the " + to_string(side) +
                                " query range [" + std::to_string(split.first_query(side)) + ", " +
                                std::to_string(split.last_query(side)) + "]");
    }
    const std::size_t first = side == Side::Tune ? 1 : split.w;
    // A reference trajectory's target must be observed by the query's last point.
    const std::size_t last = q > split.step ? q - split.step : 0;
    return {q, first, last};
}

} // namespace trajacast
