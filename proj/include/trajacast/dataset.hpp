#pragma once

#include "trajacast/series.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace trajacast {

/// A length-L window x_start..x_{start+L-1} (1-based) and its step-h target.
/// Views are index triples into a shared series; they never copy values.
struct TrajectoryView {
    std::size_t start = 1;
    std::size_t length = 2;
    std::size_t step = 1;

    std::size_t last() const { return start + length - 1; }
    std::size_t target() const { return start + length - 1 + step; }

    friend bool operator==(const TrajectoryView&, const TrajectoryView&) = default;
};

/// All T-L-h+1 trajectories of a series of length T.
std::vector<TrajectoryView> make_trajectories(std::size_t series_length, std::size_t window, std::size_t step);
std::vector<TrajectoryView> make_trajectories(const TimeSeries& ts, std::size_t window, std::size_t step);

/// Values covered by `view`, where `values[0]` is x_1.
inline std::span<const double> window_values(std::span<const double> values, const TrajectoryView& view) {
    return values.subspan(view.start - 1, view.length);
}
inline double target_value(std::span<const double> values, const TrajectoryView& view) {
    return values[view.target() - 1];
}

enum class Side { Tune, Test };

std::string to_string(Side side);

/// How the test reference floor w is chosen.
enum class ReferenceFloor {
    EqualHistory, ///< s-1 = last-w: tune and test queries see equally long histories
    First,        ///< w = 1: the whole past is eligible
};

/// Query/reference split in trajectory-start indices (1-based).
///
/// Tune queries are [u, s-1], test queries [s, last] with last = T-L-h+1, and
/// |tune| = |test|. Tune query q references [1, q-h]; test query q references
/// [w, q-h]. For h = 1 this is [1, q-1] / [w, q-1].
struct SplitConfig {
    std::size_t series_length = 0;
    std::size_t window = 0;
    std::size_t step = 1;
    std::size_t u = 0;
    std::size_t s = 0;
    std::size_t w = 1;

    std::size_t last_query() const { return series_length - window - step + 1; }
    std::size_t first_query(Side side) const { return side == Side::Tune ? u : s; }
    std::size_t last_query(Side side) const { return side == Side::Tune ? s - 1 : last_query(); }
    std::size_t query_count(Side side) const { return last_query(side) - first_query(side) + 1; }
    TrajectoryView view(std::size_t q) const { return {q, window, step}; }
};

/// Builds a split directly from u and s; validates the equal-size constraint.
SplitConfig make_split(std::size_t series_length, std::size_t window, std::size_t step, std::size_t u,
                       std::size_t s, ReferenceFloor floor = ReferenceFloor::EqualHistory);

/// Split expressed in target indices; independent of L and h, so every model
/// in a comparison forecasts the same observations.
struct TargetSplit {
    std::size_t tune_first_target = 0;
    std::size_t test_first_target = 0;
    std::size_t last_target = 0; ///< T

    std::size_t query_count() const { return last_target - test_first_target + 1; }
};

/// Validates 2b = T + a + 1 (equal tune/test sizes) for a = tune_first_target,
/// b = test_first_target. When it does not hold exactly, b is moved by at most
/// one index; if the parity of T + a + 1 forbids that, a is advanced by one.
TargetSplit make_target_split(std::size_t series_length, std::size_t tune_first_target,
                              std::size_t test_first_target);

SplitConfig split_for(const TargetSplit& targets, std::size_t window, std::size_t step,
                      ReferenceFloor floor = ReferenceFloor::EqualHistory);

struct SplitDates {
    Timestamp tune_query_start;
    Timestamp test_query_start;
};

TargetSplit build_target_split(const TimeSeries& ts, const SplitDates& dates);
SplitConfig build_split(const TimeSeries& ts, const SplitDates& dates, std::size_t window, std::size_t step,
                        ReferenceFloor floor = ReferenceFloor::EqualHistory);

/// Contiguous interval [first, last] of trajectory starts eligible for query q.
struct ReferenceSet {
    std::size_t query = 0;
    std::size_t first = 1;
    std::size_t last = 0;

    bool empty() const { return last < first; }
    std::size_t size() const { return empty() ? 0 : last - first + 1; }
};

ReferenceSet reference_for(std::size_t q, const SplitConfig& split, Side side);

} // namespace trajacast
