#include "trajacast/intervals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace trajacast {

void validate_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("alpha must lie in (0,1), got " + std::to_string(alpha));
    }
}

double sorted_quantile(std::span<const double> sorted, double q) {
    if (sorted.empty()) {
        throw std::invalid_argument("quantile of an empty sample");
    }
    if (!(q >= 0.0 && q <= 1.0)) {
        throw std::invalid_argument("quantile level must lie in [0,1]");
    }
    const auto n = static_cast<double>(sorted.size());
    double pos = q * (n + 1.0);
    const double nearest = std::round(pos);
    if (std::abs(pos - nearest) <= 1e-9 * std::max(1.0, nearest)) {
        pos = nearest;
    }
    pos = std::clamp(pos, 1.0, n);
    const double lo = std::floor(pos);
    const double frac = pos - lo;
    const auto i = static_cast<std::size_t>(lo) - 1;
    if (frac == 0.0) {
        return sorted[i];
    }
    return (1.0 - frac) * sorted[i] + frac * sorted[i + 1];
}

double sample_quantile(std::span<const double> sample, double q) {
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    return sorted_quantile(sorted, q);
}

PredictionInterval st_interval(const CandidateSet& candidates, double alpha) {
    validate_alpha(alpha);
    if (candidates.size() < 2) {
        throw std::invalid_argument("ST interval needs at least 2 candidates, got " +
                                    std::to_string(candidates.size()));
    }
    auto v = candidates.values();
    std::sort(v.begin(), v.end());
    return {sorted_quantile(v, alpha / 2.0), sorted_quantile(v, 1.0 - alpha / 2.0), alpha};
}

PredictionInterval error_interval(double forecast, std::span<const double> errors, double alpha) {
    validate_alpha(alpha);
    if (errors.size() < 2) {
        throw std::invalid_argument("error interval needs at least 2 errors, got " + std::to_string(errors.size()));
    }
    std::vector<double> sorted(errors.begin(), errors.end());
    std::sort(sorted.begin(), sorted.end());
    return {forecast - sorted_quantile(sorted, 1.0 - alpha / 2.0), forecast - sorted_quantile(sorted, alpha / 2.0),
            alpha};
}

std::vector<double> hs_window(const ErrorSeries& errors, std::size_t target, std::size_t step, std::size_t length,
                              bool seasonal) {
    std::vector<double> out;
    if (errors.errors.empty() || target <= step) {
        return out;
    }
    const std::size_t newest = target - step;
    if (!seasonal) {
        if (newest < errors.first_index) {
            return out;
        }
        const std::size_t hi = std::min(newest, errors.last_index());
        const std::size_t lo = hi + 1 >= errors.first_index + length ? hi + 1 - length : errors.first_index;
        for (std::size_t i = lo; i <= hi; ++i) {
            out.push_back(errors.at(i));
        }
        return out;
    }
    const std::size_t period = kSlotsPerDay;
    std::size_t lag = period * ((step + period - 1) / period);
    while (out.size() < length && lag < target) {
        const std::size_t i = target - lag;
        if (i < errors.first_index) {
            break;
        }
        if (errors.contains(i)) {
            out.push_back(errors.at(i));
        }
        lag += period;
    }
    return out;
}

PredictionInterval hs_interval(double forecast, const ErrorSeries& errors, std::size_t target, std::size_t step,
                               std::size_t length, double alpha, bool seasonal) {
    const auto window = hs_window(errors, target, step, length, seasonal);
    if (window.size() < 2) {
        throw std::invalid_argument("insufficient error history for HS interval at index " + std::to_string(target));
    }
    return error_interval(forecast, window, alpha);
}

CandidateSet mdst_candidates(const ErrorSeries& errors, std::size_t target, std::size_t step,
                             const MdstConfig& config, int series_start_slot) {
    if (config.neighbors < 2) {
        throw std::invalid_argument("MDST needs K >= 2");
    }
    const auto L = config.window;
    // Query error trajectory ends at t-h; work in indices local to the error series.
    if (target < errors.first_index + L - 1 + 2 * step || target > errors.last_index() + step) {
        throw std::invalid_argument("insufficient error history for MDST at index " + std::to_string(target));
    }
    const std::size_t query_start = target - errors.first_index + 1 - L - step + 1;
    const TrajectoryView query{query_start, L, step};
    const ReferenceSet reference{query_start, 1, query_start - step};
    std::span<const double> values(errors.errors);
    // The query target lies beyond the known errors, so only the window is read.
    std::vector<double> padded;
    if (query.target() > values.size()) {
        padded.assign(values.begin(), values.end());
        padded.resize(query.target(), 0.0);
        values = padded;
    }
    if (config.radius) {
        const int local_start_slot =
            static_cast<int>((static_cast<std::size_t>(series_start_slot) + errors.first_index - 1) % kSlotsPerDay);
        const auto members = seasonal_filter(reference, target_slot(query_start, L, step, local_start_slot),
                                             *config.radius, L, step, local_start_slot);
        return k_nearest(values, query, members, config.distance, config.neighbors);
    }
    return k_nearest(values, query, reference, config.distance, config.neighbors);
}

PredictionInterval mdst_interval(double forecast, const ErrorSeries& errors, std::size_t target, std::size_t step,
                                 const MdstConfig& config, double alpha, int series_start_slot) {
    const auto candidates = mdst_candidates(errors, target, step, config, series_start_slot);
    if (candidates.size() < 2) {
        throw std::invalid_argument("MDST found fewer than 2 error trajectories at index " + std::to_string(target));
    }
    return error_interval(forecast, candidates.values(), alpha);
}

} // namespace trajacast
